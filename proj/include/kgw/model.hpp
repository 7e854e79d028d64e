#pragma once

// The coupled nonlinearity F(u) = -beta |u1 u2|^gamma + a (|u1|^p + |u2|^p),
// the admissibility conditions on its parameters, and the two functionals
//
//   J(u)    = 1/2 sum_j |Du_j|^2 + int F(u)
//   E(u, w) = 1/2 sum_j (|Du_j|^2 + m_j^2 |u_j|^2 + w_j^2 |u_j|^2) + int F(u)
//
// evaluated on a grid, together with their L2 gradients.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "kgw/grid.hpp"
#include "kgw/kernels.hpp"

namespace kgw {

using Pair = std::array<double, 2>;

struct ModelParams {
  double beta = 1.0;
  double gamma = 1.5;
  double a = 0.0;
  double p = 4.0;
  double m1 = 1.0;
  double m2 = 1.0;
  int dimension = 3;

  kernels::Coupling coupling() const { return {beta, gamma, a, p}; }
  double mass(std::size_t j) const { return j == 0 ? m1 : m2; }
  bool operator==(const ModelParams&) const = default;
};

struct AssumptionCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::array<AssumptionCheck, 5> checks;
  /// min of h(t) = -(beta/2) t^(2 gamma) + a t^p + (min m)^2 t^2 / 2 on [0, T*].
  double a5_min_h = 0.0;
  double a5_t_star = 0.0;
  /// Smallest min(m1, m2) for which the A5 reduction holds (inf when a = 0 < beta).
  double a5_minimal_mass = 0.0;

  bool ok() const;
  /// "A<k> violated: ..." for the first failing check, empty when ok().
  std::string first_failure() const;
};

ValidationReport validate_params(const ModelParams& params);
/// Throws std::invalid_argument carrying first_failure() when validation fails.
void require_valid(const ModelParams& params);

struct NonlinearityValue {
  double F;
  double D1F;
  double D2F;
};

NonlinearityValue nonlinearity_eval(const ModelParams& params, double z1, double z2);

/// Two real components sampled on a grid. The grid is carried separately.
struct RealField {
  std::array<std::vector<double>, 2> u;

  RealField() = default;
  explicit RealField(std::size_t cells) : u{std::vector<double>(cells, 0.0), std::vector<double>(cells, 0.0)} {}
  RealField(std::vector<double> u1, std::vector<double> u2) : u{std::move(u1), std::move(u2)} {}

  std::size_t cells() const { return u[0].size(); }
  bool operator==(const RealField&) const = default;
};

enum class ConstraintKind { mass, charge };

struct ConstraintSpec {
  ConstraintKind kind = ConstraintKind::mass;
  Pair values{1.0, 1.0};
  bool operator==(const ConstraintSpec&) const = default;
};

void require_field_on_grid(const GridSpec& grid, const RealField& field);

/// |u_j|^2 for both components.
Pair l2_norms_squared(const GridSpec& grid, const RealField& field);

double eval_J(const GridSpec& grid, const ModelParams& params, const RealField& field);

/// Component j is -Lap u_j + D_j F(u); boundary cells are zero because
/// admissible variations vanish there.
RealField grad_J(const GridSpec& grid, const ModelParams& params, const RealField& field);

double eval_energy_frequency(const GridSpec& grid, const ModelParams& params, const RealField& field,
                             const Pair& omega);
/// Frequencies eliminated through w_j = C_j / |u_j|^2.
double eval_energy_charge(const GridSpec& grid, const ModelParams& params, const RealField& field,
                          const Pair& charges);
/// L2 gradient of eval_energy_charge with respect to u.
RealField grad_energy_charge(const GridSpec& grid, const ModelParams& params, const RealField& field,
                             const Pair& charges);

/// Support radius b of the base bump (1 - (r/b)^2)^2 for which |v| = |Dv| in R^n.
double base_profile_radius(int dimension);

/// (s1 v(x/R), s2 v(x/R)) renormalised to |u_j|^2 = rho_j.
RealField scaling_trial(const ModelParams& params, const GridSpec& grid, const Pair& rho,
                        double r_scale);

}  // namespace kgw
