#pragma once

// Ground states by constrained minimisation.
//
// minimize_mass_constrained   J over { |u_j|^2 = rho_j }      (normalised gradient flow)
// minimize_charge_constrained E over { w_j |u_j|^2 = C_j }    (w eliminated, free flow in u)
//
// Every accepted step strictly lowers the functional; rejected trial steps
// are shrunk by the backtracking factor. Components are kept nonnegative by
// replacing u with |u| after each step, which never raises J or E.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kgw/grid.hpp"
#include "kgw/model.hpp"

namespace kgw {

enum class StepScheme {
  /// u <- P(u - tau grad J)
  gradient,
  /// u <- P(u - tau K^{-1}(grad J - lambda u)), K = s - Laplacian
  sobolev,
};

std::string to_string(StepScheme s);
StepScheme step_scheme_from_string(const std::string& s);

struct SolverConfig {
  double step = 1.0;
  /// Stop once the relative decrease stays below tol for `patience` steps.
  double tol = 1e-13;
  std::size_t max_iters = 20000;
  double backtrack = 0.5;
  std::uint64_t seed = 1;
  StepScheme scheme = StepScheme::sobolev;
  /// Radial monotone sweep period; 0 disables.
  std::size_t sweep_every = 50;
  std::size_t patience = 3;
  bool record_trace = false;

  void validate() const;
  bool operator==(const SolverConfig&) const = default;
};

struct TracePoint {
  double value;
  double dirichlet;
};

struct GroundState {
  RealField field;
  Pair rho{};
  Pair omega{};
  Pair lambda{};
  double value = 0.0;
  /// Conservative bound on value - (limit of the flow).
  double value_error = 0.0;
  double residual = 0.0;
  /// |Lap u| over both components; residual / residual_scale is dimensionless.
  double residual_scale = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<TracePoint> trace;

  double relative_residual() const { return residual_scale > 0.0 ? residual / residual_scale : residual; }
};

struct DivergedConstraint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Positive radial bump with a seed-controlled multiplicative perturbation,
/// scaled to |u_j|^2 = rho_j.
RealField initial_guess(const GridSpec& grid, const Pair& rho, std::uint64_t seed);

GroundState minimize_mass_constrained(const GridSpec& grid, const ModelParams& params, const Pair& rho,
                                      const SolverConfig& cfg, const RealField* start = nullptr);

GroundState minimize_charge_constrained(const GridSpec& grid, const ModelParams& params,
                                        const Pair& charges, const SolverConfig& cfg);

struct Multipliers {
  Pair lambda{};
  double residual = 0.0;
  double scale = 0.0;
};

Multipliers multipliers_and_residual(const GridSpec& grid, const ModelParams& params, const RealField& field);

struct ChargeCrossCheck {
  double value_charge_state = 0.0;  // J of the charge ground state
  double value_mass_run = 0.0;      // J of a mass-constrained run at rho = |u_j|^2
  double relative_difference = 0.0;
  GroundState mass_run;
};

ChargeCrossCheck charge_mass_cross_check(const GridSpec& grid, const ModelParams& params,
                                         const GroundState& charge_state, const SolverConfig& cfg);

struct SubadditivityRow {
  Pair tau{};
  double I_tau = 0.0;
  double I_rest = 0.0;
  double I_rho = 0.0;
  double margin = 0.0;
  /// Sum of the value_error bounds of the three solves.
  double tolerance = 0.0;
  bool converged = false;
  bool strictly_positive = false;
};

struct SubadditivityTable {
  Pair rho{};
  std::vector<SubadditivityRow> rows;
  bool all_positive() const;
};

/// Throws std::invalid_argument("split equals total") when tau == rho.
void validate_split(const Pair& rho, const Pair& tau);

SubadditivityTable subadditivity_scan(const GridSpec& grid, const ModelParams& params, const Pair& rho,
                                      const std::vector<Pair>& splits, const SolverConfig& cfg);

}  // namespace kgw
