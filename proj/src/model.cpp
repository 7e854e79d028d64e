#include "kgw/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace kgw {
namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// Minimum of f over [lo, hi]: uniform scan, then golden-section refinement
// inside the bracketing cells of the best sample.
template <class Fn>
std::pair<double, double> scan_minimum(Fn f, double lo, double hi, int samples = 20000) {
  double best_t = lo;
  double best = f(lo);
  const double dt = (hi - lo) / samples;
  for (int k = 1; k <= samples; ++k) {
    const double t = lo + k * dt;
    const double v = f(t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  double a = std::max(lo, best_t - dt);
  double b = std::min(hi, best_t + dt);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 100; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  const double t = 0.5 * (a + b);
  const double v = f(t);
  if (v < best) return {t, v};
  return {best_t, best};
}

}  // namespace

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const AssumptionCheck& c) { return c.passed; });
}

std::string ValidationReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.passed) return c.name + " violated: " + c.detail;
  return {};
}

ValidationReport validate_params(const ModelParams& prm) {
  ValidationReport rep;
  const double n = prm.dimension;

  auto& a1 = rep.checks[0];
  a1.name = "A1";
  const double gamma_max = 1.0 + 2.0 / n;
  a1.passed = prm.dimension >= 3 && prm.beta >= 0.0 && prm.gamma > 1.0 && prm.gamma < gamma_max;
  a1.detail = "gamma=" + fmt(prm.gamma) + " must lie in (1, " + fmt(gamma_max) + "), beta=" + fmt(prm.beta) +
              " >= 0, n=" + std::to_string(prm.dimension) + " >= 3";

  auto& a2 = rep.checks[1];
  a2.name = "A2";
  const double crit = 2.0 * n / (n - 2.0);
  a2.passed = 2.0 * prm.gamma < prm.p && prm.p < crit;
  a2.detail = "p=" + fmt(prm.p) + " must lie in (2 gamma, 2n/(n-2)) = (" + fmt(2.0 * prm.gamma) + ", " +
              fmt(crit) + ")";

  auto& a3 = rep.checks[2];
  a3.name = "A3";
  a3.passed = prm.a >= 0.0;
  a3.detail = "G = a(|u1|^p + |u2|^p) needs a=" + fmt(prm.a) + " >= 0";

  auto& a4 = rep.checks[3];
  a4.name = "A4";
  a4.passed = a3.passed;
  a4.detail = "int G is invariant under rearrangement (equimeasurable components)";

  auto& a5 = rep.checks[4];
  a5.name = "A5";
  const double m = std::min(prm.m1, prm.m2);
  const double two_gamma = 2.0 * prm.gamma;
  auto h = [&](double t) {
    return -0.5 * prm.beta * std::pow(t, two_gamma) + prm.a * std::pow(t, prm.p) + 0.5 * m * m * t * t;
  };
  if (!(prm.m1 > 0.0 && prm.m2 > 0.0)) {
    a5.passed = false;
    a5.detail = "masses must be positive";
  } else if (prm.beta == 0.0) {
    a5.passed = prm.a >= 0.0;
    a5.detail = "beta=0: F + m^2 u^2/2 >= 0 trivially";
  } else if (prm.a <= 0.0) {
    a5.passed = false;
    rep.a5_min_h = -std::numeric_limits<double>::infinity();
    rep.a5_minimal_mass = std::numeric_limits<double>::infinity();
    a5.detail = "a=0: the mass term cannot dominate |u|^(2 gamma) growth";
  } else if (!(prm.p > two_gamma)) {
    a5.passed = false;
    a5.detail = "not checkable while p <= 2 gamma";
  } else {
    // Beyond T* the a t^p term exceeds beta t^(2 gamma), so h > 0 there.
    const double t_star = 2.0 * std::pow(prm.beta / prm.a, 1.0 / (prm.p - two_gamma));
    rep.a5_t_star = t_star;
    rep.a5_min_h = scan_minimum(h, 0.0, t_star).second;
    // h(t) >= 0 for all t iff m^2 >= sup_t g(t), g(t) = beta t^(2g-2) - 2 a t^(p-2).
    auto neg_g = [&](double t) {
      return -(prm.beta * std::pow(t, two_gamma - 2.0) - 2.0 * prm.a * std::pow(t, prm.p - 2.0));
    };
    const double g_max = -scan_minimum(neg_g, 0.0, t_star).second;
    rep.a5_minimal_mass = std::sqrt(std::max(0.0, g_max));
    a5.passed = rep.a5_min_h >= -1e-12 * std::max(1.0, std::abs(h(t_star)));
    a5.detail = "min h on [0," + fmt(t_star) + "] = " + fmt(rep.a5_min_h) + ", minimal admissible mass " +
                fmt(rep.a5_minimal_mass) + ", min(m1,m2)=" + fmt(m);
  }
  return rep;
}

void require_valid(const ModelParams& params) {
  const ValidationReport rep = validate_params(params);
  if (!rep.ok()) throw std::invalid_argument(rep.first_failure());
}

NonlinearityValue nonlinearity_eval(const ModelParams& params, double z1, double z2) {
  const auto pt = kernels::coupling_at_moduli(params.coupling(), std::abs(z1), std::abs(z2));
  auto sgn = [](double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); };
  return {pt.F, pt.f1 * sgn(z1), pt.f2 * sgn(z2)};
}

void require_field_on_grid(const GridSpec& grid, const RealField& field) {
  if (field.u[0].size() != grid.cells || field.u[1].size() != grid.cells)
    throw std::invalid_argument("field does not match grid: expected " + std::to_string(grid.cells) + " cells");
}

Pair l2_norms_squared(const GridSpec& grid, const RealField& field) {
  require_field_on_grid(grid, field);
  return {kernels::weighted_dot(field.u[0], field.u[0], grid.weights),
          kernels::weighted_dot(field.u[1], field.u[1], grid.weights)};
}

double eval_J(const GridSpec& grid, const ModelParams& params, const RealField& field) {
  require_field_on_grid(grid, field);
  const double kinetic = dirichlet_energy(grid, field.u[0]) + dirichlet_energy(grid, field.u[1]);
  return 0.5 * kinetic + kernels::coupling_integral(params.coupling(), field.u[0], field.u[1], grid.weights);
}

RealField grad_J(const GridSpec& grid, const ModelParams& params, const RealField& field) {
  require_field_on_grid(grid, field);
  require_supported(grid, field.u[0]);
  require_supported(grid, field.u[1]);
  RealField g(grid.cells);
  kernels::coupling_gradient(params.coupling(), field.u[0], field.u[1], g.u[0], g.u[1]);
  for (std::size_t j = 0; j < 2; ++j) {
    const std::vector<double> lap = apply_laplacian(grid, field.u[j]);
    for (std::size_t i = 0; i < grid.cells; ++i)
      g.u[j][i] = grid.is_boundary_cell(i) ? 0.0 : g.u[j][i] - lap[i];
  }
  return g;
}

double eval_energy_frequency(const GridSpec& grid, const ModelParams& params, const RealField& field,
                             const Pair& omega) {
  const Pair n2 = l2_norms_squared(grid, field);
  double e = eval_J(grid, params, field);
  for (std::size_t j = 0; j < 2; ++j) {
    const double mj = params.mass(j);
    e += 0.5 * (mj * mj + omega[j] * omega[j]) * n2[j];
  }
  return e;
}

double eval_energy_charge(const GridSpec& grid, const ModelParams& params, const RealField& field,
                          const Pair& charges) {
  const Pair n2 = l2_norms_squared(grid, field);
  double e = eval_J(grid, params, field);
  for (std::size_t j = 0; j < 2; ++j) {
    if (!(n2[j] > 0.0)) throw std::invalid_argument("charge-mode energy needs nonvanishing components");
    const double mj = params.mass(j);
    e += 0.5 * mj * mj * n2[j] + 0.5 * charges[j] * charges[j] / n2[j];
  }
  return e;
}

RealField grad_energy_charge(const GridSpec& grid, const ModelParams& params, const RealField& field,
                             const Pair& charges) {
  const Pair n2 = l2_norms_squared(grid, field);
  RealField g = grad_J(grid, params, field);
  for (std::size_t j = 0; j < 2; ++j) {
    if (!(n2[j] > 0.0)) throw std::invalid_argument("charge-mode energy needs nonvanishing components");
    const double mj = params.mass(j);
    const double coef = mj * mj - charges[j] * charges[j] / (n2[j] * n2[j]);
    for (std::size_t i = 0; i < grid.cells; ++i)
      if (!grid.is_boundary_cell(i)) g.u[j][i] += coef * field.u[j][i];
  }
  return g;
}

double base_profile_radius(int dimension) {
  // Midpoint rule on the unit-support bump; the angular factor cancels.
  constexpr int kCells = 1 << 14;
  const double h = 1.0 / kCells;
  double mass = 0.0;
  double grad = 0.0;
  for (int i = 0; i < kCells; ++i) {
    const double r = (i + 0.5) * h;
    const double s = 1.0 - r * r;
    const double jac = std::pow(r, dimension - 1);
    mass += s * s * s * s * jac;
    grad += 16.0 * r * r * s * s * jac;
  }
  return std::sqrt(grad / mass);
}

RealField scaling_trial(const ModelParams& params, const GridSpec& grid, const Pair& rho, double r_scale) {
  if (grid.kind != GridKind::radial) throw std::invalid_argument("scaling trial needs a radial grid");
  if (params.dimension != grid.dimension)
    throw std::invalid_argument("model dimension does not match grid dimension");
  if (!(rho[0] > 0.0 && rho[1] > 0.0)) throw std::invalid_argument("masses rho_j must be positive");
  if (!(r_scale > 0.0)) throw std::invalid_argument("R_scale must be positive");
  const double support = base_profile_radius(grid.dimension) * r_scale;
  if (support > grid.extent - grid.spacing)
    throw std::invalid_argument("grid too small: dilated support " + fmt(support) + " exceeds extent " +
                                fmt(grid.extent));
  std::vector<double> shape(grid.cells, 0.0);
  for (std::size_t i = 0; i < grid.cells; ++i) {
    const double x = grid.nodes[i] / support;
    if (x < 1.0) shape[i] = (1.0 - x * x) * (1.0 - x * x);
  }
  const double norm2 = kernels::weighted_dot(shape, shape, grid.weights);
  // s2 = lambda s1 with lambda = sqrt(rho2 / rho1) since both share the shape.
  RealField out(grid.cells);
  for (std::size_t j = 0; j < 2; ++j) {
    const double s = std::sqrt(rho[j] / norm2);
    for (std::size_t i = 0; i < grid.cells; ++i) out.u[j][i] = s * shape[i];
  }
  return out;
}

}  // namespace kgw
