#include "kgw/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include "kgw/kernels.hpp"
#include "kgw/rearrange.hpp"

namespace kgw {
namespace {

// A charge-mode component below this mass is treated as collapsed.
constexpr double kCollapseFloor = 1e-8;
constexpr double kGrowth = 1.5;
constexpr int kMaxBacktracks = 60;

double dot(const GridSpec& g, const std::vector<double>& a, const std::vector<double>& b) {
  return kernels::weighted_dot(a, b, g.weights);
}

// Shift of the preconditioner K = s - Laplacian: the scale of the lowest
// Dirichlet mode of the domain.
double preconditioner_shift(const GridSpec& grid) {
  const double l = grid.length();
  return std::numbers::pi * std::numbers::pi / (l * l);
}

// Q K^{-1} Q g with Q the weighted projector orthogonal to u.
std::vector<double> tangent_direction(const GridSpec& grid, const std::vector<double>& g,
                                      const std::vector<double>& u, double u2, double shift) {
  std::vector<double> gt = g;
  if (u2 > 0.0) {
    const double a = dot(grid, g, u) / u2;
    for (std::size_t i = 0; i < gt.size(); ++i) gt[i] -= a * u[i];
  }
  std::vector<double> d = solve_shifted_laplacian(grid, shift, gt);
  if (u2 > 0.0) {
    const double b = dot(grid, d, u) / u2;
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= b * u[i];
  }
  return d;
}

void absolute_value(RealField& f) {
  for (auto& comp : f.u)
    for (double& x : comp) x = std::abs(x);
}

void renormalize(const GridSpec& grid, RealField& f, const Pair& rho) {
  for (std::size_t j = 0; j < 2; ++j) {
    const double n2 = dot(grid, f.u[j], f.u[j]);
    if (!(n2 > 0.0)) throw DivergedConstraint("component " + std::to_string(j + 1) + " vanished");
    const double s = std::sqrt(rho[j] / n2);
    for (double& x : f.u[j]) x *= s;
  }
}

struct FlowResult {
  RealField field;
  double value = 0.0;
  double value_error = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<TracePoint> trace;
};

// Generic monotone descent: trial = project(u - tau d), accepted only when
// the objective strictly decreases.
template <class Value, class Direction, class Project, class Magnitude>
FlowResult run_flow(const GridSpec& grid, RealField u, const SolverConfig& cfg, Value value,
                    Direction direction, Project project, Magnitude magnitude) {
  FlowResult res;
  double current = value(u);
  double tau = cfg.step;
  double last_decrease = std::abs(current);
  std::size_t quiet = 0;
  auto record = [&](const RealField& f, double v) {
    if (cfg.record_trace)
      res.trace.push_back({v, dirichlet_energy(grid, f.u[0]) + dirichlet_energy(grid, f.u[1])});
  };
  record(u, current);

  std::size_t it = 0;
  for (; it < cfg.max_iters; ++it) {
    const RealField d = direction(u);
    bool accepted = false;
    RealField trial(grid.cells);
    double trial_value = current;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < grid.cells; ++i) trial.u[j][i] = u.u[j][i] - tau * d.u[j][i];
      project(trial);
      trial_value = value(trial);
      if (std::isfinite(trial_value) && trial_value < current) {
        accepted = true;
        break;
      }
      tau *= cfg.backtrack;
    }
    if (!accepted) {
      // No representable decrease along a descent direction: the flow sits
      // at its fixed point up to rounding.
      res.converged = true;
      break;
    }
    const double decrease = current - trial_value;
    const double rel = decrease / std::max(magnitude(trial, trial_value), std::numeric_limits<double>::min());
    u = std::move(trial);
    current = trial_value;
    last_decrease = decrease;
    tau *= kGrowth;

    if (cfg.sweep_every > 0 && (it + 1) % cfg.sweep_every == 0) {
      RealField swept(grid.cells);
      for (std::size_t j = 0; j < 2; ++j) swept.u[j] = radial_decreasing_sort(u.u[j]);
      project(swept);
      const double v = value(swept);
      if (v <= current) {
        u = std::move(swept);
        current = v;
      }
    }
    record(u, current);

    quiet = rel < cfg.tol ? quiet + 1 : 0;
    if (quiet >= cfg.patience) {
      res.converged = true;
      ++it;
      break;
    }
  }
  res.iterations = it;
  res.field = std::move(u);
  res.value = current;
  // Linear convergence with contraction <= 0.9 leaves at most 9x the last
  // accepted decrease; rounding adds a few ulps of the magnitude.
  res.value_error = 10.0 * last_decrease + 1e-13 * std::abs(current);
  return res;
}

void fill_multipliers(const GridSpec& grid, const ModelParams& params, GroundState& gs) {
  const Multipliers mult = multipliers_and_residual(grid, params, gs.field);
  gs.lambda = mult.lambda;
  gs.residual = mult.residual;
  gs.residual_scale = mult.scale;
}

}  // namespace

std::string to_string(StepScheme s) { return s == StepScheme::gradient ? "gradient" : "sobolev"; }

StepScheme step_scheme_from_string(const std::string& s) {
  if (s == "gradient") return StepScheme::gradient;
  if (s == "sobolev") return StepScheme::sobolev;
  throw std::invalid_argument("unknown step scheme '" + s + "'");
}

void SolverConfig::validate() const {
  if (!(step > 0.0)) throw std::invalid_argument("solver step must be positive");
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("solver tol must lie in (0, 1)");
  if (max_iters < 1) throw std::invalid_argument("solver max_iters must be >= 1");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw std::invalid_argument("backtracking factor must lie in (0, 1)");
  if (patience < 1) throw std::invalid_argument("solver patience must be >= 1");
}

RealField initial_guess(const GridSpec& grid, const Pair& rho, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  const double width = 0.25 * grid.length();
  RealField f(grid.cells);
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t i = 0; i < grid.cells; ++i) {
      const double x = grid.nodes[i] / width;
      const double bump = std::exp(-0.5 * x * x) * (1.0 + 0.05 * noise(rng));
      f.u[j][i] = grid.is_boundary_cell(i) ? 0.0 : bump;
    }
  }
  renormalize(grid, f, rho);
  return f;
}

Multipliers multipliers_and_residual(const GridSpec& grid, const ModelParams& params, const RealField& field) {
  const Pair n2 = l2_norms_squared(grid, field);
  if (!(n2[0] > 0.0 && n2[1] > 0.0)) throw std::invalid_argument("multipliers need nonvanishing components");
  const RealField g = grad_J(grid, params, field);
  Multipliers m;
  double res2 = 0.0;
  double scale2 = 0.0;
  for (std::size_t j = 0; j < 2; ++j) {
    // <grad, u_j> = |Du_j|^2 + int D_jF u_j by summation by parts.
    m.lambda[j] = dot(grid, g.u[j], field.u[j]) / n2[j];
    std::vector<double> defect(grid.cells);
    std::vector<double> lap = apply_laplacian(grid, field.u[j]);
    for (std::size_t i = 0; i < grid.cells; ++i) {
      defect[i] = g.u[j][i] - m.lambda[j] * field.u[j][i];
      if (grid.is_boundary_cell(i)) lap[i] = 0.0;
    }
    res2 += dot(grid, defect, defect);
    scale2 += dot(grid, lap, lap);
  }
  m.residual = std::sqrt(res2);
  m.scale = std::sqrt(scale2);
  return m;
}

GroundState minimize_mass_constrained(const GridSpec& grid, const ModelParams& params, const Pair& rho,
                                      const SolverConfig& cfg, const RealField* start) {
  require_valid(params);
  cfg.validate();
  if (grid.kind != GridKind::radial) throw std::invalid_argument("ground states are computed on radial grids");
  if (params.dimension != grid.dimension) throw std::invalid_argument("model dimension does not match grid");
  if (!(rho[0] > 0.0 && rho[1] > 0.0)) throw std::invalid_argument("masses rho_j must be positive");

  RealField u0 = start ? *start : initial_guess(grid, rho, cfg.seed);
  require_field_on_grid(grid, u0);
  absolute_value(u0);
  renormalize(grid, u0, rho);

  const double shift = preconditioner_shift(grid);
  auto value = [&](const RealField& f) { return eval_J(grid, params, f); };
  auto direction = [&](const RealField& f) {
    RealField g = grad_J(grid, params, f);
    if (cfg.scheme == StepScheme::gradient) return g;
    for (std::size_t j = 0; j < 2; ++j) g.u[j] = tangent_direction(grid, g.u[j], f.u[j], rho[j], shift);
    return g;
  };
  auto project = [&](RealField& f) {
    absolute_value(f);
    renormalize(grid, f, rho);
  };
  auto magnitude = [&](const RealField& f, double v) {
    return std::abs(v) + 0.5 * (dirichlet_energy(grid, f.u[0]) + dirichlet_energy(grid, f.u[1]));
  };
  FlowResult flow = run_flow(grid, std::move(u0), cfg, value, direction, project, magnitude);

  GroundState gs;
  gs.field = std::move(flow.field);
  gs.rho = rho;
  gs.value = flow.value;
  gs.value_error = flow.value_error;
  gs.iterations = flow.iterations;
  gs.converged = flow.converged;
  gs.trace = std::move(flow.trace);
  fill_multipliers(grid, params, gs);
  for (std::size_t j = 0; j < 2; ++j) {
    const double w2 = gs.lambda[j] + params.mass(j) * params.mass(j);
    gs.omega[j] = w2 > 0.0 ? std::sqrt(w2) : std::numeric_limits<double>::quiet_NaN();
  }
  return gs;
}

GroundState minimize_charge_constrained(const GridSpec& grid, const ModelParams& params, const Pair& charges,
                                        const SolverConfig& cfg) {
  require_valid(params);
  cfg.validate();
  if (grid.kind != GridKind::radial) throw std::invalid_argument("ground states are computed on radial grids");
  if (params.dimension != grid.dimension) throw std::invalid_argument("model dimension does not match grid");
  if (!(charges[0] > 0.0 && charges[1] > 0.0)) throw std::invalid_argument("charges C_j must be positive");

  // Start near w_j = m_j, i.e. |u_j|^2 = C_j / m_j.
  RealField u0 = initial_guess(grid, {charges[0] / params.m1, charges[1] / params.m2}, cfg.seed);
  const double shift = preconditioner_shift(grid);

  auto check_collapse = [&](const RealField& f) {
    const Pair n2 = l2_norms_squared(grid, f);
    for (std::size_t j = 0; j < 2; ++j)
      if (!(n2[j] >= kCollapseFloor))
        throw DivergedConstraint("component " + std::to_string(j + 1) + " collapsed below the mass floor");
    return n2;
  };
  auto value = [&](const RealField& f) { return eval_energy_charge(grid, params, f, charges); };
  auto direction = [&](const RealField& f) {
    RealField g = grad_energy_charge(grid, params, f, charges);
    if (cfg.scheme == StepScheme::gradient) return g;
    const Pair n2 = l2_norms_squared(grid, f);
    for (std::size_t j = 0; j < 2; ++j) {
      // Along u_j the functional curves like |Du|^2 + m^2 |u|^2 + 3 C^2/|u|^2;
      // that direction gets a Newton-scaled step, the rest the K^{-1} metric.
      const double mj = params.mass(j);
      const double dj = dirichlet_energy(grid, f.u[j]);
      const double curv = (dj + mj * mj * n2[j] + 3.0 * charges[j] * charges[j] / n2[j]) / n2[j];
      const double along = dot(grid, g.u[j], f.u[j]) / n2[j];
      std::vector<double> d = tangent_direction(grid, g.u[j], f.u[j], n2[j], shift);
      for (std::size_t i = 0; i < grid.cells; ++i) d[i] += (along / curv) * f.u[j][i];
      g.u[j] = std::move(d);
    }
    return g;
  };
  auto project = [&](RealField& f) {
    absolute_value(f);
    check_collapse(f);
  };
  auto magnitude = [](const RealField&, double v) { return std::abs(v); };
  check_collapse(u0);
  FlowResult flow = run_flow(grid, std::move(u0), cfg, value, direction, project, magnitude);

  GroundState gs;
  gs.field = std::move(flow.field);
  gs.rho = l2_norms_squared(grid, gs.field);
  for (std::size_t j = 0; j < 2; ++j) gs.omega[j] = charges[j] / gs.rho[j];
  gs.value = flow.value;
  gs.value_error = flow.value_error;
  gs.iterations = flow.iterations;
  gs.converged = flow.converged;
  gs.trace = std::move(flow.trace);
  fill_multipliers(grid, params, gs);
  return gs;
}

ChargeCrossCheck charge_mass_cross_check(const GridSpec& grid, const ModelParams& params,
                                         const GroundState& charge_state, const SolverConfig& cfg) {
  ChargeCrossCheck cc;
  cc.value_charge_state = eval_J(grid, params, charge_state.field);
  cc.mass_run = minimize_mass_constrained(grid, params, charge_state.rho, cfg);
  cc.value_mass_run = cc.mass_run.value;
  cc.relative_difference = std::abs(cc.value_charge_state - cc.value_mass_run) /
                           std::max(std::abs(cc.value_mass_run), std::numeric_limits<double>::min());
  return cc;
}

bool SubadditivityTable::all_positive() const {
  return std::all_of(rows.begin(), rows.end(), [](const SubadditivityRow& r) { return r.strictly_positive; });
}

void validate_split(const Pair& rho, const Pair& tau) {
  if (tau == rho) throw std::invalid_argument("split equals total");
  for (std::size_t j = 0; j < 2; ++j) {
    if (!(tau[j] > 0.0 && tau[j] <= rho[j]))
      throw std::invalid_argument("split component " + std::to_string(j + 1) + " outside (0, rho_j]");
    if (!(tau[j] < rho[j]))
      throw std::invalid_argument("split leaves an empty component in rho - tau");
  }
}

SubadditivityTable subadditivity_scan(const GridSpec& grid, const ModelParams& params, const Pair& rho,
                                      const std::vector<Pair>& splits, const SolverConfig& cfg) {
  for (const Pair& tau : splits) validate_split(rho, tau);
  require_valid(params);

  // Distinct masses to solve for, each exactly once.
  std::map<Pair, GroundState> solved;
  solved[rho];
  for (const Pair& tau : splits) {
    solved[tau];
    solved[{rho[0] - tau[0], rho[1] - tau[1]}];
  }
  std::vector<Pair> keys;
  for (const auto& kv : solved) keys.push_back(kv.first);
  std::vector<GroundState> results(keys.size());
  const auto nk = static_cast<std::ptrdiff_t>(keys.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < nk; ++k)
    results[static_cast<std::size_t>(k)] =
        minimize_mass_constrained(grid, params, keys[static_cast<std::size_t>(k)], cfg);
  for (std::size_t k = 0; k < keys.size(); ++k) solved[keys[k]] = std::move(results[k]);

  SubadditivityTable table;
  table.rho = rho;
  const GroundState& total = solved.at(rho);
  for (const Pair& tau : splits) {
    const GroundState& a = solved.at(tau);
    const GroundState& b = solved.at({rho[0] - tau[0], rho[1] - tau[1]});
    SubadditivityRow row;
    row.tau = tau;
    row.I_tau = a.value;
    row.I_rest = b.value;
    row.I_rho = total.value;
    row.margin = a.value + b.value - total.value;
    row.tolerance = a.value_error + b.value_error + total.value_error;
    row.converged = a.converged && b.converged && total.converged;
    row.strictly_positive = row.margin > row.tolerance;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace kgw
