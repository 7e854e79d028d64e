#include "kgw/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kgw/kernels.hpp"

namespace kgw {
namespace {

void require_reference_grid(const GridSpec& grid, const PhaseState& state, const OrbitReference& ref) {
  if (!grid.same_geometry(ref.grid)) throw std::invalid_argument("state and reference grids differ");
  for (std::size_t j = 0; j < 2; ++j)
    if (state.phi[j].size() != grid.cells || state.phit[j].size() != grid.cells ||
        ref.ground_state.field.u[j].size() != grid.cells)
      throw std::invalid_argument("state and reference grids differ");
}

std::vector<cplx> complexify(const std::vector<double>& u, cplx factor) {
  std::vector<cplx> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = factor * u[i];
  return out;
}

// Squared X-distance of component j to (lambda u_j, -i w_j lambda u_j).
double component_distance2(const GridSpec& grid, const PhaseState& s, const OrbitReference& ref, std::size_t j,
                           cplx lambda) {
  const auto& u = ref.ground_state.field.u[j];
  const double w = ref.ground_state.omega[j];
  std::vector<cplx> dphi(grid.cells), dphit(grid.cells);
  for (std::size_t i = 0; i < grid.cells; ++i) {
    dphi[i] = s.phi[j][i] - lambda * u[i];
    dphit[i] = s.phit[j][i] - cplx(0.0, -w) * lambda * u[i];
  }
  double d2 = kernels::weighted_norm2(dphi, grid.weights) + kernels::weighted_norm2(dphit, grid.weights);
  if (ref.gradient_weight > 0.0) d2 += ref.gradient_weight * kernels::face_energy(dphi, grid.faces);
  return d2;
}

}  // namespace

OrbitReference make_orbit_reference(const GridSpec& grid, const ModelParams& params, const GroundState& gs,
                                    double gradient_weight) {
  require_field_on_grid(grid, gs.field);
  if (gradient_weight < 0.0) throw std::invalid_argument("gradient weight must be nonnegative");
  for (double w : gs.omega)
    if (!std::isfinite(w)) throw std::invalid_argument("ground state has no real frequency");
  OrbitReference ref;
  ref.grid = grid;
  ref.ground_state = gs;
  ref.m_C = eval_energy_frequency(grid, params, gs.field, gs.omega);
  const Pair rho = l2_norms_squared(grid, gs.field);
  for (std::size_t j = 0; j < 2; ++j) ref.charges[j] = gs.omega[j] * rho[j];
  ref.gradient_weight = gradient_weight;
  return ref;
}

double phase_space_norm(const GridSpec& grid, const PhaseState& s, double gradient_weight) {
  double acc = 0.0;
  for (std::size_t j = 0; j < 2; ++j) {
    acc += kernels::weighted_norm2(s.phi[j], grid.weights) + kernels::weighted_norm2(s.phit[j], grid.weights);
    if (gradient_weight > 0.0) acc += gradient_weight * kernels::face_energy(s.phi[j], grid.faces);
  }
  return std::sqrt(acc);
}

OrbitDistance orbit_distance(const GridSpec& grid, const PhaseState& state, const OrbitReference& ref) {
  require_reference_grid(grid, state, ref);
  OrbitDistance out;
  double d2 = 0.0;
  for (std::size_t j = 0; j < 2; ++j) {
    const auto& u = ref.ground_state.field.u[j];
    const std::vector<cplx> uc = complexify(u, 1.0);
    const std::vector<cplx> vc = complexify(u, cplx(0.0, -ref.ground_state.omega[j]));
    cplx z = kernels::weighted_dot(state.phi[j], uc, grid.weights) +
             kernels::weighted_dot(state.phit[j], vc, grid.weights);
    if (ref.gradient_weight > 0.0) {
      // Re and Im of the face pairing separately: Re<a, b> and Re<a, i b> = Im<a, b>.
      const std::vector<cplx> iu = complexify(u, cplx(0.0, 1.0));
      z += ref.gradient_weight *
           cplx(kernels::face_pairing(state.phi[j], uc, grid.faces), kernels::face_pairing(state.phi[j], iu, grid.faces));
    }
    const double az = std::abs(z);
    out.phases[j] = az > 0.0 ? z / az : cplx(1.0, 0.0);
    d2 += component_distance2(grid, state, ref, j, out.phases[j]);
  }
  out.distance = std::sqrt(d2);
  return out;
}

double distance_at_phases(const GridSpec& grid, const PhaseState& state, const OrbitReference& ref,
                          const std::array<cplx, 2>& phases) {
  require_reference_grid(grid, state, ref);
  return std::sqrt(component_distance2(grid, state, ref, 0, phases[0]) +
                   component_distance2(grid, state, ref, 1, phases[1]));
}

double lyapunov_from_observables(const Observables& ob, const OrbitReference& ref) {
  const double de = ob.energy - ref.m_C;
  const double d1 = ob.charge[0] - ref.charges[0];
  const double d2 = ob.charge[1] - ref.charges[1];
  return de * de + d1 * d1 + d2 * d2;
}

double lyapunov(const GridSpec& grid, const PhaseState& state, const OrbitReference& ref, const ModelParams& params) {
  return lyapunov_from_observables(observables(grid, state, params), ref);
}

ModulusPhaseReport modulus_phase_check(const GridSpec& grid, std::span<const cplx> phi, double gap_tol) {
  ModulusPhaseReport rep;
  if (phi.size() != grid.cells) throw std::invalid_argument("field length does not match grid");
  std::vector<double> mod(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) mod[i] = std::abs(phi[i]);
  const double full = kernels::face_energy(phi, grid.faces);
  rep.norm_gap = full - kernels::face_energy(std::span<const double>(mod), grid.faces);
  rep.scale = full;
  rep.diamagnetic_ok = rep.norm_gap >= -1e-12 * std::max(rep.scale, 1.0);

  rep.hypothesis_ok = true;
  for (std::size_t i = 0; i < phi.size(); ++i)
    if (!grid.is_boundary_cell(i) && !(mod[i] > 0.0)) rep.hypothesis_ok = false;
  rep.gap_small = rep.norm_gap <= gap_tol * rep.scale;
  if (!rep.hypothesis_ok || !rep.gap_small) return rep;

  cplx prev{};
  cplx sum{};
  bool first = true;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (grid.is_boundary_cell(i)) continue;
    const cplx e = phi[i] / mod[i];
    if (!first) rep.phase_variation += std::abs(e - prev);
    prev = e;
    sum += e;
    first = false;
  }
  rep.phase_constant = rep.phase_variation <= 1e-6 * static_cast<double>(grid.cells);
  if (rep.phase_constant && std::abs(sum) > 0.0) rep.lambda = sum / std::abs(sum);
  return rep;
}

PhaseState perturb_state(const GridSpec& grid, const PhaseState& state, double eps, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("bump width must be positive");
  PhaseState out = state;
  for (std::size_t i = 0; i < grid.cells; ++i) {
    const double r = grid.nodes[i];
    const double factor = 1.0 + eps * std::exp(-(r * r) / (width * width));
    for (std::size_t j = 0; j < 2; ++j) {
      out.phi[j][i] *= factor;
      out.phit[j][i] *= factor;
    }
  }
  return out;
}

double gyration_radius(const GridSpec& grid, const RealField& u) {
  require_field_on_grid(grid, u);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < grid.cells; ++i) {
      const double m = grid.weights[i] * u.u[j][i] * u.u[j][i];
      num += grid.nodes[i] * grid.nodes[i] * m;
      den += m;
    }
  if (!(den > 0.0)) throw std::invalid_argument("gyration radius of a zero field");
  return std::sqrt(num / den);
}

DriftFloor measure_drift_floor(const GridSpec& grid, const OrbitReference& ref, const ModelParams& params,
                               double horizon, double dt, std::size_t stride) {
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  DriftFloor fl;
  const GroundState& gs = ref.ground_state;

  // Defect of the stationary equation -Lap u + m^2 u + DF(u) = w^2 u.
  const RealField g = grad_J(grid, params, gs.field);
  double defect2 = 0.0;
  for (std::size_t j = 0; j < 2; ++j) {
    const double shift = params.mass(j) * params.mass(j) - gs.omega[j] * gs.omega[j];
    std::vector<double> d(grid.cells);
    for (std::size_t i = 0; i < grid.cells; ++i)
      d[i] = grid.is_boundary_cell(i) ? 0.0 : g.u[j][i] + shift * gs.field.u[j][i];
    defect2 += kernels::weighted_dot(d, d, grid.weights);
  }
  fl.defect = std::sqrt(defect2);

  const PhaseState start = standing_wave_state(gs, {cplx(1.0, 0.0), cplx(1.0, 0.0)});
  const Observables ob0 = observables(grid, start, params);
  PhaseState coarse = start, fine = start;
  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
  double max_diff = 0.0;
  double max_v = lyapunov_from_observables(ob0, ref);
  for (std::size_t k = 1; k <= steps; ++k) {
    coarse = step_leapfrog(grid, coarse, params, dt);
    fine = step_leapfrog(grid, fine, params, 0.5 * dt);
    fine = step_leapfrog(grid, fine, params, 0.5 * dt);
    if (k % stride != 0 && k != steps) continue;
    PhaseState diff = coarse;
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t i = 0; i < grid.cells; ++i) {
        diff.phi[j][i] -= fine.phi[j][i];
        diff.phit[j][i] -= fine.phit[j][i];
      }
    max_diff = std::max(max_diff, phase_space_norm(grid, diff, ref.gradient_weight));
    const Observables oc = observables(grid, coarse, params);
    const Observables of = observables(grid, fine, params);
    // Richardson: the coarse error is about 4/3 of the coarse-fine gap.
    const double ee = 4.0 / 3.0 * std::abs(oc.energy - of.energy) + std::abs(ob0.energy - ref.m_C);
    double v = ee * ee;
    for (std::size_t j = 0; j < 2; ++j) {
      const double ce = 4.0 / 3.0 * std::abs(oc.charge[j] - of.charge[j]) + std::abs(ob0.charge[j] - ref.charges[j]);
      v += ce * ce;
    }
    max_v = std::max(max_v, v);
  }
  fl.dist = 4.0 / 3.0 * max_diff + horizon * fl.defect;
  fl.V = max_v;
  return fl;
}

StabilityReport stability_experiment(const OrbitReference& ref, const ModelParams& params,
                                     const StabilityOptions& opts) {
  const GridSpec& grid = ref.grid;
  const auto& eps = opts.epsilons;
  if (eps.empty() || eps.front() != 0.0) throw std::invalid_argument("epsilon ladder must start at 0");
  for (std::size_t i = 1; i < eps.size(); ++i)
    if (!(eps[i] > eps[i - 1])) throw std::invalid_argument("epsilon ladder must be increasing");
  const double dt = opts.dt > 0.0 ? opts.dt : 0.25 * grid.spacing;
  const double width = opts.width > 0.0 ? opts.width : gyration_radius(grid, ref.ground_state.field);

  StabilityReport rep;
  rep.rows.resize(eps.size());
  std::vector<std::vector<ScatterPoint>> per_row(eps.size());
  const PhaseState base = standing_wave_state(ref.ground_state, {cplx(1.0, 0.0), cplx(1.0, 0.0)});

  const auto nrows = static_cast<std::ptrdiff_t>(eps.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t r = 0; r < nrows; ++r) {
    const auto k = static_cast<std::size_t>(r);
    const PhaseState start = perturb_state(grid, base, eps[k], width);
    const TrajectoryRecord tr = evolve(grid, start, params, opts.horizon, dt, opts.stride, &ref);
    StabilityRow row;
    row.eps = eps[k];
    row.blowup = tr.blowup;
    for (const auto& s : tr.samples) {
      row.max_dist = std::max(row.max_dist, s.dist);
      row.max_V = std::max(row.max_V, s.lyapunov);
      per_row[k].push_back({eps[k], s.t, s.lyapunov, s.dist});
    }
    if (row.blowup) {
      row.max_dist = std::numeric_limits<double>::infinity();
      row.max_V = std::numeric_limits<double>::infinity();
    }
    rep.rows[k] = row;
  }
  for (auto& pts : per_row) rep.scatter.insert(rep.scatter.end(), pts.begin(), pts.end());

  rep.floor = measure_drift_floor(grid, ref, params, opts.horizon, dt, opts.stride);
  const StabilityRow& zero = rep.rows.front();
  rep.baseline_ok = !zero.blowup && zero.max_dist <= 10.0 * rep.floor.dist && zero.max_V <= 10.0 * rep.floor.V;

  rep.monotone_dist = rep.monotone_V = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    if (rep.rows[i].max_dist < rep.rows[i - 1].max_dist) rep.monotone_dist = false;
    if (rep.rows[i].max_V < rep.rows[i - 1].max_V) rep.monotone_V = false;
  }

  rep.correspondence_ok = true;
  for (std::size_t i = 1; i + 1 < rep.rows.size(); ++i) {
    const double v_level = rep.rows[i].max_V;
    const double d_level = rep.rows[i + 1].max_dist;
    for (const auto& p : rep.scatter)
      if (p.V <= v_level && p.dist > d_level) rep.correspondence_ok = false;
  }
  return rep;
}

}  // namespace kgw
