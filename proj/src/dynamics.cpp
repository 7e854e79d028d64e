#include "kgw/dynamics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "kgw/kernels.hpp"
#include "kgw/stability.hpp"

namespace kgw {
namespace {

void require_state_on_grid(const GridSpec& grid, const PhaseState& s) {
  for (std::size_t j = 0; j < 2; ++j)
    if (s.phi[j].size() != grid.cells || s.phit[j].size() != grid.cells)
      throw std::invalid_argument("phase state does not match grid");
}

ComplexComponents acceleration(const GridSpec& grid, const ModelParams& params, const ComplexComponents& phi) {
  ComplexComponents acc{std::vector<cplx>(grid.cells), std::vector<cplx>(grid.cells)};
  kernels::coupling_gradient(params.coupling(), phi[0], phi[1], acc[0], acc[1]);
  for (std::size_t j = 0; j < 2; ++j) {
    const double m2 = params.mass(j) * params.mass(j);
    const std::vector<cplx> lap = apply_laplacian(grid, phi[j]);
    for (std::size_t i = 0; i < grid.cells; ++i)
      acc[j][i] = grid.is_boundary_cell(i) ? cplx{} : lap[i] - m2 * phi[j][i] - acc[j][i];
  }
  return acc;
}

bool finite(const PhaseState& s) {
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < s.cells(); ++i)
      if (!std::isfinite(s.phi[j][i].real()) || !std::isfinite(s.phi[j][i].imag()) ||
          !std::isfinite(s.phit[j][i].real()) || !std::isfinite(s.phit[j][i].imag()))
        return false;
  return true;
}

}  // namespace

PhaseState zero_state(const GridSpec& grid) {
  PhaseState s;
  for (std::size_t j = 0; j < 2; ++j) {
    s.phi[j].assign(grid.cells, cplx{});
    s.phit[j].assign(grid.cells, cplx{});
  }
  return s;
}

PhaseState standing_wave_state(const GroundState& gs, const std::array<cplx, 2>& phases) {
  for (const cplx& l : phases)
    if (std::abs(std::abs(l) - 1.0) > 1e-12) throw std::invalid_argument("standing-wave phases must have modulus 1");
  PhaseState s;
  for (std::size_t j = 0; j < 2; ++j) {
    const auto& u = gs.field.u[j];
    s.phi[j].resize(u.size());
    s.phit[j].resize(u.size());
    const cplx velocity_factor = cplx(0.0, -gs.omega[j]) * phases[j];
    for (std::size_t i = 0; i < u.size(); ++i) {
      s.phi[j][i] = phases[j] * u[i];
      s.phit[j][i] = velocity_factor * u[i];
    }
  }
  return s;
}

Observables observables(const GridSpec& grid, const PhaseState& state, const ModelParams& params) {
  require_state_on_grid(grid, state);
  Observables ob;
  double e = kernels::coupling_integral(params.coupling(), state.phi[0], state.phi[1], grid.weights);
  for (std::size_t j = 0; j < 2; ++j) {
    const double m2 = params.mass(j) * params.mass(j);
    e += 0.5 * (kernels::weighted_norm2(state.phit[j], grid.weights) + dirichlet_energy(grid, state.phi[j]) +
                m2 * kernels::weighted_norm2(state.phi[j], grid.weights));
    ob.charge[j] = -std::imag(kernels::weighted_dot(state.phit[j], state.phi[j], grid.weights));
  }
  ob.energy = e;
  return ob;
}

PhaseState step_leapfrog(const GridSpec& grid, const PhaseState& state, const ModelParams& params, double dt) {
  require_state_on_grid(grid, state);
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (dt > max_time_step(grid)) throw std::invalid_argument("time step exceeds the stability bound 0.5 h");
  PhaseState next = state;
  const double half = 0.5 * dt;
  ComplexComponents acc = acceleration(grid, params, state.phi);
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < grid.cells; ++i) {
      next.phit[j][i] += half * acc[j][i];
      next.phi[j][i] += dt * next.phit[j][i];
    }
  acc = acceleration(grid, params, next.phi);
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < grid.cells; ++i) next.phit[j][i] += half * acc[j][i];
  next.time = state.time + dt;
  return next;
}

TrajectoryRecord evolve(const GridSpec& grid, const PhaseState& state, const ModelParams& params, double horizon,
                        double dt, std::size_t stride, const OrbitReference* reference) {
  require_state_on_grid(grid, state);
  if (!(horizon >= 0.0)) throw std::invalid_argument("horizon must be nonnegative");
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  if (!(dt > 0.0) || dt > max_time_step(grid))
    throw std::invalid_argument("time step exceeds the stability bound 0.5 h");
  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));

  TrajectoryRecord rec;
  PhaseState cur = state;
  auto sample = [&](const PhaseState& s) {
    TrajectorySample ts;
    ts.t = s.time;
    const Observables ob = observables(grid, s, params);
    ts.energy = ob.energy;
    ts.charge = ob.charge;
    if (reference) {
      ts.dist = orbit_distance(grid, s, *reference).distance;
      ts.lyapunov = lyapunov_from_observables(ob, *reference);
    } else {
      ts.dist = std::numeric_limits<double>::quiet_NaN();
      ts.lyapunov = std::numeric_limits<double>::quiet_NaN();
    }
    rec.samples.push_back(ts);
    return std::isfinite(ts.energy) && std::isfinite(ts.charge[0]) && std::isfinite(ts.charge[1]);
  };

  if (!sample(cur)) rec.blowup = true;
  for (std::size_t k = 1; k <= steps && !rec.blowup; ++k) {
    cur = step_leapfrog(grid, cur, params, dt);
    cur.time = state.time + static_cast<double>(k) * dt;
    if (!finite(cur)) {
      rec.blowup = true;
      break;
    }
    if (k % stride == 0 || k == steps) {
      if (!sample(cur)) rec.blowup = true;
    }
  }
  rec.final_state = std::move(cur);
  return rec;
}

}  // namespace kgw
