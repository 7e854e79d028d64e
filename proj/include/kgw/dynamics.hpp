#pragma once

// Time evolution of the coupled Klein-Gordon system
//
//   phi_j'' = Lap phi_j - m_j^2 phi_j - f_j(|phi_1|, |phi_2|) phi_j / |phi_j|
//
// on radial grids, with the conserved energy and charges
//
//   E   = 1/2 int |phi_t|^2 + |D phi|^2 + 2 V(phi),
//   C_j = -Im int phi_t^j conj(phi_j),
//   V(phi) = 1/2 sum_j m_j^2 |phi_j|^2 + F(|phi_1|, |phi_2|).

#include <array>
#include <complex>
#include <vector>

#include "kgw/grid.hpp"
#include "kgw/model.hpp"
#include "kgw/solve.hpp"

namespace kgw {

using cplx = std::complex<double>;
using ComplexComponents = std::array<std::vector<cplx>, 2>;

struct PhaseState {
  ComplexComponents phi;
  ComplexComponents phit;
  double time = 0.0;

  std::size_t cells() const { return phi[0].size(); }
};

struct OrbitReference;

PhaseState zero_state(const GridSpec& grid);

/// (lambda_j u_j, -i w_j lambda_j u_j) at t = 0. Throws unless |lambda_j| = 1.
PhaseState standing_wave_state(const GroundState& ground_state, const std::array<cplx, 2>& phases);

struct Observables {
  double energy = 0.0;
  Pair charge{};
};

Observables observables(const GridSpec& grid, const PhaseState& state, const ModelParams& params);

/// Largest admissible step, 0.5 h.
inline double max_time_step(const GridSpec& grid) { return 0.5 * grid.spacing; }

/// One velocity-Verlet step. Throws when dt exceeds max_time_step.
PhaseState step_leapfrog(const GridSpec& grid, const PhaseState& state, const ModelParams& params, double dt);

struct TrajectorySample {
  double t = 0.0;
  double energy = 0.0;
  Pair charge{};
  double dist = 0.0;  // NaN without a reference
  double lyapunov = 0.0;
};

struct TrajectoryRecord {
  std::vector<TrajectorySample> samples;
  bool blowup = false;
  PhaseState final_state;
};

/// Steps to `horizon`, sampling observables every `stride` steps (and at the
/// last step). Stops early with blowup = true once a sample is non-finite.
TrajectoryRecord evolve(const GridSpec& grid, const PhaseState& state, const ModelParams& params, double horizon,
                        double dt, std::size_t stride, const OrbitReference* reference = nullptr);

}  // namespace kgw
