#pragma once

// Distance to the standing-wave orbit, the Lyapunov function
//
//   V = (E - m_C)^2 + sum_j (C_j - C_j^*)^2,
//
// the modulus/phase rigidity check, and the perturbation ladder experiment.
//
// The phase-space metric is the L2 product on (phi, phi_t). A nonnegative
// gradient_weight adds gradient_weight * |D phi|^2 to it.

#include <complex>
#include <span>
#include <vector>

#include "kgw/dynamics.hpp"
#include "kgw/grid.hpp"
#include "kgw/model.hpp"
#include "kgw/solve.hpp"

namespace kgw {

struct OrbitReference {
  GridSpec grid;
  GroundState ground_state;
  double m_C = 0.0;
  Pair charges{};
  double gradient_weight = 0.0;
};

/// m_C = E(u, w) and C_j = w_j |u_j|^2 taken from the ground state.
OrbitReference make_orbit_reference(const GridSpec& grid, const ModelParams& params, const GroundState& gs,
                                    double gradient_weight = 0.0);

struct OrbitDistance {
  double distance = 0.0;
  std::array<cplx, 2> phases{cplx{1.0, 0.0}, cplx{1.0, 0.0}};
};

/// Minimum over unit phases of |state - (lambda u, -i w lambda u)|.
OrbitDistance orbit_distance(const GridSpec& grid, const PhaseState& state, const OrbitReference& ref);

/// Distance to one fixed orbit point.
double distance_at_phases(const GridSpec& grid, const PhaseState& state, const OrbitReference& ref,
                          const std::array<cplx, 2>& phases);

double phase_space_norm(const GridSpec& grid, const PhaseState& state, double gradient_weight = 0.0);

double lyapunov(const GridSpec& grid, const PhaseState& state, const OrbitReference& ref, const ModelParams& params);
double lyapunov_from_observables(const Observables& ob, const OrbitReference& ref);

struct ModulusPhaseReport {
  /// D(phi) - D(|phi|) and the scale D(phi) it is measured against.
  double norm_gap = 0.0;
  double scale = 0.0;
  bool diamagnetic_ok = false;
  /// |phi| > 0 on every non-boundary cell.
  bool hypothesis_ok = false;
  bool gap_small = false;
  /// Sum of |e_{i+1} - e_i| over the unit phase field e = phi / |phi|.
  double phase_variation = 0.0;
  bool phase_constant = false;
  cplx lambda{0.0, 0.0};
};

/// gap_tol bounds norm_gap / scale for the equality case.
ModulusPhaseReport modulus_phase_check(const GridSpec& grid, std::span<const cplx> phi, double gap_tol = 1e-10);

/// Multiplies phi and phi_t by 1 + eps exp(-r^2 / width^2).
PhaseState perturb_state(const GridSpec& grid, const PhaseState& state, double eps, double width);

/// sqrt(int r^2 |u|^2 / int |u|^2) over both components.
double gyration_radius(const GridSpec& grid, const RealField& u);

struct StabilityOptions {
  std::vector<double> epsilons{0.0, 0.01, 0.05, 0.1};
  double horizon = 10.0;
  double dt = 0.0;
  std::size_t stride = 10;
  /// Bump width; 0 selects the gyration radius of the ground state.
  double width = 0.0;
};

struct StabilityRow {
  double eps = 0.0;
  double max_dist = 0.0;
  double max_V = 0.0;
  bool blowup = false;
};

struct ScatterPoint {
  double eps;
  double t;
  double V;
  double dist;
};

struct DriftFloor {
  /// 4/3 max_t |Phi_dt - Phi_dt/2| plus horizon times the stationary-equation defect.
  double dist = 0.0;
  /// Squared Richardson estimates of the energy and charge errors.
  double V = 0.0;
  double defect = 0.0;
};

DriftFloor measure_drift_floor(const GridSpec& grid, const OrbitReference& ref, const ModelParams& params,
                               double horizon, double dt, std::size_t stride);

struct StabilityReport {
  std::vector<StabilityRow> rows;
  std::vector<ScatterPoint> scatter;
  DriftFloor floor;
  bool baseline_ok = false;
  bool monotone_dist = false;
  bool monotone_V = false;
  /// Samples with V below ladder level i have dist below level i+1.
  bool correspondence_ok = false;

  bool ok() const { return baseline_ok && monotone_dist && monotone_V && correspondence_ok; }
};

StabilityReport stability_experiment(const OrbitReference& ref, const ModelParams& params,
                                     const StabilityOptions& opts);

}  // namespace kgw
