#pragma once

// Run configuration: an INI file with the sections
//
//   [grid]        kind, n, R, M
//   [model]       beta, gamma, a, p, m1, m2
//   [constraint]  rho = "r1 r2"  or  charge = "c1 c2"  (exactly one)
//   [solver]      step, tol, max_iters, backtrack, seed, scheme, sweep_every, patience, trace
//   [dynamics]    dt, horizon, stride, epsilons, width, gradient_weight
//   [subadd]      splits = "t1 t2; t1 t2; ..."
//   [rearr]       cells, trials, seed
//   [output]      directory
//
// Missing keys take the defaults below. to_ini writes every key with 17
// significant digits, so parse_config(to_ini(c)) == c.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "kgw/grid.hpp"
#include "kgw/model.hpp"
#include "kgw/solve.hpp"

namespace kgw {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct GridConfig {
  GridKind kind = GridKind::radial;
  int dimension = 3;
  double extent = 16.0;
  std::size_t cells = 512;
  bool operator==(const GridConfig&) const = default;
};

struct DynamicsConfig {
  /// 0 selects h / 4.
  double dt = 0.0;
  double horizon = 10.0;
  std::size_t stride = 10;
  std::vector<double> epsilons{0.0, 0.01, 0.05, 0.1};
  double width = 0.0;
  double gradient_weight = 0.0;
  bool operator==(const DynamicsConfig&) const = default;
};

struct RearrConfig {
  std::vector<std::size_t> cells{256, 1024};
  std::size_t trials = 200;
  std::uint64_t seed = 7;
  bool operator==(const RearrConfig&) const = default;
};

struct RunConfig {
  GridConfig grid;
  ModelParams model;
  ConstraintSpec constraint;
  SolverConfig solver;
  DynamicsConfig dynamics;
  std::vector<Pair> splits{{0.25, 0.25}, {0.5, 0.5}, {0.75, 0.75}, {0.5, 0.25}};
  RearrConfig rearr;
  std::string output_dir = "out";

  GridSpec make_grid() const;
  bool operator==(const RunConfig&) const = default;
};

/// Parses and validates (grid preconditions, solver ranges). Model
/// admissibility is left to the caller so `validate` can report it.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

std::string to_ini(const RunConfig& cfg);

/// "%.17g"
std::string format_double(double x);

}  // namespace kgw
