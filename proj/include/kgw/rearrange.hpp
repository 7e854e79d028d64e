#pragma once

// Discrete symmetric decreasing rearrangement on uniform line grids, its
// slice-wise (Steiner) version on 2D arrays, and the two-bump inequality
//
//   |(w*)'|^2 <= |w'|^2 - 3/4 |u'|^2,   w = u + v(. - T),
//
// for disjoint symmetric decreasing bumps u, v with sup u <= sup v.

#include <cstddef>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "kgw/grid.hpp"

namespace kgw {

struct PreconditionViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Sort-and-place: the k-th largest sample goes to the cell with the k-th
/// smallest distance to the centre; equal distances fill the right cell first.
/// Output is a permutation of the input. Throws on negative samples.
std::vector<double> symmetric_rearrange_line(std::span<const double> samples);

/// Cell visiting order used by symmetric_rearrange_line for m cells.
std::vector<std::size_t> center_out_order(std::size_t m);

struct Array2D {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major

  Array2D() = default;
  Array2D(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  bool operator==(const Array2D&) const = default;
};

/// Rearranges every 1D slice running along `axis` (0: down columns,
/// 1: along rows). Slices are processed in parallel.
Array2D steiner_rearrange(const Array2D& values, int axis);

/// Sum of squared differences between neighbours along `axis`, zero
/// extension outside; equals the Dirichlet energy along that axis times h.
double axis_difference_energy(const Array2D& values, int axis);

/// Nonincreasing reordering of radial samples (centre first). Not
/// equimeasurable on radial weights; callers renormalise and keep it only if
/// it does not raise their functional.
std::vector<double> radial_decreasing_sort(std::span<const double> samples);

struct SteinerReport {
  double lhs = 0.0;        // |(w*)'|^2
  double rhs = 0.0;        // |w'|^2 - 3/4 |u'|^2
  double margin = 0.0;     // rhs - lhs
  double tolerance = 0.0;  // 10 h |w'|^2
  bool passed = false;     // margin >= -tolerance
  /// Negative margin absorbed by the tolerance.
  bool tolerance_saved() const { return passed && margin < 0.0; }
};

/// Checks the two-bump inequality for v translated by `shift` (a multiple of
/// the grid spacing). Throws PreconditionViolation when the hypotheses fail.
SteinerReport check_steiner_lemma(const GridSpec& grid, std::span<const double> u,
                                  std::span<const double> v, double shift);

struct BumpPair {
  std::vector<double> u;
  std::vector<double> v;
  double shift = 0.0;
};

/// Random admissible input for check_steiner_lemma: centred bumps
/// A (1 - (x/a)^2)^k with sup u <= sup v and a shift that keeps the
/// translated v disjoint from u and off the boundary cells.
BumpPair random_bump_pair(const GridSpec& grid, std::mt19937_64& rng);

}  // namespace kgw
