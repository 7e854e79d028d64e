#include "kgw/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace kgw {
namespace {

void require_nonnegative(std::span<const double> s) {
  for (double x : s)
    if (!(x >= 0.0)) throw std::invalid_argument("rearrangement needs nonnegative samples");
}

// Symmetric about the centre and strictly decreasing outward on the
// (contiguous) support.
void require_symmetric_decreasing(std::span<const double> s, const char* name) {
  const std::size_t m = s.size();
  const double top = *std::max_element(s.begin(), s.end());
  if (!(top > 0.0)) throw PreconditionViolation(std::string(name) + " is identically zero");
  for (std::size_t i = 0; i < m / 2; ++i) {
    if (std::abs(s[i] - s[m - 1 - i]) > 1e-12 * top)
      throw PreconditionViolation(std::string(name) + " is not symmetric about the origin");
  }
  // Right half, walking outward from the centre.
  const std::size_t start = m / 2;
  std::size_t i = start;
  while (i + 1 < m && s[i + 1] > 0.0) {
    if (!(s[i + 1] < s[i]))
      throw PreconditionViolation(std::string(name) + " is not strictly decreasing on its support");
    ++i;
  }
  for (++i; i < m; ++i)
    if (s[i] != 0.0) throw PreconditionViolation(std::string(name) + " has a disconnected support");
}

}  // namespace

std::vector<std::size_t> center_out_order(std::size_t m) {
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  // Distances measured in half cells: |2i - (m-1)|.
  auto dist2 = [m](std::size_t i) {
    const long d = 2 * static_cast<long>(i) - static_cast<long>(m - 1);
    return d < 0 ? -d : d;
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const long da = dist2(a);
    const long db = dist2(b);
    return da != db ? da < db : a > b;
  });
  return order;
}

std::vector<double> symmetric_rearrange_line(std::span<const double> samples) {
  require_nonnegative(samples);
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const auto order = center_out_order(samples.size());
  std::vector<double> out(samples.size());
  for (std::size_t k = 0; k < order.size(); ++k) out[order[k]] = sorted[k];
  return out;
}

Array2D steiner_rearrange(const Array2D& values, int axis) {
  if (axis != 0 && axis != 1) throw std::invalid_argument("axis must be 0 or 1");
  require_nonnegative(values.data);
  Array2D out(values.rows, values.cols);
  const std::size_t nslices = axis == 1 ? values.rows : values.cols;
  const std::size_t len = axis == 1 ? values.cols : values.rows;
  const auto order = center_out_order(len);
  const auto ns = static_cast<std::ptrdiff_t>(nslices);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < ns; ++s) {
    const auto k = static_cast<std::size_t>(s);
    std::vector<double> slice(len);
    for (std::size_t i = 0; i < len; ++i) slice[i] = axis == 1 ? values.at(k, i) : values.at(i, k);
    std::sort(slice.begin(), slice.end(), std::greater<>());
    for (std::size_t i = 0; i < len; ++i) {
      if (axis == 1)
        out.at(k, order[i]) = slice[i];
      else
        out.at(order[i], k) = slice[i];
    }
  }
  return out;
}

double axis_difference_energy(const Array2D& values, int axis) {
  const std::size_t nslices = axis == 1 ? values.rows : values.cols;
  const std::size_t len = axis == 1 ? values.cols : values.rows;
  auto get = [&](std::size_t s, std::size_t i) { return axis == 1 ? values.at(s, i) : values.at(i, s); };
  double acc = 0.0;
  for (std::size_t s = 0; s < nslices; ++s) {
    double prev = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      const double d = get(s, i) - prev;
      acc += d * d;
      prev = get(s, i);
    }
    acc += prev * prev;
  }
  return acc;
}

std::vector<double> radial_decreasing_sort(std::span<const double> samples) {
  require_nonnegative(samples);
  std::vector<double> out(samples.begin(), samples.end());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

SteinerReport check_steiner_lemma(const GridSpec& grid, std::span<const double> u,
                                  std::span<const double> v, double shift) {
  if (grid.kind != GridKind::line) throw std::invalid_argument("the two-bump check runs on line grids");
  if (u.size() != grid.cells || v.size() != grid.cells)
    throw std::invalid_argument("profile length does not match grid");
  require_nonnegative(u);
  require_nonnegative(v);
  require_supported(grid, u);
  require_supported(grid, v);
  require_symmetric_decreasing(u, "u");
  require_symmetric_decreasing(v, "v");
  const double sup_u = *std::max_element(u.begin(), u.end());
  const double sup_v = *std::max_element(v.begin(), v.end());
  if (sup_u > sup_v) throw PreconditionViolation("sup(u) > sup(v)");

  const double cells_shift = shift / grid.spacing;
  const long k = std::lround(cells_shift);
  if (std::abs(cells_shift - static_cast<double>(k)) > 1e-9)
    throw std::invalid_argument("shift must be a multiple of the grid spacing");

  const auto m = static_cast<long>(grid.cells);
  std::vector<double> w(u.begin(), u.end());
  for (long i = 0; i < m; ++i) {
    const double vi = v[static_cast<std::size_t>(i)];
    if (vi == 0.0) continue;
    const long j = i + k;
    if (j < 0 || j >= m || grid.is_boundary_cell(static_cast<std::size_t>(j)))
      throw PreconditionViolation("translated v leaves the grid");
    if (u[static_cast<std::size_t>(j)] != 0.0)
      throw PreconditionViolation("supports of u and v(. - T) overlap");
    w[static_cast<std::size_t>(j)] = vi;
  }

  SteinerReport rep;
  const double dw = dirichlet_energy(grid, w);
  rep.lhs = dirichlet_energy(grid, symmetric_rearrange_line(w));
  rep.rhs = dw - 0.75 * dirichlet_energy(grid, u);
  rep.margin = rep.rhs - rep.lhs;
  rep.tolerance = 10.0 * grid.spacing * dw;
  rep.passed = rep.margin >= -rep.tolerance;
  return rep;
}

BumpPair random_bump_pair(const GridSpec& grid, std::mt19937_64& rng) {
  if (grid.kind != GridKind::line) throw std::invalid_argument("bump pairs live on line grids");
  const double h = grid.spacing;
  const double R = grid.extent;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto bump = [&](double amp, double radius, double power) {
    std::vector<double> out(grid.cells, 0.0);
    for (std::size_t i = 0; i < grid.cells; ++i) {
      const double x = grid.nodes[i] / radius;
      if (std::abs(x) < 1.0) out[i] = amp * std::pow(1.0 - x * x, power);
    }
    return out;
  };
  // Radii in [4h, R/4] leave room for a disjoint shift of v inside [-R, R].
  const double lo = 4.0 * h;
  const double hi = std::max(lo, 0.25 * R);
  const double au = lo + (hi - lo) * unit(rng);
  const double av = lo + (hi - lo) * unit(rng);
  BumpPair bp;
  bp.v = bump(0.5 + unit(rng), av, 1.0 + 2.0 * unit(rng));
  bp.u = bump(0.5 + unit(rng), au, 1.0 + 2.0 * unit(rng));
  const double sup_u = *std::max_element(bp.u.begin(), bp.u.end());
  const double sup_v = *std::max_element(bp.v.begin(), bp.v.end());
  if (sup_u > sup_v) {
    const double s = (0.2 + 0.8 * unit(rng)) * sup_v / sup_u;
    for (double& x : bp.u) x *= s;
  }
  const double min_shift = au + av + 2.0 * h;
  const double max_shift = R - av - 3.0 * h;
  if (!(max_shift > min_shift)) throw std::invalid_argument("grid too small for a disjoint bump pair");
  const double cells = std::floor((min_shift + (max_shift - min_shift) * unit(rng)) / h);
  bp.shift = (unit(rng) < 0.5 ? -1.0 : 1.0) * std::max(cells, std::ceil(min_shift / h)) * h;
  return bp;
}

}  // namespace kgw
