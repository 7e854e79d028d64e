#include "kgw/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kgw/kernels.hpp"

namespace kgw {
namespace {

void require_length(const GridSpec& grid, std::size_t n) {
  if (n != grid.cells)
    throw std::invalid_argument("sample length " + std::to_string(n) + " does not match grid cells " +
                                std::to_string(grid.cells));
}

template <class T>
void check_support(const GridSpec& grid, std::span<const T> samples) {
  require_length(grid, samples.size());
  for (std::size_t i = 0; i < grid.cells; ++i) {
    if (grid.is_boundary_cell(i) && samples[i] != T{})
      throw std::invalid_argument("support violation: boundary cell " + std::to_string(i) +
                                  " is nonzero");
  }
}

}  // namespace

std::string to_string(GridKind kind) { return kind == GridKind::line ? "line" : "radial"; }

GridKind grid_kind_from_string(const std::string& s) {
  if (s == "line") return GridKind::line;
  if (s == "radial") return GridKind::radial;
  throw std::invalid_argument("unknown grid kind '" + s + "'");
}

double unit_sphere_area(int n) {
  const double half = 0.5 * n;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

GridSpec build_grid(GridKind kind, int dimension, double extent, std::size_t cells) {
  if (!(extent > 0.0) || !std::isfinite(extent))
    throw std::invalid_argument("grid extent must be positive");
  if (cells < 8) throw std::invalid_argument("grid needs at least 8 cells");
  if (kind == GridKind::radial && dimension < 3)
    throw std::invalid_argument("radial grids require dimension n >= 3");
  if (kind == GridKind::line && dimension != 1)
    throw std::invalid_argument("line grids have dimension 1");

  GridSpec g;
  g.kind = kind;
  g.dimension = dimension;
  g.extent = extent;
  g.cells = cells;
  const auto m = static_cast<double>(cells);
  g.spacing = g.length() / m;
  const double h = g.spacing;
  g.nodes.resize(cells);
  g.weights.resize(cells);
  g.faces.resize(cells + 1);

  if (kind == GridKind::line) {
    for (std::size_t i = 0; i < cells; ++i) {
      g.nodes[i] = -extent + (static_cast<double>(i) + 0.5) * h;
      g.weights[i] = h;
    }
    std::fill(g.faces.begin(), g.faces.end(), 1.0 / h);
  } else {
    const double sigma = unit_sphere_area(dimension);
    const int k = dimension - 1;
    for (std::size_t i = 0; i < cells; ++i) {
      const double r = (static_cast<double>(i) + 0.5) * h;
      g.nodes[i] = r;
      g.weights[i] = sigma * std::pow(r, k) * h;
    }
    for (std::size_t i = 0; i <= cells; ++i) {
      const double r = static_cast<double>(i) * h;
      g.faces[i] = sigma * std::pow(r, k) / h;
    }
  }
  return g;
}

double quadrature(const GridSpec& grid, std::span<const double> samples) {
  require_length(grid, samples.size());
  return kernels::weighted_sum(samples, grid.weights);
}

void require_supported(const GridSpec& grid, std::span<const double> samples) {
  check_support(grid, samples);
}

void require_supported(const GridSpec& grid, std::span<const std::complex<double>> samples) {
  check_support(grid, samples);
}

std::vector<double> apply_laplacian(const GridSpec& grid, std::span<const double> samples) {
  require_length(grid, samples.size());
  std::vector<double> out(grid.cells);
  kernels::laplacian(samples, grid.faces, grid.weights, out);
  return out;
}

std::vector<std::complex<double>> apply_laplacian(const GridSpec& grid,
                                                  std::span<const std::complex<double>> samples) {
  require_length(grid, samples.size());
  std::vector<std::complex<double>> out(grid.cells);
  kernels::laplacian(samples, grid.faces, grid.weights, out);
  return out;
}

double dirichlet_energy(const GridSpec& grid, std::span<const double> samples) {
  check_support(grid, samples);
  return kernels::face_energy(samples, grid.faces);
}

double dirichlet_energy(const GridSpec& grid, std::span<const std::complex<double>> samples) {
  check_support(grid, samples);
  return kernels::face_energy(samples, grid.faces);
}

std::vector<double> solve_shifted_laplacian(const GridSpec& grid, double shift,
                                            std::span<const double> rhs) {
  require_length(grid, rhs.size());
  if (!(shift > 0.0)) throw std::invalid_argument("shift must be positive");
  // Rows multiplied by w_i give a symmetric tridiagonal system:
  //   (shift w_i + c_i + c_{i+1}) x_i - c_i x_{i-1} - c_{i+1} x_{i+1} = w_i rhs_i
  const std::size_t n = grid.cells;
  const auto& c = grid.faces;
  const auto& w = grid.weights;
  std::vector<double> diag(n), lower(n, 0.0), upper(n, 0.0), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (grid.is_boundary_cell(i)) {
      diag[i] = 1.0;
      b[i] = 0.0;
      continue;
    }
    diag[i] = shift * w[i] + c[i] + c[i + 1];
    if (i > 0 && !grid.is_boundary_cell(i - 1)) lower[i] = -c[i];
    if (i + 1 < n && !grid.is_boundary_cell(i + 1)) upper[i] = -c[i + 1];
    b[i] = w[i] * rhs[i];
  }
  // Thomas algorithm; the system is diagonally dominant.
  for (std::size_t i = 1; i < n; ++i) {
    const double f = lower[i] / diag[i - 1];
    diag[i] -= f * upper[i - 1];
    b[i] -= f * b[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = b[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (b[i] - upper[i] * x[i + 1]) / diag[i];
  return x;
}

double laplacian_bound(const GridSpec& grid) {
  double bound = 0.0;
  for (std::size_t i = 0; i < grid.cells; ++i)
    bound = std::max(bound, 2.0 * (grid.faces[i] + grid.faces[i + 1]) / grid.weights[i]);
  return bound;
}

}  // namespace kgw
