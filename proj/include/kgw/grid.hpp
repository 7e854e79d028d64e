#pragma once

// Staggered cell-centred grids: a uniform segment [-R, R] ("line") or a
// ball of radius R in R^n sampled along the radius ("radial").
//
// Nodes sit at cell centres, so r = 0 is never a node. Fields vanish
// outside the grid; the outermost cell (both end cells on a line) is a
// boundary cell that a supported field must hold at zero. On radial grids
// the face at r = 0 has zero area, which is the discrete form of the even
// reflection across the origin.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace kgw {

enum class GridKind { line, radial };

std::string to_string(GridKind kind);
GridKind grid_kind_from_string(const std::string& s);

struct GridSpec {
  GridKind kind = GridKind::line;
  int dimension = 1;
  double extent = 1.0;
  std::size_t cells = 0;
  double spacing = 0.0;
  std::vector<double> nodes;
  /// Per-cell quadrature measure.
  std::vector<double> weights;
  /// cells + 1 face coefficients: interface measure divided by h.
  std::vector<double> faces;

  bool is_boundary_cell(std::size_t i) const {
    return i + 1 == cells || (kind == GridKind::line && i == 0);
  }
  /// Total length of the sampled interval: 2R on a line, R along a radius.
  double length() const { return kind == GridKind::line ? 2.0 * extent : extent; }

  bool same_geometry(const GridSpec& o) const {
    return kind == o.kind && dimension == o.dimension && extent == o.extent && cells == o.cells;
  }
};

/// Surface area of the unit sphere in R^n, 2 pi^(n/2) / Gamma(n/2).
double unit_sphere_area(int n);

GridSpec build_grid(GridKind kind, int dimension, double extent, std::size_t cells);

double quadrature(const GridSpec& grid, std::span<const double> samples);

/// Throws std::invalid_argument when a boundary cell is nonzero.
void require_supported(const GridSpec& grid, std::span<const double> samples);
void require_supported(const GridSpec& grid, std::span<const std::complex<double>> samples);

std::vector<double> apply_laplacian(const GridSpec& grid, std::span<const double> samples);
std::vector<std::complex<double>> apply_laplacian(const GridSpec& grid,
                                                  std::span<const std::complex<double>> samples);

double dirichlet_energy(const GridSpec& grid, std::span<const double> samples);
double dirichlet_energy(const GridSpec& grid, std::span<const std::complex<double>> samples);

/// Solves (shift - Laplacian) x = rhs with boundary cells held at zero.
/// Requires shift > 0.
std::vector<double> solve_shifted_laplacian(const GridSpec& grid, double shift,
                                            std::span<const double> rhs);

/// Upper bound on the spectrum of -Laplacian (Gershgorin, weighted).
double laplacian_bound(const GridSpec& grid);

}  // namespace kgw
