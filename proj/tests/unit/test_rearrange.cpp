#include <doctest.h>

#include <algorithm>
#include <random>

#include "kgw/grid.hpp"
#include "kgw/rearrange.hpp"

using namespace kgw;

namespace {

double line_energy(std::span<const double> u) {
  double e = 0.0, prev = 0.0;
  for (double x : u) {
    e += (x - prev) * (x - prev);
    prev = x;
  }
  return e + prev * prev;
}

std::vector<double> bump(const GridSpec& g, double amp, double radius, double power) {
  std::vector<double> out(g.cells, 0.0);
  for (std::size_t i = 0; i < g.cells; ++i) {
    const double x = g.nodes[i] / radius;
    if (std::abs(x) < 1.0) out[i] = amp * std::pow(1.0 - x * x, power);
  }
  return out;
}

}  // namespace

TEST_CASE("centre-out order") {
  CHECK(center_out_order(4) == std::vector<std::size_t>{2, 1, 3, 0});
  CHECK(center_out_order(5) == std::vector<std::size_t>{2, 3, 1, 4, 0});
}

TEST_CASE("symmetric rearrangement of a small profile") {
  const std::vector<double> in{0.0, 3.0, 1.0, 2.0, 5.0, 4.0};
  CHECK(symmetric_rearrange_line(in) == std::vector<double>{0.0, 2.0, 4.0, 5.0, 3.0, 1.0});
  CHECK_THROWS_AS(symmetric_rearrange_line(std::vector<double>{1.0, -0.5}), std::invalid_argument);
}

TEST_CASE("rearrangement is equimeasurable, idempotent and lowers the energy") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> len(1, 300);
  for (int k = 0; k < 300; ++k) {
    std::vector<double> u(len(rng));
    for (double& x : u) x = d(rng) < 0.2 ? 0.0 : d(rng);
    const auto r = symmetric_rearrange_line(u);
    auto a = u, b = r;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
    CHECK(symmetric_rearrange_line(r) == r);
    CHECK(line_energy(r) <= line_energy(u));
  }
}

TEST_CASE("Steiner rearrangement acts slice by slice and lowers both energies") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  Array2D a(37, 53);
  for (double& x : a.data) x = d(rng);
  for (int axis : {0, 1}) {
    const Array2D s = steiner_rearrange(a, axis);
    if (axis == 1) {
      for (std::size_t r = 0; r < a.rows; ++r) {
        std::vector<double> row(a.data.begin() + r * a.cols, a.data.begin() + (r + 1) * a.cols);
        const auto expect = symmetric_rearrange_line(row);
        CHECK(std::equal(expect.begin(), expect.end(), s.data.begin() + r * a.cols));
      }
    }
    CHECK(axis_difference_energy(s, axis) <= axis_difference_energy(a, axis));
    CHECK(axis_difference_energy(s, 1 - axis) <= axis_difference_energy(a, 1 - axis) * (1.0 + 1e-14));
  }
  CHECK_THROWS_AS(steiner_rearrange(a, 2), std::invalid_argument);
}

TEST_CASE("radial sort orders samples from the centre") {
  const auto s = radial_decreasing_sort(std::vector<double>{0.1, 0.7, 0.3, 0.0});
  CHECK(s == std::vector<double>{0.7, 0.3, 0.1, 0.0});
}

TEST_CASE("two-bump inequality on a constructed pair") {
  const GridSpec g = build_grid(GridKind::line, 1, 1.0, 512);
  const auto u = bump(g, 0.8, 0.2, 2.0);
  const auto v = bump(g, 1.0, 0.25, 1.5);
  const SteinerReport rep = check_steiner_lemma(g, u, v, 128 * g.spacing);
  CHECK(rep.passed);
  CHECK(rep.margin > 0.0);
  CHECK(rep.tolerance == doctest::Approx(10.0 * g.spacing * (dirichlet_energy(g, u) + dirichlet_energy(g, v))));
}

TEST_CASE("two-bump preconditions") {
  const GridSpec g = build_grid(GridKind::line, 1, 1.0, 256);
  const auto u = bump(g, 0.8, 0.2, 2.0);
  const auto v = bump(g, 1.0, 0.2, 2.0);
  const double T = 64 * g.spacing;
  CHECK_THROWS_AS(check_steiner_lemma(g, v, u, T), PreconditionViolation);  // sup u > sup v
  CHECK_THROWS_AS(check_steiner_lemma(g, u, v, 10 * g.spacing), PreconditionViolation);  // overlap
  CHECK_THROWS_AS(check_steiner_lemma(g, u, v, 120 * g.spacing), PreconditionViolation);  // leaves the grid
  CHECK_THROWS_AS(check_steiner_lemma(g, u, v, 64.5 * g.spacing), std::invalid_argument);

  auto lopsided = u;
  lopsided[120] *= 1.1;
  CHECK_THROWS_AS(check_steiner_lemma(g, lopsided, v, T), PreconditionViolation);
  auto flat = u;
  flat[g.cells / 2 + 1] = flat[g.cells / 2];
  flat[g.cells / 2 - 2] = flat[g.cells / 2 - 1];
  CHECK_THROWS_AS(check_steiner_lemma(g, flat, v, T), PreconditionViolation);
  CHECK_THROWS_AS(check_steiner_lemma(build_grid(GridKind::radial, 3, 1.0, 256), u, v, T), std::invalid_argument);
}

TEST_CASE("random bump pairs are admissible") {
  std::mt19937_64 rng(3);
  for (std::size_t m : {64u, 256u, 1024u}) {
    const GridSpec g = build_grid(GridKind::line, 1, 1.0, m);
    for (int k = 0; k < 50; ++k) {
      const BumpPair bp = random_bump_pair(g, rng);
      CHECK_NOTHROW(check_steiner_lemma(g, bp.u, bp.v, bp.shift));
    }
  }
}
