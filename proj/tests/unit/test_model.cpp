#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kgw/model.hpp"
#include "oracles.hpp"

using namespace kgw;

namespace {

const ModelParams kParams{1.0, 1.5, 0.01, 4.0, 4.0, 4.0, 3};

RealField random_field(const GridSpec& g, std::mt19937_64& rng) {
  return RealField(oracle::random_positive_profile(g.cells, rng), oracle::random_positive_profile(g.cells, rng));
}

double pairing(const GridSpec& g, const RealField& a, const RealField& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < g.cells; ++i) s += g.weights[i] * a.u[j][i] * b.u[j][i];
  return s;
}

RealField axpy(const RealField& x, double t, const RealField& d) {
  RealField out = x;
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < x.cells(); ++i) out.u[j][i] += t * d.u[j][i];
  return out;
}

}  // namespace

TEST_CASE("A1 range depends on the dimension") {
  ModelParams p = kParams;
  p.gamma = 1.8;
  const auto rep = validate_params(p);
  CHECK_FALSE(rep.ok());
  CHECK(rep.first_failure().rfind("A1 violated", 0) == 0);
  p.gamma = 1.6;
  CHECK(validate_params(p).checks[0].passed);
  p.dimension = 4;  // upper limit 1 + 2/4
  CHECK_FALSE(validate_params(p).checks[0].passed);
  CHECK_THROWS_AS(require_valid({1.0, 1.8, 0.01, 4.0, 4.0, 4.0, 3}), std::invalid_argument);
}

TEST_CASE("A5 minimal mass matches the closed form") {
  // h(t) >= 0 iff m^2 >= max_t (beta t^(2 gamma - 2) - 2 a t^(p - 2)).
  // For gamma = 1.5, p = 4: max of t - 0.02 t^2 is 12.5 at t = 25.
  const auto rep = validate_params(kParams);
  CHECK(rep.ok());
  CHECK(rep.a5_minimal_mass == doctest::Approx(std::sqrt(12.5)).epsilon(1e-6));
  CHECK(rep.a5_t_star == doctest::Approx(2.0 * std::pow(100.0, 1.0)).epsilon(1e-12));
  CHECK(rep.a5_min_h >= 0.0);

  ModelParams light = kParams;
  light.m1 = 3.5;
  const auto bad = validate_params(light);
  CHECK_FALSE(bad.checks[4].passed);
  CHECK(bad.a5_min_h < 0.0);
  light.m1 = 3.6;
  CHECK(validate_params(light).checks[4].passed);

  ModelParams no_defocus = kParams;
  no_defocus.a = 0.0;
  CHECK_FALSE(validate_params(no_defocus).checks[4].passed);
  CHECK(std::isinf(validate_params(no_defocus).a5_minimal_mass));
}

TEST_CASE("nonlinearity derivatives match central differences") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(0.05, 2.0);
  for (int k = 0; k < 50; ++k) {
    const double x = d(rng), y = d(rng), e = 1e-6;
    const auto v = nonlinearity_eval(kParams, x, y);
    const double d1 = (nonlinearity_eval(kParams, x + e, y).F - nonlinearity_eval(kParams, x - e, y).F) / (2 * e);
    const double d2 = (nonlinearity_eval(kParams, x, y + e).F - nonlinearity_eval(kParams, x, y - e).F) / (2 * e);
    CHECK(v.D1F == doctest::Approx(d1).epsilon(1e-7));
    CHECK(v.D2F == doctest::Approx(d2).epsilon(1e-7));
  }
  const auto z = nonlinearity_eval(kParams, 0.0, 1.0);
  CHECK(z.D1F == 0.0);
}

TEST_CASE("grad_J pairs with central-difference directional derivatives") {
  const GridSpec g = build_grid(GridKind::radial, 3, 4.0, 64);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const RealField u = random_field(g, rng);
    RealField dir(g.cells);
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t i = 0; i + 1 < g.cells; ++i) dir.u[j][i] = 0.05 * n(rng);
    const double t = 1e-5;
    const double fd = (eval_J(g, kParams, axpy(u, t, dir)) - eval_J(g, kParams, axpy(u, -t, dir))) / (2 * t);
    CHECK(pairing(g, grad_J(g, kParams, u), dir) == doctest::Approx(fd).epsilon(1e-6));

    const Pair C{3.0, 5.0};
    const double fdc =
        (eval_energy_charge(g, kParams, axpy(u, t, dir), C) - eval_energy_charge(g, kParams, axpy(u, -t, dir), C)) /
        (2 * t);
    CHECK(pairing(g, grad_energy_charge(g, kParams, u, C), dir) == doctest::Approx(fdc).epsilon(1e-6));
  }
}

TEST_CASE("energy with frequencies equals energy with charges at w = C / rho") {
  const GridSpec g = build_grid(GridKind::radial, 3, 4.0, 64);
  std::mt19937_64 rng(2);
  const RealField u = random_field(g, rng);
  const Pair rho = l2_norms_squared(g, u);
  const Pair C{1.5, 2.5};
  const Pair w{C[0] / rho[0], C[1] / rho[1]};
  CHECK(eval_energy_frequency(g, kParams, u, w) == doctest::Approx(eval_energy_charge(g, kParams, u, C)).epsilon(1e-13));
  const double extra = 0.5 * (16.0 + w[0] * w[0]) * rho[0] + 0.5 * (16.0 + w[1] * w[1]) * rho[1];
  CHECK(eval_energy_frequency(g, kParams, u, w) == doctest::Approx(eval_J(g, kParams, u) + extra).epsilon(1e-13));
}

TEST_CASE("base profile radius is sqrt(11) in three dimensions") {
  // |v|^2 = s b^3 B(3/2,5)/2 and |Dv|^2 = 16 s b B(5/2,3)/2 give b^2 = 10395/945.
  CHECK(base_profile_radius(3) == doctest::Approx(std::sqrt(11.0)).epsilon(1e-6));
}

TEST_CASE("scaling trial: mass constraint and the linear Rayleigh quotient") {
  ModelParams lin = kParams;
  lin.beta = 0.0;
  lin.a = 0.0;
  const GridSpec g = build_grid(GridKind::radial, 3, 40.0, 4096);
  for (double Rs : {2.0, 5.0, 10.0}) {
    const RealField f = scaling_trial(lin, g, {1.0, 2.0}, Rs);
    const Pair rho = l2_norms_squared(g, f);
    CHECK(rho[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rho[1] == doctest::Approx(2.0).epsilon(1e-12));
    // J = (rho1 + rho2) / (2 Rs^2) for the normalised bump.
    CHECK(eval_J(g, lin, f) == doctest::Approx(3.0 / (2.0 * Rs * Rs)).epsilon(2e-3));
  }
  CHECK_THROWS_AS(scaling_trial(lin, g, {1.0, 1.0}, 20.0), std::invalid_argument);
  CHECK_THROWS_AS(scaling_trial(lin, build_grid(GridKind::line, 1, 10.0, 64), {1.0, 1.0}, 1.0), std::invalid_argument);
}

TEST_CASE("scaling trial terms scale with fixed powers of R") {
  // With u_j = sqrt(rho_j) v_R / |v_R|, each term scales by a fixed power of R:
  // |Du|^2 ~ R^-2, int |u1 u2|^gamma ~ R^(n - n gamma), int |u|^p ~ R^(n - n p / 2).
  const GridSpec g = build_grid(GridKind::radial, 3, 200.0, 16384);
  const RealField f1 = scaling_trial(kParams, g, {1.0, 1.0}, 10.0);
  const RealField f2 = scaling_trial(kParams, g, {1.0, 1.0}, 20.0);
  ModelParams only_beta = kParams, only_a = kParams, none = kParams;
  only_beta.a = 0.0;
  none.a = 0.0;
  none.beta = 0.0;
  only_a.beta = 0.0;
  auto coupling = [&](const ModelParams& p, const RealField& f) { return eval_J(g, p, f) - eval_J(g, none, f); };
  CHECK(eval_J(g, none, f2) / eval_J(g, none, f1) == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(coupling(only_beta, f2) / coupling(only_beta, f1) == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-3));
  CHECK(coupling(only_a, f2) / coupling(only_a, f1) == doctest::Approx(std::pow(2.0, -3.0)).epsilon(1e-3));
}
