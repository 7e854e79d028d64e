#pragma once

// Data-parallel cell kernels shared by every module.
//
// Each kernel exists twice: kgw::kernels (OpenMP) and kgw::kernels::serial
// (plain loops). The serial versions are the reference the tests and the
// benchmark compare against. Reductions in the parallel versions sum fixed
// blocks of kReductionBlock cells and combine the block partials in order,
// so results do not depend on the thread count.
//
// Stencil convention: a field of M cells carries M+1 face coefficients.
// Face k sits between cell k-1 and cell k; the ghost values u[-1] and u[M]
// are zero. With c the face coefficients and w the cell weights,
//
//   energy(u)    = sum_k c_k |u_k - u_{k-1}|^2
//   laplacian(u) = (c_{i+1}(u_{i+1}-u_i) - c_i(u_i-u_{i-1})) / w_i
//
// so that sum_i w_i conj(u_i) laplacian(u)_i = -energy(u) exactly.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>

namespace kgw::kernels {

using cplx = std::complex<double>;

inline constexpr std::size_t kReductionBlock = 1024;

/// Coefficients of F(z) = -beta |z1 z2|^gamma + a (|z1|^p + |z2|^p).
struct Coupling {
  double beta = 0.0;
  double gamma = 1.5;
  double a = 0.0;
  double p = 4.0;
};

/// F and its partial derivatives with respect to the moduli x1, x2 >= 0.
struct CouplingPoint {
  double F;
  double f1;
  double f2;
};

inline CouplingPoint coupling_at_moduli(const Coupling& c, double x1, double x2) {
  const double x1g = std::pow(x1, c.gamma);
  const double x2g = std::pow(x2, c.gamma);
  const double x1p = std::pow(x1, c.p);
  const double x2p = std::pow(x2, c.p);
  CouplingPoint out{-c.beta * x1g * x2g + c.a * (x1p + x2p), 0.0, 0.0};
  // |x|^(gamma-1) and |x|^(p-1) vanish at 0 since gamma > 1 and p > 2.
  if (x1 > 0.0) out.f1 = -c.beta * c.gamma * (x1g / x1) * x2g + c.a * c.p * (x1p / x1);
  if (x2 > 0.0) out.f2 = -c.beta * c.gamma * x1g * (x2g / x2) + c.a * c.p * (x2p / x2);
  return out;
}

double weighted_sum(std::span<const double> f, std::span<const double> w);
double weighted_dot(std::span<const double> a, std::span<const double> b,
                    std::span<const double> w);
/// sum_i w_i a_i conj(b_i)
cplx weighted_dot(std::span<const cplx> a, std::span<const cplx> b, std::span<const double> w);
double weighted_norm2(std::span<const cplx> a, std::span<const double> w);

double face_energy(std::span<const double> u, std::span<const double> faces);
double face_energy(std::span<const cplx> u, std::span<const double> faces);
/// Real part of sum_k c_k (a_k - a_{k-1}) conj(b_k - b_{k-1}).
double face_pairing(std::span<const cplx> a, std::span<const cplx> b,
                    std::span<const double> faces);

void laplacian(std::span<const double> u, std::span<const double> faces,
               std::span<const double> weights, std::span<double> out);
void laplacian(std::span<const cplx> u, std::span<const double> faces,
               std::span<const double> weights, std::span<cplx> out);

/// sum_i w_i F(|z1_i|, |z2_i|)
double coupling_integral(const Coupling& c, std::span<const double> z1, std::span<const double> z2,
                         std::span<const double> w);
double coupling_integral(const Coupling& c, std::span<const cplx> z1, std::span<const cplx> z2,
                         std::span<const double> w);

/// D_j F at real arguments.
void coupling_gradient(const Coupling& c, std::span<const double> z1, std::span<const double> z2,
                       std::span<double> g1, std::span<double> g2);
/// Modulus chain rule force f_j(|z1|,|z2|) z_j / |z_j| at complex arguments.
void coupling_gradient(const Coupling& c, std::span<const cplx> z1, std::span<const cplx> z2,
                       std::span<cplx> g1, std::span<cplx> g2);

namespace serial {

double weighted_sum(std::span<const double> f, std::span<const double> w);
double weighted_dot(std::span<const double> a, std::span<const double> b,
                    std::span<const double> w);
cplx weighted_dot(std::span<const cplx> a, std::span<const cplx> b, std::span<const double> w);
double weighted_norm2(std::span<const cplx> a, std::span<const double> w);
double face_energy(std::span<const double> u, std::span<const double> faces);
double face_energy(std::span<const cplx> u, std::span<const double> faces);
double face_pairing(std::span<const cplx> a, std::span<const cplx> b,
                    std::span<const double> faces);
void laplacian(std::span<const double> u, std::span<const double> faces,
               std::span<const double> weights, std::span<double> out);
void laplacian(std::span<const cplx> u, std::span<const double> faces,
               std::span<const double> weights, std::span<cplx> out);
double coupling_integral(const Coupling& c, std::span<const double> z1, std::span<const double> z2,
                         std::span<const double> w);
double coupling_integral(const Coupling& c, std::span<const cplx> z1, std::span<const cplx> z2,
                         std::span<const double> w);
void coupling_gradient(const Coupling& c, std::span<const double> z1, std::span<const double> z2,
                       std::span<double> g1, std::span<double> g2);
void coupling_gradient(const Coupling& c, std::span<const cplx> z1, std::span<const cplx> z2,
                       std::span<cplx> g1, std::span<cplx> g2);

}  // namespace serial
}  // namespace kgw::kernels
