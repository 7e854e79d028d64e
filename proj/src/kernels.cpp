#include "kgw/kernels.hpp"

#include <algorithm>
#include <vector>

namespace kgw::kernels {
namespace {

// Below this many cells the fork/join cost dominates the loop body.
constexpr std::ptrdiff_t kParallelMinCells = 2048;

template <class T, class Term>
T block_reduce(std::size_t n, Term term) {
  const std::size_t nblocks = (n + kReductionBlock - 1) / kReductionBlock;
  if (nblocks <= 1) {
    T acc{};
    for (std::size_t i = 0; i < n; ++i) acc += term(i);
    return acc;
  }
  std::vector<T> partial(nblocks, T{});
  const auto nb = static_cast<std::ptrdiff_t>(nblocks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    T acc{};
    for (std::size_t i = lo; i < hi; ++i) acc += term(i);
    partial[static_cast<std::size_t>(b)] = acc;
  }
  T total{};
  for (const T& v : partial) total += v;
  return total;
}

template <class T>
inline T ghost(std::span<const T> u, std::ptrdiff_t i) {
  return (i < 0 || i >= static_cast<std::ptrdiff_t>(u.size())) ? T{} : u[static_cast<std::size_t>(i)];
}

inline double sq(double x) { return x * x; }
inline double sq(cplx z) { return std::norm(z); }

template <class T>
inline T laplacian_at(std::span<const T> u, std::span<const double> faces,
                      std::span<const double> weights, std::ptrdiff_t i) {
  const T ui = u[static_cast<std::size_t>(i)];
  const auto k = static_cast<std::size_t>(i);
  return (faces[k + 1] * (ghost(u, i + 1) - ui) - faces[k] * (ui - ghost(u, i - 1))) / weights[k];
}

template <class T>
void laplacian_impl(std::span<const T> u, std::span<const double> faces,
                    std::span<const double> weights, std::span<T> out) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static) if (n >= kParallelMinCells)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = laplacian_at(u, faces, weights, i);
}

template <class T>
double face_energy_impl(std::span<const T> u, std::span<const double> faces) {
  return block_reduce<double>(u.size() + 1, [&](std::size_t k) {
    const auto i = static_cast<std::ptrdiff_t>(k);
    return faces[k] * sq(ghost(u, i) - ghost(u, i - 1));
  });
}

inline double modulus(double x) { return std::abs(x); }
inline double modulus(cplx z) { return std::abs(z); }

template <class T>
double coupling_integral_impl(const Coupling& c, std::span<const T> z1, std::span<const T> z2,
                              std::span<const double> w) {
  return block_reduce<double>(z1.size(), [&](std::size_t i) {
    return w[i] * coupling_at_moduli(c, modulus(z1[i]), modulus(z2[i])).F;
  });
}

// f_j(|z1|,|z2|) z_j / |z_j|, zero where |z_j| = 0.
template <class T>
inline void force_at(const Coupling& c, T a, T b, T& ga, T& gb) {
  const double x1 = modulus(a);
  const double x2 = modulus(b);
  const CouplingPoint pt = coupling_at_moduli(c, x1, x2);
  ga = x1 > 0.0 ? a * (pt.f1 / x1) : T{};
  gb = x2 > 0.0 ? b * (pt.f2 / x2) : T{};
}

template <class T>
void coupling_gradient_impl(const Coupling& c, std::span<const T> z1, std::span<const T> z2,
                            std::span<T> g1, std::span<T> g2) {
  const auto n = static_cast<std::ptrdiff_t>(z1.size());
#pragma omp parallel for schedule(static) if (n >= kParallelMinCells)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    force_at(c, z1[k], z2[k], g1[k], g2[k]);
  }
}

}  // namespace

double weighted_sum(std::span<const double> f, std::span<const double> w) {
  return block_reduce<double>(f.size(), [&](std::size_t i) { return f[i] * w[i]; });
}

double weighted_dot(std::span<const double> a, std::span<const double> b,
                    std::span<const double> w) {
  return block_reduce<double>(a.size(), [&](std::size_t i) { return a[i] * b[i] * w[i]; });
}

cplx weighted_dot(std::span<const cplx> a, std::span<const cplx> b, std::span<const double> w) {
  return block_reduce<cplx>(a.size(), [&](std::size_t i) { return w[i] * a[i] * std::conj(b[i]); });
}

double weighted_norm2(std::span<const cplx> a, std::span<const double> w) {
  return block_reduce<double>(a.size(), [&](std::size_t i) { return w[i] * std::norm(a[i]); });
}

double face_energy(std::span<const double> u, std::span<const double> faces) {
  return face_energy_impl(u, faces);
}

double face_energy(std::span<const cplx> u, std::span<const double> faces) {
  return face_energy_impl(u, faces);
}

double face_pairing(std::span<const cplx> a, std::span<const cplx> b,
                    std::span<const double> faces) {
  return block_reduce<double>(a.size() + 1, [&](std::size_t k) {
    const auto i = static_cast<std::ptrdiff_t>(k);
    const cplx da = ghost(a, i) - ghost(a, i - 1);
    const cplx db = ghost(b, i) - ghost(b, i - 1);
    return faces[k] * std::real(da * std::conj(db));
  });
}

void laplacian(std::span<const double> u, std::span<const double> faces,
               std::span<const double> weights, std::span<double> out) {
  laplacian_impl(u, faces, weights, out);
}

void laplacian(std::span<const cplx> u, std::span<const double> faces,
               std::span<const double> weights, std::span<cplx> out) {
  laplacian_impl(u, faces, weights, out);
}

double coupling_integral(const Coupling& c, std::span<const double> z1, std::span<const double> z2,
                         std::span<const double> w) {
  return coupling_integral_impl(c, z1, z2, w);
}

double coupling_integral(const Coupling& c, std::span<const cplx> z1, std::span<const cplx> z2,
                         std::span<const double> w) {
  return coupling_integral_impl(c, z1, z2, w);
}

void coupling_gradient(const Coupling& c, std::span<const double> z1, std::span<const double> z2,
                       std::span<double> g1, std::span<double> g2) {
  coupling_gradient_impl(c, z1, z2, g1, g2);
}

void coupling_gradient(const Coupling& c, std::span<const cplx> z1, std::span<const cplx> z2,
                       std::span<cplx> g1, std::span<cplx> g2) {
  coupling_gradient_impl(c, z1, z2, g1, g2);
}

namespace serial {
namespace {

template <class T>
T at(std::span<const T> u, std::ptrdiff_t i) {
  return (i < 0 || i >= static_cast<std::ptrdiff_t>(u.size())) ? T{} : u[static_cast<std::size_t>(i)];
}

template <class T>
double energy(std::span<const T> u, std::span<const double> faces) {
  double acc = 0.0;
  for (std::size_t k = 0; k <= u.size(); ++k) {
    const auto i = static_cast<std::ptrdiff_t>(k);
    acc += faces[k] * std::norm(cplx(at(u, i) - at(u, i - 1)));
  }
  return acc;
}

template <class T>
void lap(std::span<const T> u, std::span<const double> faces, std::span<const double> weights,
         std::span<T> out) {
  for (std::size_t k = 0; k < u.size(); ++k) {
    const auto i = static_cast<std::ptrdiff_t>(k);
    const T left = u[k] - at(u, i - 1);
    const T right = at(u, i + 1) - u[k];
    out[k] = (faces[k + 1] * right - faces[k] * left) / weights[k];
  }
}

template <class T>
double integral(const Coupling& c, std::span<const T> z1, std::span<const T> z2,
                std::span<const double> w) {
  double acc = 0.0;
  for (std::size_t i = 0; i < z1.size(); ++i)
    acc += w[i] * coupling_at_moduli(c, std::abs(z1[i]), std::abs(z2[i])).F;
  return acc;
}

template <class T>
void gradient(const Coupling& c, std::span<const T> z1, std::span<const T> z2, std::span<T> g1,
              std::span<T> g2) {
  for (std::size_t i = 0; i < z1.size(); ++i) {
    const double x1 = std::abs(z1[i]);
    const double x2 = std::abs(z2[i]);
    const CouplingPoint pt = coupling_at_moduli(c, x1, x2);
    g1[i] = x1 > 0.0 ? z1[i] * (pt.f1 / x1) : T{};
    g2[i] = x2 > 0.0 ? z2[i] * (pt.f2 / x2) : T{};
  }
}

}  // namespace

double weighted_sum(std::span<const double> f, std::span<const double> w) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * w[i];
  return acc;
}

double weighted_dot(std::span<const double> a, std::span<const double> b,
                    std::span<const double> w) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i] * w[i];
  return acc;
}

cplx weighted_dot(std::span<const cplx> a, std::span<const cplx> b, std::span<const double> w) {
  cplx acc{};
  for (std::size_t i = 0; i < a.size(); ++i) acc += w[i] * a[i] * std::conj(b[i]);
  return acc;
}

double weighted_norm2(std::span<const cplx> a, std::span<const double> w) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += w[i] * std::norm(a[i]);
  return acc;
}

double face_energy(std::span<const double> u, std::span<const double> faces) {
  return energy(u, faces);
}

double face_energy(std::span<const cplx> u, std::span<const double> faces) {
  return energy(u, faces);
}

double face_pairing(std::span<const cplx> a, std::span<const cplx> b,
                    std::span<const double> faces) {
  double acc = 0.0;
  for (std::size_t k = 0; k <= a.size(); ++k) {
    const auto i = static_cast<std::ptrdiff_t>(k);
    acc += faces[k] * std::real((at(a, i) - at(a, i - 1)) * std::conj(at(b, i) - at(b, i - 1)));
  }
  return acc;
}

void laplacian(std::span<const double> u, std::span<const double> faces,
               std::span<const double> weights, std::span<double> out) {
  lap(u, faces, weights, out);
}

void laplacian(std::span<const cplx> u, std::span<const double> faces,
               std::span<const double> weights, std::span<cplx> out) {
  lap(u, faces, weights, out);
}

double coupling_integral(const Coupling& c, std::span<const double> z1, std::span<const double> z2,
                         std::span<const double> w) {
  return integral(c, z1, z2, w);
}

double coupling_integral(const Coupling& c, std::span<const cplx> z1, std::span<const cplx> z2,
                         std::span<const double> w) {
  return integral(c, z1, z2, w);
}

void coupling_gradient(const Coupling& c, std::span<const double> z1, std::span<const double> z2,
                       std::span<double> g1, std::span<double> g2) {
  gradient(c, z1, z2, g1, g2);
}

void coupling_gradient(const Coupling& c, std::span<const cplx> z1, std::span<const cplx> z2,
                       std::span<cplx> g1, std::span<cplx> g2) {
  gradient(c, z1, z2, g1, g2);
}

}  // namespace serial
}  // namespace kgw::kernels
