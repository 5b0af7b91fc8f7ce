#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "sparsetrig/trigpoly.hpp"

// Tensor-product smoothing multiplier: flat at 1 on the core box [-N, N]^d,
// linear ramp down to zero at (2d+1)N per axis. It reproduces polynomials
// supported on the core box and is the vehicle for the L_2 -> L_inf and
// L_q -> L_inf comparison bounds.

namespace sparsetrig {

struct VdpWeights {
  int dim;
  std::vector<int> N;

  VdpWeights(int d, std::vector<int> n) : dim(d), N(std::move(n)) {
    if (dim < 1) throw std::invalid_argument("VdpWeights: dim must be >= 1");
    if (static_cast<int>(N.size()) != dim)
      throw std::invalid_argument("VdpWeights: need one N per axis");
    for (int nj : N)
      if (nj < 1) throw std::invalid_argument("VdpWeights: N_j must be >= 1");
  }
};

// weight profile along one axis (d is the ambient dimension: it sets the
// ramp width)
inline double axis_weight(int d, int N, int k) {
  const int a = std::abs(k);
  const long long top = static_cast<long long>(2 * d + 1) * N;
  if (a <= N) return 1.0;
  if (a > top) return 0.0;
  return static_cast<double>(top - a) / static_cast<double>(2LL * d * N);
}

inline double weight(const VdpWeights& w, const Frequency& f) {
  if (f.dim() != w.dim) throw std::invalid_argument("weight: dim mismatch");
  double v = 1.0;
  for (int i = 0; i < w.dim; ++i) {
    v *= axis_weight(w.dim, w.N[static_cast<std::size_t>(i)], f[i]);
    if (v == 0.0) return 0.0;
  }
  return v;
}

inline SparseSpectrum apply(const VdpWeights& w, const SparseSpectrum& t) {
  if (t.dim() != w.dim) throw std::invalid_argument("apply: dim mismatch");
  SparseSpectrum out(t.dim());
  for (const auto& [f, c] : t.terms()) {
    const double v = weight(w, f);
    if (v != 0.0) out.set(f, c * v);
  }
  return out;
}

// sum of the axis weights over all k: equals (2d+2)N exactly
inline double axis_weight_sum(int d, int N) {
  const long long top = static_cast<long long>(2 * d + 1) * N;
  double s = 0;
  for (long long k = -top; k <= top; ++k)
    s += axis_weight(d, N, static_cast<int>(k));
  return s;
}

// operator norm L_2 -> L_inf, computed exactly from the weight profile
inline double l2_to_linf_exact(const VdpWeights& w) {
  double prod = 1.0;
  for (int i = 0; i < w.dim; ++i) {
    const int nj = w.N[static_cast<std::size_t>(i)];
    const long long top = static_cast<long long>(2 * w.dim + 1) * nj;
    double s = 0;
    for (long long k = -top; k <= top; ++k) {
      const double v = axis_weight(w.dim, nj, static_cast<int>(k));
      s += v * v;
    }
    prod *= s;
  }
  return std::sqrt(prod);
}

// the closed-form majorant sqrt(prod_j (2d+2) N_j)
inline double l2_to_linf_paper_bound(const VdpWeights& w) {
  double prod = 1.0;
  for (int i = 0; i < w.dim; ++i)
    prod *= static_cast<double>(2 * w.dim + 2) *
            static_cast<double>(w.N[static_cast<std::size_t>(i)]);
  return std::sqrt(prod);
}

// the convolution kernel along one axis, evaluated pointwise
inline double axis_kernel_value(int d, int N, double x) {
  const long long top = static_cast<long long>(2 * d + 1) * N;
  double s = 1.0;
  for (long long a = 1; a <= top; ++a)
    s += 2.0 * axis_weight(d, N, static_cast<int>(a)) *
         std::cos(2.0 * std::numbers::pi * static_cast<double>(a) * x);
  return s;
}

inline double axis_kernel_l1(int d, int N, int grid_oversample = 8) {
  if (grid_oversample < 2)
    throw std::invalid_argument("axis_kernel_l1: oversample must be >= 2");
  const long long top = static_cast<long long>(2 * d + 1) * N;
  const std::size_t m = static_cast<std::size_t>(grid_oversample) *
                        static_cast<std::size_t>(2 * top + 1);
  double acc = 0;
  for (std::size_t j = 0; j < m; ++j)
    acc += std::abs(
        axis_kernel_value(d, N, static_cast<double>(j) / static_cast<double>(m)));
  return acc / static_cast<double>(m);
}

// operator norm L_inf -> L_inf = product of the per-axis kernel L_1 norms;
// each factor is at most 1 + 1/d
inline double linf_to_linf_kernel_norm(const VdpWeights& w,
                                       int grid_oversample = 8) {
  double prod = 1.0;
  for (int i = 0; i < w.dim; ++i)
    prod *= axis_kernel_l1(w.dim, w.N[static_cast<std::size_t>(i)],
                           grid_oversample);
  return prod;
}

// sharpened comparison constant: ||t||_inf <= bound * ||t||_q for t
// supported in [-N, N]^d
inline double nikolskij_bound(double q, int d, const std::vector<int>& N) {
  if (std::isnan(q) || !(q >= 2))
    throw std::invalid_argument("nikolskij_bound: q must be >= 2");
  if (d < 1 || static_cast<int>(N.size()) != d)
    throw std::invalid_argument("nikolskij_bound: bad axis count");
  double prod = 1.0;
  for (int nj : N) {
    if (nj < 1) throw std::invalid_argument("nikolskij_bound: N_j must be >= 1");
    prod *= std::pow(static_cast<double>(nj), 1.0 / q);
  }
  return std::exp(1.0 - 2.0 / q) *
         std::pow(static_cast<double>(2 * d + 2), static_cast<double>(d) / q) *
         prod;
}

struct NikolskijCheck {
  double linf = 0;   // grid maximum (a lower bound on the true sup)
  double lq = 0;     // exact for even q
  double ratio = 0;
  double bound = 0;
  bool ok = false;
};

inline NikolskijCheck verify_nikolskij(const SparseSpectrum& t, double q,
                                       int oversample = 8,
                                       std::size_t grid_cap = kDefaultGridCap) {
  if (!detail::is_even_integer(q) || q < 2)
    throw std::invalid_argument("verify_nikolskij: q must be an even integer >= 2");
  NikolskijCheck c;
  c.lq = lq_norm(t, q, oversample, grid_cap).value;
  if (c.lq == 0)
    throw std::invalid_argument("verify_nikolskij: zero polynomial");
  c.linf = lq_norm(t, kInf, oversample, grid_cap).value;
  c.ratio = c.linf / c.lq;
  std::vector<int> n = detail::support_halfwidths(t);
  for (int& nj : n) nj = std::max(nj, 1);  // degenerate axes count as width 1
  c.bound = nikolskij_bound(q, t.dim(), n);
  c.ok = c.ratio <= c.bound + 1e-9;
  return c;
}

}  // namespace sparsetrig
