#pragma once

#include <bit>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

// Dense discrete Fourier transforms backing the grid evaluators. sign = +1
// computes synthesis sums X_j = sum_n a_n exp(+2*pi*i*j*n/M), sign = -1 the
// conjugate. Power-of-two lengths run iterative radix-2; anything else goes
// through Bluestein's chirp-z reduction, so every grid size is supported.
// Results are bit-deterministic: the operation order is fixed and twiddles
// are tabulated once per plan.

namespace sparsetrig::detail {

using cplx = std::complex<double>;

class Pow2Fft {
 public:
  explicit Pow2Fft(std::size_t n) : n_(n), rev_(n), w_(n / 2) {
    for (std::size_t i = 1; i < n; ++i)
      rev_[i] = (rev_[i >> 1] >> 1) | ((i & 1) ? n >> 1 : 0);
    for (std::size_t j = 0; j < n / 2; ++j) {
      const double ang = -2.0 * std::numbers::pi *
                         static_cast<double>(j) / static_cast<double>(n);
      w_[j] = std::polar(1.0, ang);
    }
  }

  // in-place, unscaled
  void run(cplx* a, int sign) const {
    for (std::size_t i = 0; i < n_; ++i)
      if (i < rev_[i]) std::swap(a[i], a[rev_[i]]);
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len >> 1;
      const std::size_t step = n_ / len;
      for (std::size_t base = 0; base < n_; base += len) {
        for (std::size_t j = 0; j < half; ++j) {
          cplx w = w_[j * step];
          if (sign > 0) w = std::conj(w);
          const cplx u = a[base + j];
          const cplx v = a[base + j + half] * w;
          a[base + j] = u + v;
          a[base + j + half] = u - v;
        }
      }
    }
  }

  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::vector<std::size_t> rev_;
  std::vector<cplx> w_;
};

// One-dimensional transform of a fixed length and sign, reusable across many
// lines. Not safe to share one instance between threads (scratch is reused).
class DftPlan {
 public:
  DftPlan(std::size_t n, int sign)
      : n_(n),
        sign_(sign),
        pow2_(std::has_single_bit(n)),
        base_(pow2_ ? n : std::bit_ceil(2 * n - 1)) {
    if (pow2_) return;
    const std::size_t p = base_.size();
    chirp_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      // k^2 mod 2n keeps the polar argument small and exact
      const std::uint64_t r = (static_cast<std::uint64_t>(k) * k) % (2 * n);
      const double ang = static_cast<double>(sign) * std::numbers::pi *
                         static_cast<double>(r) / static_cast<double>(n);
      chirp_[k] = std::polar(1.0, ang);
    }
    kernel_hat_.assign(p, cplx(0, 0));
    kernel_hat_[0] = std::conj(chirp_[0]);
    for (std::size_t k = 1; k < n; ++k) {
      kernel_hat_[k] = std::conj(chirp_[k]);
      kernel_hat_[p - k] = std::conj(chirp_[k]);
    }
    base_.run(kernel_hat_.data(), -1);
    work_.resize(p);
  }

  void execute(cplx* line) {
    if (pow2_) {
      base_.run(line, sign_);
      return;
    }
    const std::size_t p = base_.size();
    for (std::size_t k = 0; k < n_; ++k) work_[k] = line[k] * chirp_[k];
    for (std::size_t k = n_; k < p; ++k) work_[k] = cplx(0, 0);
    base_.run(work_.data(), -1);
    for (std::size_t k = 0; k < p; ++k) work_[k] *= kernel_hat_[k];
    base_.run(work_.data(), +1);
    const double inv = 1.0 / static_cast<double>(p);
    for (std::size_t j = 0; j < n_; ++j) line[j] = work_[j] * chirp_[j] * inv;
  }

  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  int sign_;
  bool pow2_;
  Pow2Fft base_;
  std::vector<cplx> chirp_;
  std::vector<cplx> kernel_hat_;
  std::vector<cplx> work_;
};

// Transform of a flat row-major array along every axis. Lines that are
// identically zero are skipped, which matters on the first axes of sparse
// zero-padded inputs.
inline void nd_dft(std::vector<cplx>& values, const std::vector<std::size_t>& shape,
                   int sign) {
  const std::size_t total = values.size();
  if (total == 0) return;
  std::size_t stride = total;
  for (std::size_t axis = 0; axis < shape.size(); ++axis) {
    const std::size_t m = shape[axis];
    stride /= m;
    if (m == 1) continue;
    DftPlan plan(m, sign);
    std::vector<cplx> scratch(m);
    const std::size_t block = m * stride;
    for (std::size_t b = 0; b < total; b += block) {
      for (std::size_t s = 0; s < stride; ++s) {
        bool all_zero = true;
        for (std::size_t i = 0; i < m; ++i) {
          scratch[i] = values[b + s + i * stride];
          if (scratch[i] != cplx(0, 0)) all_zero = false;
        }
        if (all_zero) continue;
        plan.execute(scratch.data());
        for (std::size_t i = 0; i < m; ++i) values[b + s + i * stride] = scratch[i];
      }
    }
  }
}

}  // namespace sparsetrig::detail
