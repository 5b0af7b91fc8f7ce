#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sparsetrig/approx.hpp"
#include "sparsetrig/rng.hpp"
#include "sparsetrig/trigpoly.hpp"

// Randomized m-term sparsification: keep the 2m largest coefficients, then
// importance-sample the remainder with unbiased reweighting. Acceptance
// rejects the (provably rare) draws that are too big or too inaccurate, so
// accepted outputs carry a deterministic error certificate.

namespace sparsetrig {

inline constexpr double kExpectationC = 8.0 + 16.0 / 3.0;
inline constexpr double kTheoremC = 16.0 + 32.0 / 3.0;
static_assert(kTheoremC < 27.0);

// constant for the sup-norm variant
inline double linf_c1() { return std::sqrt(2.0) * std::exp(2.5) * kTheoremC; }

struct TailProbabilities {
  std::vector<std::pair<Frequency, double>> entries;  // ranked order past 2m
  double tail_a1 = 0;   // ell_1 mass past the m largest
  bool clamp_fired = false;
};

inline TailProbabilities tail_probabilities(const SparseSpectrum& t,
                                            std::size_t m) {
  if (m < 1) throw std::invalid_argument("tail_probabilities: m must be >= 1");
  const RankedCoefficients r = rank(t);
  TailProbabilities out;
  for (std::size_t j = m; j < r.size(); ++j)
    out.tail_a1 += std::abs(r.order[j].second);
  for (std::size_t j = 2 * m; j < r.size(); ++j) {
    const double c = std::abs(r.order[j].second);
    double p = static_cast<double>(m) * c / out.tail_a1;
    if (p > 1.0) {
      p = 1.0;
      out.clamp_fired = true;
    }
    out.entries.emplace_back(r.order[j].first, p);
  }
  return out;
}

// one uniform variate is consumed per tail entry whether or not it is kept,
// so the stream position is a function of the support alone
inline SparseSpectrum sample_tail(const SparseSpectrum& t, std::size_t m,
                                  rng::SplitMix64& g) {
  const TailProbabilities tp = tail_probabilities(t, m);
  SparseSpectrum out(t.dim());
  for (const auto& [f, p] : tp.entries) {
    const double u = g.uniform01();
    if (u < p) out.set(f, t.coeff(f) / p);
  }
  return out;
}

struct SparsifyConfig {
  std::size_t m = 1;
  double q = 2;
  int max_attempts = 100;
  int oversample = 16;
  std::uint64_t seed = 0;
  std::size_t grid_cap = kDefaultGridCap;
};

struct SparsifyResult {
  SparseSpectrum approximant;
  int attempts_used = 0;
  std::size_t sampled_count = 0;
  NormResult measured_error;
  double expectation_bound = 0;  // mean-error guarantee per attempt
  double acceptance_bound = 0;   // twice the expectation bound, uninflated
  double theorem_bound = 0;      // class-level guarantee in terms of A_theta
  bool accepted = false;
  bool m_ge_q = false;  // regime flag: the class-level guarantee needs m >= q
  double q_used = 0;

  explicit SparsifyResult(int dim) : approximant(dim) {}
};

inline SparsifyResult sparsify_lq(const SparseSpectrum& t,
                                  const SparsifyConfig& cfg, double theta) {
  if (cfg.m < 1) throw std::invalid_argument("sparsify_lq: m must be >= 1");
  if (std::isnan(cfg.q) || !(cfg.q >= 2) || cfg.q == kInf)
    throw std::invalid_argument("sparsify_lq: q must be finite and >= 2");
  if (!(theta > 0) || theta > 1)
    throw std::invalid_argument("sparsify_lq: theta must be in (0, 1]");
  if (cfg.max_attempts < 1)
    throw std::invalid_argument("sparsify_lq: max_attempts must be >= 1");

  const std::size_t m = cfg.m;
  const ThresholdResult th = threshold(t, 2 * m);
  const double tail_m_a1 = tail_gamma_norm(t, m, 1.0);
  const double md = static_cast<double>(m);

  SparsifyResult res(t.dim());
  res.q_used = cfg.q;
  res.m_ge_q = md >= cfg.q;
  res.expectation_bound =
      kExpectationC * std::sqrt(cfg.q) * tail_m_a1 / std::sqrt(md);
  res.acceptance_bound = 2.0 * res.expectation_bound;
  res.theorem_bound = kTheoremC * std::sqrt(cfg.q) *
                      std::pow(md, 0.5 - 1.0 / theta) * a_theta_norm(t, theta);

  bool have_best = false;
  bool best_sparse_ok = false;
  double best_err = 0;

  for (int attempt = 1; attempt <= cfg.max_attempts; ++attempt) {
    rng::SplitMix64 g(rng::hash_combine(cfg.seed, static_cast<std::uint64_t>(attempt)));
    const SparseSpectrum sampled = sample_tail(t, m, g);
    const SparseSpectrum candidate = th.head + sampled;
    const SparseSpectrum diff = t - candidate;
    const NormResult err = lq_norm(diff, cfg.q, cfg.oversample, cfg.grid_cap);
    const bool sparse_ok = sampled.size() <= 2 * m;
    const bool err_ok =
        err.value <= res.acceptance_bound * (1.0 + err.est_rel_error);
    if (sparse_ok && err_ok) {
      res.approximant = candidate;
      res.attempts_used = attempt;
      res.sampled_count = sampled.size();
      res.measured_error = err;
      res.accepted = true;
      return res;
    }
    // remember the best rejected attempt: sparse ones beat oversized ones,
    // then smaller error wins
    const bool better =
        !have_best || (sparse_ok && !best_sparse_ok) ||
        (sparse_ok == best_sparse_ok && err.value < best_err);
    if (better) {
      have_best = true;
      best_sparse_ok = sparse_ok;
      best_err = err.value;
      res.approximant = candidate;
      res.sampled_count = sampled.size();
      res.measured_error = err;
    }
  }
  res.attempts_used = cfg.max_attempts;
  res.accepted = false;
  return res;
}

// even quadrature exponent used inside the sup-norm sparsifier: the smallest
// even integer >= 2 d log(#Q), floored at 2
inline double choose_even_q(int d, std::uint64_t cardinality) {
  if (d < 1) throw std::invalid_argument("choose_even_q: d must be >= 1");
  if (cardinality < 2)
    throw std::invalid_argument("choose_even_q: cardinality must be >= 2");
  const double target = static_cast<double>(d) *
                        std::log(static_cast<double>(cardinality));
  const double q = 2.0 * std::ceil(target);
  return std::max(2.0, q);
}

// Sup-norm sparsifier over a frequency cuboid Q: recenters the support,
// runs the L_q sparsifier at the even q matched to |Q|, and translates the
// result back. The recentering is a modulation, so sup errors agree.
inline SparsifyResult sparsify_linf(const SparseSpectrum& t, const Cuboid& q_box,
                                    std::size_t m, double theta,
                                    const SparsifyConfig& cfg) {
  if (m < 1) throw std::invalid_argument("sparsify_linf: m must be >= 1");
  const std::uint64_t card = q_box.cardinality();
  const double even_q = choose_even_q(q_box.dim(), card);

  const RecenterResult rc = recenter(t, q_box);
  SparsifyConfig inner = cfg;
  inner.m = m;
  inner.q = even_q;
  SparsifyResult res = sparsify_lq(rc.spectrum, inner, theta);

  Frequency back(std::vector<int>(static_cast<std::size_t>(t.dim()), 0));
  for (int i = 0; i < t.dim(); ++i)
    back.k[static_cast<std::size_t>(i)] = -rc.shift[i];
  res.approximant = translate(res.approximant, back);

  const SparseSpectrum diff = t - res.approximant;
  res.measured_error = lq_norm(diff, kInf, cfg.oversample, cfg.grid_cap);
  res.theorem_bound = linf_c1() * std::sqrt(static_cast<double>(t.dim())) *
                      std::pow(static_cast<double>(m), 0.5 - 1.0 / theta) *
                      std::sqrt(std::log(static_cast<double>(card))) *
                      a_theta_norm(t, theta);
  return res;
}

}  // namespace sparsetrig
