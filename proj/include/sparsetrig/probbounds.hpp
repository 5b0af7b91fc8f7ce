#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "sparsetrig/rng.hpp"

// Bernstein-type tail bounds for sums of bounded independent summands, the
// moment bounds they imply, and Monte-Carlo / quadrature verifiers for both.

namespace sparsetrig {

using cplx_pb = std::complex<double>;

struct TailParams {
  double sigma2 = 0;  // sum of summand variances
  double B = 0;       // uniform bound on the summands
  double beta = 1;    // tail prefactor
};

struct ProbBound {
  double raw = 0;     // the exponential expression itself
  double capped = 0;  // min(1, raw): probabilities never exceed 1
};

inline ProbBound bernstein_tail_real(double s, double sigma2, double B) {
  if (s < 0 || sigma2 < 0 || B < 0)
    throw std::invalid_argument("bernstein_tail_real: negative input");
  ProbBound b;
  const double denom = sigma2 + B * s / 3.0;
  if (s == 0)
    b.raw = 2.0;
  else if (denom == 0)
    b.raw = 0.0;
  else
    b.raw = 2.0 * std::exp(-(s * s / 2.0) / denom);
  b.capped = std::min(1.0, b.raw);
  return b;
}

inline ProbBound bernstein_tail_complex(double s, double sigma2, double B) {
  if (s < 0 || sigma2 < 0 || B < 0)
    throw std::invalid_argument("bernstein_tail_complex: negative input");
  ProbBound b;
  const double denom = sigma2 + B * s / 6.0;
  if (s == 0)
    b.raw = 4.0;
  else if (denom == 0)
    b.raw = 0.0;
  else
    b.raw = 4.0 * std::exp(-(s * s / 8.0) / denom);
  b.capped = std::min(1.0, b.raw);
  return b;
}

// From the tail P(|S| >= s) <= beta exp(-s^2/(sigma2 + B s)):
// (E|S|^p)^{1/p} <= beta^{1/p} (sqrt(p) sigma + 2 p B)
inline double moment_from_tail(double p, const TailParams& tp) {
  if (!(p >= 1)) throw std::invalid_argument("moment_from_tail: p must be >= 1");
  if (tp.sigma2 < 0 || tp.B < 0 || !(tp.beta > 0))
    throw std::invalid_argument("moment_from_tail: bad tail parameters");
  return std::pow(tp.beta, 1.0 / p) *
         (std::sqrt(p) * std::sqrt(tp.sigma2) + 2.0 * p * tp.B);
}

// ---------------------------------------------------------------------------
// summand models for the Monte-Carlo checks

enum class SummandKind { two_point, centered_bernoulli, uniform };

struct SummandSpec {
  SummandKind kind = SummandKind::two_point;
  double a = 1;      // magnitude scale
  double prob = 0.5; // success probability (centered_bernoulli only)
  double phase = 0;  // argument of the coefficient (centered_bernoulli only)

  void validate() const {
    if (a < 0) throw std::invalid_argument("SummandSpec: a must be >= 0");
    if (kind == SummandKind::centered_bernoulli && !(prob > 0 && prob <= 1))
      throw std::invalid_argument("SummandSpec: prob must be in (0, 1]");
  }

  bool is_real() const {
    return kind != SummandKind::centered_bernoulli || phase == 0.0;
  }

  double variance() const {
    switch (kind) {
      case SummandKind::two_point: return a * a;
      case SummandKind::centered_bernoulli: return a * a * (1.0 - prob) / prob;
      case SummandKind::uniform: return a * a / 3.0;
    }
    return 0;
  }

  double bound() const {
    switch (kind) {
      case SummandKind::two_point: return a;
      case SummandKind::centered_bernoulli:
        return a * std::max(1.0 / prob - 1.0, 1.0);
      case SummandKind::uniform: return a;
    }
    return 0;
  }

  // consumes exactly one uniform variate per call, for every kind
  cplx_pb draw(rng::SplitMix64& g) const {
    const double u = g.uniform01();
    switch (kind) {
      case SummandKind::two_point: return (u < 0.5) ? cplx_pb(a, 0) : cplx_pb(-a, 0);
      case SummandKind::centered_bernoulli: {
        const cplx_pb c = a * std::polar(1.0, phase);
        return (u < prob) ? c * ((1.0 - prob) / prob) : -c;
      }
      case SummandKind::uniform: return cplx_pb(a * (2.0 * u - 1.0), 0);
    }
    return cplx_pb(0, 0);
  }
};

struct BernsteinPoint {
  double s = 0;
  double empirical = 0;  // fraction of trials with |S| > s
  double bound = 0;      // capped Bernstein value
  double se = 0;         // binomial standard error of the empirical fraction
  bool ok = false;       // empirical <= bound + 3 se
};

inline constexpr std::size_t kTrialsPerSeedBlock = 4096;

inline std::vector<BernsteinPoint> mc_verify_bernstein(
    const std::vector<SummandSpec>& specs, const std::vector<double>& s_grid,
    std::size_t trials, std::uint64_t seed) {
  if (specs.empty()) throw std::invalid_argument("mc_verify_bernstein: no summands");
  if (trials == 0) throw std::invalid_argument("mc_verify_bernstein: no trials");
  double sigma2 = 0;
  double bmax = 0;
  bool real = true;
  for (const SummandSpec& sp : specs) {
    sp.validate();
    sigma2 += sp.variance();
    bmax = std::max(bmax, sp.bound());
    real = real && sp.is_real();
  }

  std::vector<std::size_t> counts(s_grid.size(), 0);
  // trials are grouped into fixed-size blocks, each with its own stream, so
  // results do not depend on how the work might be split up
  const std::size_t blocks = (trials + kTrialsPerSeedBlock - 1) / kTrialsPerSeedBlock;
  for (std::size_t blk = 0; blk < blocks; ++blk) {
    rng::SplitMix64 g(rng::hash_combine(seed, blk));
    const std::size_t lo = blk * kTrialsPerSeedBlock;
    const std::size_t hi = std::min(trials, lo + kTrialsPerSeedBlock);
    for (std::size_t tr = lo; tr < hi; ++tr) {
      cplx_pb sum(0, 0);
      for (const SummandSpec& sp : specs) sum += sp.draw(g);
      const double mag = std::abs(sum);
      for (std::size_t i = 0; i < s_grid.size(); ++i)
        if (mag > s_grid[i]) ++counts[i];
    }
  }

  std::vector<BernsteinPoint> out;
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    BernsteinPoint p;
    p.s = s_grid[i];
    p.empirical = static_cast<double>(counts[i]) / static_cast<double>(trials);
    const ProbBound b = real ? bernstein_tail_real(p.s, sigma2, bmax)
                             : bernstein_tail_complex(p.s, sigma2, bmax);
    p.bound = b.capped;
    p.se = std::sqrt(p.empirical * (1.0 - p.empirical) /
                     static_cast<double>(trials));
    p.ok = p.empirical <= p.bound + 3.0 * p.se + 1e-12;
    out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// moment verification by direct quadrature of the tail integral

// Gamma(a, x) = int_x^inf t^{a-1} e^{-t} dt, for x > a + 1 (continued
// fraction, modified Lentz)
inline double upper_incomplete_gamma(double a, double x) {
  if (!(x > a + 1))
    throw std::invalid_argument("upper_incomplete_gamma: needs x > a + 1");
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-15;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 10000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return std::exp(a * std::log(x) - x) * h;
}

// Reports whether x Gamma(x) <= x^x at this x, compared in log form. The
// inequality holds on [1, 50] (equality at x = 1) and genuinely fails on
// (0, 1) — the predicate answers truthfully either way.
inline bool gamma_growth_bound_holds(double x) {
  if (!(x > 0 && x <= 50))
    throw std::invalid_argument("gamma_growth_bound_holds: x must be in (0, 50]");
  return std::log(x) + std::lgamma(x) <= x * std::log(x) + 1e-12;
}

struct MomentCheck {
  double numeric_moment = 0;  // (integral upper bound on E|S|^p)^{1/p}
  double bound = 0;           // moment_from_tail value
  bool ok = false;
};

// Integrates p s^{p-1} min(1, beta exp(-s^2/(sigma2 + B s))) over (0, inf):
// exact head where the cap is active, midpoint rule in log s over the body,
// and a closed-form exponential completion past the far endpoint. The
// completion majorizes the true remainder, so numeric_moment is a genuine
// upper bound on the p-th moment up to quadrature error.
inline MomentCheck mc_verify_moment(const TailParams& tp, double p,
                                    std::size_t quad_points = 10000) {
  if (!(p >= 1)) throw std::invalid_argument("mc_verify_moment: p must be >= 1");
  if (tp.sigma2 < 0 || tp.B < 0 || !(tp.beta > 0))
    throw std::invalid_argument("mc_verify_moment: bad tail parameters");
  if (quad_points < 16)
    throw std::invalid_argument("mc_verify_moment: too few quadrature points");

  MomentCheck out;
  out.bound = moment_from_tail(p, tp);
  if (tp.sigma2 == 0 && tp.B == 0) {
    out.numeric_moment = 0;
    out.ok = true;
    return out;
  }

  const double sigma = std::sqrt(tp.sigma2);
  const double scale = sigma + tp.B;
  const auto tail = [&](double s) {
    return std::min(1.0, tp.beta * std::exp(-(s * s) / (tp.sigma2 + tp.B * s)));
  };

  const double s_end = scale * (80.0 + 12.0 * p);
  double lo;
  double head;
  if (tp.beta > 1) {
    const double lb = std::log(tp.beta);
    lo = (lb * tp.B + std::sqrt(lb * lb * tp.B * tp.B + 4.0 * lb * tp.sigma2)) / 2.0;
    head = std::pow(lo, p);  // the cap is exactly 1 on [0, lo]
  } else {
    lo = s_end * 1e-9;
    head = std::pow(lo, p);  // integrand <= p s^{p-1} there
  }

  double body = 0;
  const double ulo = std::log(lo);
  const double uhi = std::log(s_end);
  const double du = (uhi - ulo) / static_cast<double>(quad_points);
  for (std::size_t j = 0; j < quad_points; ++j) {
    const double u = ulo + (static_cast<double>(j) + 0.5) * du;
    const double s = std::exp(u);
    body += p * std::pow(s, p - 1.0) * tail(s) * s;  // extra s: ds = s du
  }
  body *= du;

  // past s_end the tail is below beta e^{-s/scale}, which integrates in
  // closed form
  const double completion = p * tp.beta * std::pow(scale, p) *
                            upper_incomplete_gamma(p, s_end / scale);

  // sanity: the majorant really dominates on the next stretch
  double ext = 0;
  const double ulo2 = std::log(s_end);
  const double uhi2 = std::log(3.0 * s_end);
  const double du2 = (uhi2 - ulo2) / 512.0;
  for (std::size_t j = 0; j < 512; ++j) {
    const double u = ulo2 + (static_cast<double>(j) + 0.5) * du2;
    const double s = std::exp(u);
    ext += p * std::pow(s, p - 1.0) * tail(s) * s;
  }
  ext *= du2;
  if (ext > completion * (1.0 + 1e-6) + 1e-300)
    throw std::logic_error("mc_verify_moment: completion fails to dominate");

  out.numeric_moment = std::pow(head + body + completion, 1.0 / p);
  out.ok = out.numeric_moment <= out.bound * (1.0 + 1e-6);
  return out;
}

}  // namespace sparsetrig
