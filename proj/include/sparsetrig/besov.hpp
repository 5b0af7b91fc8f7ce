#pragma once

#include <bit>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "sparsetrig/rng.hpp"
#include "sparsetrig/sparsify.hpp"
#include "sparsetrig/trigpoly.hpp"

// Dyadic-block (mixed-smoothness Besov) machinery: block decomposition,
// quasi-norms, cube projections with their tail bounds, and the end-to-end
// m-term approximation rate they combine into.

namespace sparsetrig {

struct DyadicBlockIndex {
  std::vector<int> levels;

  auto operator<=>(const DyadicBlockIndex&) const = default;

  int level_sum() const {
    return std::accumulate(levels.begin(), levels.end(), 0);
  }
};

// per-axis level: 0 holds only v = 0; level n >= 1 holds 2^{n-1} <= |v| < 2^n
inline int component_level(int v) {
  if (v == 0) return 0;
  return std::bit_width(static_cast<std::uint32_t>(std::abs(v)));
}

inline DyadicBlockIndex block_of(const Frequency& f) {
  DyadicBlockIndex b;
  b.levels.reserve(f.k.size());
  for (int v : f.k) b.levels.push_back(component_level(v));
  return b;
}

struct BesovParams {
  double p = 2;
  double theta = 1;
  double r = 0;

  bool admissible_for_thm52() const {
    if (!(p >= 2) || p == kInf) return false;
    if (!(theta > 0) || theta > 1) return false;
    if (p == 2.0 && theta == 1.0) return false;
    return true;
  }
};

inline double besov_norm(const SparseSpectrum& f, const BesovParams& prm,
                         int oversample = 8,
                         std::size_t grid_cap = kDefaultGridCap) {
  if (std::isnan(prm.p) || !(prm.p > 1))
    throw std::invalid_argument("besov_norm: p must be > 1");
  if (std::isnan(prm.theta) || !(prm.theta > 0))
    throw std::invalid_argument("besov_norm: theta must be > 0");
  std::map<DyadicBlockIndex, SparseSpectrum> blocks;
  for (const auto& [k, c] : f.terms()) {
    auto [it, fresh] = blocks.try_emplace(block_of(k), f.dim());
    (void)fresh;
    it->second.set(k, c);
  }
  double sup = 0;
  double acc = 0;
  for (const auto& [b, part] : blocks) {
    const double bn = lq_norm(part, prm.p, oversample, grid_cap).value;
    const double lv = static_cast<double>(b.level_sum());
    if (prm.theta == kInf)
      sup = std::max(sup, std::pow(2.0, lv * prm.r) * bn);
    else
      acc += std::pow(2.0, lv * prm.r * prm.theta) * std::pow(bn, prm.theta);
  }
  if (prm.theta == kInf) return sup;
  return std::pow(acc, 1.0 / prm.theta);
}

// restriction of the coefficient map to the cube [-N, N]^d
inline SparseSpectrum project(const SparseSpectrum& f, int N) {
  if (N < 1) throw std::invalid_argument("project: N must be >= 1");
  SparseSpectrum out(f.dim());
  for (const auto& [k, c] : f.terms()) {
    bool inside = true;
    for (int v : k.k)
      if (std::abs(v) > N) {
        inside = false;
        break;
      }
    if (inside) out.set(k, c);
  }
  return out;
}

namespace detail {

inline double besov_delta(const BesovParams& prm) {
  return 1.0 / prm.theta - 0.5 - 1.0 / prm.p;
}

inline void require_besov_regime(const BesovParams& prm, const char* who) {
  if (!prm.admissible_for_thm52())
    throw std::invalid_argument(std::string(who) +
                                ": parameters outside the admissible range");
  if (!(besov_delta(prm) > 0))
    throw std::invalid_argument(std::string(who) +
                                ": smoothness exponent must be positive");
}

}  // namespace detail

// sup-norm tail after projecting onto [-N, N]^d, for f in the unit ball
// scaled by besov_norm_value
inline double projection_tail_bound(const BesovParams& prm, int d, int N,
                                    double besov_norm_value) {
  detail::require_besov_regime(prm, "projection_tail_bound");
  if (d < 1 || N < 1)
    throw std::invalid_argument("projection_tail_bound: bad d or N");
  if (besov_norm_value < 0)
    throw std::invalid_argument("projection_tail_bound: negative norm");
  const double delta = detail::besov_delta(prm);
  return std::exp(1.0 - 2.0 / prm.p) *
         std::pow(static_cast<double>(d + 1), static_cast<double>(d) / prm.p) *
         std::pow(static_cast<double>(N), -delta) * besov_norm_value;
}

// smallest power of two N making the projection tail comparable to the
// m-term rate: N >= ((d+1)^{d/p} m^{1/theta-1/2})^{1/delta}, and at most
// twice that
inline int choose_N(const BesovParams& prm, int d, std::size_t m) {
  detail::require_besov_regime(prm, "choose_N");
  if (d < 1 || m < 1) throw std::invalid_argument("choose_N: bad d or m");
  const double delta = detail::besov_delta(prm);
  const double lower =
      std::pow(std::pow(static_cast<double>(d + 1), static_cast<double>(d) / prm.p) *
                   std::pow(static_cast<double>(m), 1.0 / prm.theta - 0.5),
               1.0 / delta);
  int n = 1;
  while (static_cast<double>(n) < lower) {
    if (n > (1 << 29)) throw std::overflow_error("choose_N: N out of range");
    n *= 2;
  }
  if (!(static_cast<double>(n) >= lower * (1.0 - 1e-12)) ||
      !(static_cast<double>(n) <= 2.0 * lower * (1.0 + 1e-12)))
    throw std::logic_error("choose_N: sandwich violated");
  const double lhs = std::pow(static_cast<double>(d + 1),
                              static_cast<double>(d) / prm.p) *
                     std::pow(static_cast<double>(n), -delta);
  const double rhs = std::pow(static_cast<double>(m), 0.5 - 1.0 / prm.theta);
  if (lhs > rhs * (1.0 + 1e-9))
    throw std::logic_error("choose_N: tail-versus-rate condition violated");
  return n;
}

inline double thm52_c2() { return linf_c1() + 3.0 * std::exp(1.0); }

// class-level m-term sup-norm rate over the Besov unit ball
inline double thm52_bound(const BesovParams& prm, int d, std::size_t m) {
  detail::require_besov_regime(prm, "thm52_bound");
  if (d < 1 || m < 1) throw std::invalid_argument("thm52_bound: bad d or m");
  if (static_cast<double>(d) * static_cast<double>(m) < 2.0)
    throw std::invalid_argument("thm52_bound: need d*m >= 2");
  const double delta = detail::besov_delta(prm);
  const double rate = 1.0 / prm.theta - 0.5;
  return thm52_c2() * static_cast<double>(d) / std::sqrt(delta) *
         std::sqrt(std::max(static_cast<double>(d) / prm.p, rate)) *
         std::pow(static_cast<double>(m), -rate) *
         std::sqrt(std::log(static_cast<double>(d) * static_cast<double>(m)));
}

// shape-only evaluator (the generic constant is set to 1 and nothing is
// asserted against it)
inline double cor53_bound(const BesovParams& prm, int d, std::size_t m) {
  if (std::isnan(prm.p) || !(prm.p > 0) || !(prm.theta > 0) || prm.theta > 1)
    throw std::invalid_argument("cor53_bound: bad parameters");
  const double denom = (2.0 - prm.theta) * prm.p - 2.0 * prm.theta;
  if (!(denom > 0))
    throw std::invalid_argument("cor53_bound: denominator must be positive");
  if (d < 1 || m < 1) throw std::invalid_argument("cor53_bound: bad d or m");
  if (static_cast<double>(d) * static_cast<double>(m) < 2.0)
    throw std::invalid_argument("cor53_bound: need d*m >= 2");
  const double rate = 1.0 / prm.theta - 0.5;
  return std::sqrt((2.0 - prm.theta) * prm.p / denom) *
         std::pow(static_cast<double>(d), 1.5) *
         std::pow(static_cast<double>(m), -rate) *
         std::sqrt(std::log(static_cast<double>(d) * static_cast<double>(m)));
}

// shape-only index map ceil(d^2 (log d)^2 m (log m)^3), constant 1
inline std::uint64_t cor53_index_map(int d, std::size_t m) {
  if (d < 1 || m < 1) throw std::invalid_argument("cor53_index_map: bad d or m");
  const double ld = std::log(static_cast<double>(d));
  const double lm = std::log(static_cast<double>(m));
  return static_cast<std::uint64_t>(std::ceil(
      static_cast<double>(d) * d * ld * ld * static_cast<double>(m) * lm * lm * lm));
}

// ---------------------------------------------------------------------------
// random functions on the Besov unit sphere

namespace detail {

inline void enumerate_levels(int d, int budget, std::vector<int>& cur,
                             std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == d) {
    out.push_back(cur);
    return;
  }
  for (int l = 0; l <= budget; ++l) {
    cur.push_back(l);
    enumerate_levels(d, budget - l, cur, out);
    cur.pop_back();
  }
}

inline std::vector<int> level_values(int l) {
  if (l == 0) return {0};
  std::vector<int> vals;
  const int lo = 1 << (l - 1);
  const int hi = (1 << l) - 1;
  for (int v = -hi; v <= -lo; ++v) vals.push_back(v);
  for (int v = lo; v <= hi; ++v) vals.push_back(v);
  return vals;
}

inline int draw_level_value(int l, rng::SplitMix64& g) {
  if (l == 0) return 0;
  const int lo = 1 << (l - 1);
  const int mag = lo + static_cast<int>(g.below(static_cast<std::uint64_t>(lo)));
  return g.coin() ? mag : -mag;
}

}  // namespace detail

// Random spectrum with unit Besov quasi-norm: up to terms_per_block
// distinct frequencies drawn uniformly inside every block with level sum at
// most L, random phases, block weights flat across blocks (decay > 0 tilts
// the energy toward low blocks), then one exact global rescale.
inline SparseSpectrum random_besov_ball(const BesovParams& prm, int d, int L,
                                        int terms_per_block, std::uint64_t seed,
                                        double decay = 0.0,
                                        int oversample = 8) {
  if (d < 1) throw std::invalid_argument("random_besov_ball: d must be >= 1");
  if (L < 0) throw std::invalid_argument("random_besov_ball: L must be >= 0");
  if (terms_per_block < 1)
    throw std::invalid_argument("random_besov_ball: terms_per_block must be >= 1");

  std::vector<std::vector<int>> levels;
  std::vector<int> cur;
  detail::enumerate_levels(d, L, cur, levels);

  rng::SplitMix64 g(seed);
  SparseSpectrum f(d);
  for (const std::vector<int>& lv : levels) {
    std::uint64_t card = 1;
    for (int l : lv) card *= (l == 0) ? 1ull : (1ull << l);
    const std::uint64_t take =
        std::min<std::uint64_t>(card, static_cast<std::uint64_t>(terms_per_block));

    std::vector<Frequency> chosen;
    if (card <= static_cast<std::uint64_t>(terms_per_block)) {
      // whole block, enumerated in lexicographic order
      std::vector<std::vector<int>> axis_vals;
      for (int l : lv) axis_vals.push_back(detail::level_values(l));
      std::vector<std::size_t> idx(lv.size(), 0);
      for (std::uint64_t c = 0; c < card; ++c) {
        std::vector<int> k(lv.size());
        for (std::size_t a = 0; a < lv.size(); ++a) k[a] = axis_vals[a][idx[a]];
        chosen.emplace_back(std::move(k));
        for (std::size_t a = lv.size(); a-- > 0;) {
          if (++idx[a] < axis_vals[a].size()) break;
          idx[a] = 0;
        }
      }
    } else {
      std::set<Frequency> seen;
      while (seen.size() < take) {
        std::vector<int> k(lv.size());
        for (std::size_t a = 0; a < lv.size(); ++a)
          k[a] = detail::draw_level_value(lv[a], g);
        seen.insert(Frequency(std::move(k)));
      }
      chosen.assign(seen.begin(), seen.end());
    }

    const double lsum =
        static_cast<double>(std::accumulate(lv.begin(), lv.end(), 0));
    const double mod = std::pow(2.0, -lsum * prm.r) *
                       std::pow(2.0, -decay * lsum) /
                       std::sqrt(static_cast<double>(chosen.size()));
    for (const Frequency& k : chosen)
      f.set(k, std::polar(mod, 2.0 * std::numbers::pi * g.uniform01()));
  }

  const double bn = besov_norm(f, prm, oversample);
  return f * cplx(1.0 / bn, 0.0);
}

}  // namespace sparsetrig
