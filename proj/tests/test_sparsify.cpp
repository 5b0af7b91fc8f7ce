#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "sparsetrig/approx.hpp"
#include "sparsetrig/rng.hpp"
#include "sparsetrig/sparsify.hpp"
#include "sparsetrig/trigpoly.hpp"

using namespace sparsetrig;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Frequency fq(std::vector<int> k) { return Frequency(std::move(k)); }

SparseSpectrum random_spectrum(int d, int n_box, std::size_t terms,
                               std::uint64_t seed) {
  rng::SplitMix64 g(seed);
  SparseSpectrum t(d);
  const std::uint64_t side = 2 * static_cast<std::uint64_t>(n_box) + 1;
  while (t.size() < terms) {
    std::vector<int> k(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
      k[static_cast<std::size_t>(i)] = static_cast<int>(g.below(side)) - n_box;
    const double re = 2.0 * g.uniform01() - 1.0;
    const double im = 2.0 * g.uniform01() - 1.0;
    if (re == 0.0 && im == 0.0) continue;
    t.set(Frequency(std::move(k)), cplx(re, im));
  }
  return t;
}

SparseSpectrum ramp_spectrum() {
  SparseSpectrum t(1);
  t.set(fq({0}), cplx(5, 0));
  t.set(fq({1}), cplx(0, 4));
  t.set(fq({2}), cplx(-3, 0));
  t.set(fq({3}), cplx(0, -2));
  t.set(fq({4}), cplx(1, 0));
  return t;
}

SparseSpectrum equal_modulus_run(int terms) {
  SparseSpectrum t(1);
  for (int k = 0; k < terms; ++k) t.set(fq({k}), cplx(0, 1));
  return t;
}

}  // namespace

TEST_CASE("sparsifier constants", "[sparsify]") {
  REQUIRE(kExpectationC == 8.0 + 16.0 / 3.0);
  REQUIRE(kTheoremC == 2.0 * kExpectationC);
  REQUIRE(kTheoremC == 26.666666666666664);
  REQUIRE(kTheoremC < 27.0);
  REQUIRE_THAT(linf_c1(), WithinRel(459.43061820680464, 1e-14));
  REQUIRE(linf_c1() < 460.0);
}

TEST_CASE("tail sampling probabilities", "[sparsify]") {
  SECTION("small supports have no sampled part") {
    SparseSpectrum t(1);
    t.set(fq({0}), cplx(4, 0));
    t.set(fq({1}), cplx(2, 0));
    const TailProbabilities tp = tail_probabilities(t, 1);
    REQUIRE(tp.entries.empty());
    REQUIRE(tp.tail_a1 == 2.0);
    REQUIRE_FALSE(tp.clamp_fired);
  }

  SECTION("equal moduli split the mass evenly") {
    SparseSpectrum t(1);
    for (int k = 0; k < 4; ++k) t.set(fq({k}), cplx(1, 0));
    const TailProbabilities tp = tail_probabilities(t, 1);
    REQUIRE(tp.tail_a1 == 3.0);
    REQUIRE(tp.entries.size() == 2);
    for (const auto& [f, p] : tp.entries)
      REQUIRE_THAT(p, WithinRel(1.0 / 3.0, 1e-15));
  }

  SECTION("probabilities are strictly below one on ranked tails") {
    for (std::uint64_t seed = 0; seed < 100; ++seed)
      for (std::size_t m : {std::size_t{1}, std::size_t{2}, std::size_t{4}}) {
        const int d = 1 + static_cast<int>(seed % 2);
        const SparseSpectrum t =
            random_spectrum(d, d == 1 ? 40 : 5, 10 + seed % 50, 1000 + seed);
        const TailProbabilities tp = tail_probabilities(t, m);
        REQUIRE_FALSE(tp.clamp_fired);
        const double md = static_cast<double>(m);
        for (const auto& [f, p] : tp.entries) {
          REQUIRE(p > 0.0);
          REQUIRE(p <= md / (md + 1.0) + 1e-15);
        }
      }
  }

  SECTION("m must be positive") {
    REQUIRE_THROWS_AS(tail_probabilities(ramp_spectrum(), 0),
                      std::invalid_argument);
  }
}

TEST_CASE("tail sampling is unbiased", "[sparsify]") {
  const SparseSpectrum t = ramp_spectrum();
  const TailProbabilities tp = tail_probabilities(t, 1);
  REQUIRE(tp.tail_a1 == 10.0);
  REQUIRE(tp.entries.size() == 3);
  REQUIRE_THAT(tp.entries[0].second, WithinRel(0.3, 1e-15));
  REQUIRE_THAT(tp.entries[1].second, WithinRel(0.2, 1e-15));
  REQUIRE_THAT(tp.entries[2].second, WithinRel(0.1, 1e-15));

  SECTION("kept entries are reweighted by their probabilities") {
    rng::SplitMix64 g(101);
    for (int rep = 0; rep < 200; ++rep) {
      const SparseSpectrum s = sample_tail(t, 1, g);
      for (const auto& [f, p] : tp.entries) {
        const cplx kept = s.coeff(f);
        if (kept != cplx(0, 0))
          REQUIRE_THAT(std::abs(kept - t.coeff(f) / p), WithinAbs(0.0, 1e-12));
      }
    }
  }

  SECTION("keep rates and count match their expectations") {
    rng::SplitMix64 g(102);
    const std::size_t n = 100000;
    std::vector<std::size_t> keeps(tp.entries.size(), 0);
    double count_sum = 0;
    for (std::size_t rep = 0; rep < n; ++rep) {
      const SparseSpectrum s = sample_tail(t, 1, g);
      count_sum += static_cast<double>(s.size());
      for (std::size_t i = 0; i < tp.entries.size(); ++i)
        if (s.coeff(tp.entries[i].first) != cplx(0, 0)) ++keeps[i];
    }
    double expected_count = 0;
    for (std::size_t i = 0; i < tp.entries.size(); ++i) {
      const double p = tp.entries[i].second;
      expected_count += p;
      const double rate = static_cast<double>(keeps[i]) / static_cast<double>(n);
      const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
      REQUIRE(std::abs(rate - p) <= 5.0 * se);
    }
    REQUIRE_THAT(count_sum / static_cast<double>(n),
                 WithinAbs(expected_count, 0.03));
  }

  SECTION("stream position depends only on the support") {
    rng::SplitMix64 g1(7);
    rng::SplitMix64 g2(7);
    sample_tail(t, 1, g1);
    for (std::size_t i = 0; i < tp.entries.size(); ++i) g2.next();
    REQUIRE(g1.next() == g2.next());
  }

  SECTION("an empty tail consumes nothing") {
    SparseSpectrum small(1);
    small.set(fq({0}), cplx(1, 0));
    small.set(fq({1}), cplx(0.5, 0));
    rng::SplitMix64 g1(9);
    rng::SplitMix64 g2(9);
    const SparseSpectrum s = sample_tail(small, 1, g1);
    REQUIRE(s.size() == 0);
    REQUIRE(g1.next() == g2.next());
  }
}

TEST_CASE("lq sparsifier", "[sparsify]") {
  SECTION("certificate values on a fixed spectrum") {
    const SparseSpectrum t = ramp_spectrum();
    SparsifyConfig cfg;
    cfg.m = 1;
    cfg.q = 2;
    cfg.seed = 3;
    const SparsifyResult res = sparsify_lq(t, cfg, 1.0);
    REQUIRE_THAT(res.expectation_bound, WithinRel(188.56180831641268, 1e-14));
    REQUIRE(res.acceptance_bound == 2.0 * res.expectation_bound);
    REQUIRE_THAT(res.theorem_bound, WithinRel(565.685424949238, 1e-14));
    REQUIRE(res.q_used == 2.0);
    REQUIRE_FALSE(res.m_ge_q);
    REQUIRE(res.accepted);
    REQUIRE(res.measured_error.value <=
            res.acceptance_bound * (1.0 + res.measured_error.est_rel_error));
    REQUIRE(res.approximant.size() <= 4 * cfg.m);
  }

  SECTION("small supports come back exactly") {
    const SparseSpectrum t = ramp_spectrum();
    SparsifyConfig cfg;
    cfg.m = 4;
    cfg.q = 2;
    const SparsifyResult res = sparsify_lq(t, cfg, 1.0);
    REQUIRE(res.accepted);
    REQUIRE(res.attempts_used == 1);
    REQUIRE(res.sampled_count == 0);
    REQUIRE(res.approximant == t);
    REQUIRE(res.measured_error.value == 0.0);
    REQUIRE(res.m_ge_q);
  }

  SECTION("repeat runs are identical") {
    const SparseSpectrum t = random_spectrum(1, 50, 80, 31);
    SparsifyConfig cfg;
    cfg.m = 4;
    cfg.q = 2;
    cfg.seed = 77;
    const SparsifyResult a = sparsify_lq(t, cfg, 0.5);
    const SparsifyResult b = sparsify_lq(t, cfg, 0.5);
    REQUIRE(a.approximant == b.approximant);
    REQUIRE(a.attempts_used == b.attempts_used);
    REQUIRE(a.measured_error.value == b.measured_error.value);
    REQUIRE(a.accepted == b.accepted);
  }

  SECTION("accepted outputs satisfy the certificate across seeds") {
    const SparseSpectrum t = random_spectrum(1, 60, 60, 88);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      SparsifyConfig cfg;
      cfg.m = 4;
      cfg.q = 2;
      cfg.seed = seed;
      const SparsifyResult res = sparsify_lq(t, cfg, 1.0);
      REQUIRE(res.accepted);
      REQUIRE(res.approximant.size() <= 4 * cfg.m);
      REQUIRE(res.sampled_count <= 2 * cfg.m);
      REQUIRE(res.measured_error.value <=
              res.acceptance_bound * (1.0 + res.measured_error.est_rel_error));
      REQUIRE(res.measured_error.value <= res.theorem_bound);
    }
  }

  SECTION("a higher-dimensional run with an even exponent grid") {
    const SparseSpectrum t = random_spectrum(2, 16, 400, 55);
    SparsifyConfig cfg;
    cfg.m = 16;
    cfg.q = 4;
    cfg.seed = 5;
    const SparsifyResult res = sparsify_lq(t, cfg, 1.0);
    REQUIRE(res.accepted);
    REQUIRE(res.m_ge_q);
    REQUIRE(res.measured_error.est_rel_error == 0.0);
    REQUIRE(res.approximant.size() <= 4 * cfg.m);
    REQUIRE(res.measured_error.value <= res.theorem_bound);
  }

  SECTION("single-attempt runs reject oversized draws but keep the best") {
    const SparseSpectrum t = equal_modulus_run(30);
    int rejected = 0;
    int accepted = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      SparsifyConfig cfg;
      cfg.m = 1;
      cfg.q = 2;
      cfg.max_attempts = 1;
      cfg.seed = seed;
      const SparsifyResult res = sparsify_lq(t, cfg, 1.0);
      if (res.accepted) {
        ++accepted;
        REQUIRE(res.sampled_count <= 2);
      } else {
        ++rejected;
        REQUIRE(res.attempts_used == 1);
        REQUIRE(res.approximant.size() > 0);
        REQUIRE(res.measured_error.value > 0.0);
      }
    }
    REQUIRE(accepted > 0);
    REQUIRE(rejected > 0);
  }

  SECTION("input validation") {
    const SparseSpectrum t = ramp_spectrum();
    SparsifyConfig cfg;
    cfg.m = 1;
    cfg.q = 1.0;
    REQUIRE_THROWS_AS(sparsify_lq(t, cfg, 1.0), std::invalid_argument);
    cfg.q = kInf;
    REQUIRE_THROWS_AS(sparsify_lq(t, cfg, 1.0), std::invalid_argument);
    cfg.q = 2.0;
    REQUIRE_THROWS_AS(sparsify_lq(t, cfg, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(sparsify_lq(t, cfg, 1.5), std::invalid_argument);
    cfg.max_attempts = 0;
    REQUIRE_THROWS_AS(sparsify_lq(t, cfg, 1.0), std::invalid_argument);
    cfg.max_attempts = 1;
    cfg.m = 0;
    REQUIRE_THROWS_AS(sparsify_lq(t, cfg, 1.0), std::invalid_argument);
  }
}

TEST_CASE("even exponent matched to the cuboid size", "[sparsify]") {
  REQUIRE(choose_even_q(1, 2) == 2.0);
  REQUIRE(choose_even_q(1, 3) == 4.0);
  REQUIRE(choose_even_q(1, 17) == 6.0);
  REQUIRE(choose_even_q(2, 289) == 24.0);
  REQUIRE(choose_even_q(2, 81) == 18.0);
  for (int d = 1; d <= 3; ++d)
    for (std::uint64_t card : {2ULL, 5ULL, 17ULL, 100ULL, 10000ULL}) {
      const double q = choose_even_q(d, card);
      REQUIRE(q >= 2.0);
      REQUIRE(std::fmod(q, 2.0) == 0.0);
      REQUIRE(q >= 2.0 * static_cast<double>(d) *
                       std::log(static_cast<double>(card)) - 1e-12);
      REQUIRE(q < 2.0 * static_cast<double>(d) *
                       std::log(static_cast<double>(card)) + 2.0 + 1e-12);
    }
  REQUIRE_THROWS_AS(choose_even_q(0, 10), std::invalid_argument);
  REQUIRE_THROWS_AS(choose_even_q(1, 1), std::invalid_argument);
}

TEST_CASE("sup-norm sparsifier", "[sparsify]") {
  SECTION("a single centered mode is reproduced exactly") {
    SparseSpectrum t(1);
    t.set(fq({0}), cplx(1, 0));
    SparsifyConfig cfg;
    const SparsifyResult res =
        sparsify_linf(t, Cuboid({-1}, {1}), 1, 1.0, cfg);
    REQUIRE(res.accepted);
    REQUIRE(res.q_used == 4.0);
    REQUIRE(res.approximant == t);
    REQUIRE(res.measured_error.value == 0.0);
    REQUIRE(res.measured_error.method == NormMethod::oversampled_grid);
    REQUIRE_THAT(res.theorem_bound, WithinRel(481.5508581648658, 1e-14));
  }

  SECTION("exponent follows the cuboid cardinality") {
    const SparseSpectrum t = random_spectrum(1, 8, 15, 21);
    SparsifyConfig cfg;
    cfg.seed = 2;
    const SparsifyResult res =
        sparsify_linf(t, Cuboid({-8}, {8}), 4, 1.0, cfg);
    REQUIRE(res.q_used == 6.0);
    REQUIRE_FALSE(res.m_ge_q);
    REQUIRE(res.accepted);
    REQUIRE(res.measured_error.value <= res.theorem_bound);
    for (const auto& [f, c] : res.approximant.terms())
      REQUIRE(t.coeff(f) != cplx(0, 0));
  }

  SECTION("an off-center box is recentered internally") {
    SparseSpectrum t(1);
    t.set(fq({10}), cplx(2, 0));
    t.set(fq({11}), cplx(1, 0));
    t.set(fq({12}), cplx(0, 1));
    SparsifyConfig cfg;
    const SparsifyResult res =
        sparsify_linf(t, Cuboid({10}, {12}), 2, 1.0, cfg);
    REQUIRE(res.accepted);
    REQUIRE(res.approximant == t);
    REQUIRE(res.measured_error.value == 0.0);
  }

  SECTION("two-dimensional run satisfies its sup-norm certificate") {
    const SparseSpectrum t = random_spectrum(2, 4, 30, 93);
    SparsifyConfig cfg;
    cfg.seed = 17;
    cfg.oversample = 8;
    const SparsifyResult res =
        sparsify_linf(t, Cuboid({-4, -4}, {4, 4}), 4, 0.5, cfg);
    REQUIRE(res.q_used == 18.0);
    REQUIRE(res.accepted);
    REQUIRE(res.approximant.size() <= 16);
    REQUIRE(res.measured_error.value <= res.theorem_bound);
  }

  SECTION("support outside the cuboid is rejected") {
    SparseSpectrum t(1);
    t.set(fq({9}), cplx(1, 0));
    SparsifyConfig cfg;
    REQUIRE_THROWS_AS(sparsify_linf(t, Cuboid({-8}, {8}), 1, 1.0, cfg),
                      std::invalid_argument);
  }

  SECTION("m must be positive") {
    const SparseSpectrum t = ramp_spectrum();
    SparsifyConfig cfg;
    REQUIRE_THROWS_AS(sparsify_linf(t, Cuboid({-8}, {8}), 0, 1.0, cfg),
                      std::invalid_argument);
  }
}
