#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "sparsetrig/rng.hpp"
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

}  // namespace

TEST_CASE("frequency ordering is lexicographic", "[trigpoly]") {
  REQUIRE(fq({0, 1}) < fq({1, 0}));
  REQUIRE(fq({-1}) < fq({0}));
  REQUIRE(fq({2, -3}) == fq({2, -3}));
  REQUIRE(fq({1, 2}) < fq({1, 3}));
}

TEST_CASE("spectrum storage drops exact zeros and rejects bad input",
          "[trigpoly]") {
  SparseSpectrum t(1);
  t.set(fq({3}), cplx(0, 0));
  REQUIRE(t.empty());

  t.set(fq({3}), cplx(1, 0));
  t.add(fq({3}), cplx(-1, 0));
  REQUIRE_FALSE(t.contains(fq({3})));

  REQUIRE_THROWS_AS(t.set(fq({0}), cplx(std::nan(""), 0)),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(t.set(fq({0, 0}), cplx(1, 0)), std::invalid_argument);
  REQUIRE_THROWS_AS(SparseSpectrum(0), std::invalid_argument);
}

TEST_CASE("pointwise evaluation", "[trigpoly]") {
  SECTION("constant polynomial") {
    SparseSpectrum t(2);
    t.set(fq({0, 0}), cplx(1, 0));
    const cplx v = evaluate(t, {0.37, 0.91});
    REQUIRE_THAT(v.real(), WithinAbs(1.0, 1e-15));
    REQUIRE_THAT(v.imag(), WithinAbs(0.0, 1e-15));
  }
  SECTION("unit exponential at quarter period") {
    SparseSpectrum t(1);
    t.set(fq({1}), cplx(1, 0));
    const cplx v = evaluate(t, {0.25});
    REQUIRE_THAT(v.real(), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(v.imag(), WithinAbs(1.0, 1e-15));
  }
  SECTION("cosine pair at the origin") {
    SparseSpectrum t(1);
    t.set(fq({1}), cplx(1, 0));
    t.set(fq({-1}), cplx(1, 0));
    REQUIRE_THAT(evaluate(t, {0.0}).real(), WithinAbs(2.0, 1e-15));
  }
  SECTION("dimension mismatch") {
    SparseSpectrum t(2);
    t.set(fq({1, 1}), cplx(1, 0));
    REQUIRE_THROWS_AS(evaluate(t, {0.5}), std::invalid_argument);
  }
}

TEST_CASE("grid evaluation on uniform tensor grids", "[trigpoly]") {
  SECTION("constant") {
    SparseSpectrum t(1);
    t.set(fq({0}), cplx(2.5, -1));
    const GridValues g = grid_values(t, {4});
    REQUIRE(g.values.size() == 4);
    for (const cplx& v : g.values) {
      REQUIRE_THAT(v.real(), WithinAbs(2.5, 1e-14));
      REQUIRE_THAT(v.imag(), WithinAbs(-1.0, 1e-14));
    }
  }
  SECTION("fourth roots of unity") {
    SparseSpectrum t(1);
    t.set(fq({1}), cplx(1, 0));
    const GridValues g = grid_values(t, {4});
    const cplx expect[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int j = 0; j < 4; ++j) {
      REQUIRE_THAT(g.values[static_cast<std::size_t>(j)].real(),
                   WithinAbs(expect[j].real(), 1e-14));
      REQUIRE_THAT(g.values[static_cast<std::size_t>(j)].imag(),
                   WithinAbs(expect[j].imag(), 1e-14));
    }
  }
  SECTION("tensor grid in two dimensions") {
    SparseSpectrum t(2);
    t.set(fq({1, 0}), cplx(1, 0));
    const GridValues g = grid_values(t, {2, 2});
    REQUIRE_THAT(g.at({0, 0}).real(), WithinAbs(1.0, 1e-14));
    REQUIRE_THAT(g.at({0, 1}).real(), WithinAbs(1.0, 1e-14));
    REQUIRE_THAT(g.at({1, 0}).real(), WithinAbs(-1.0, 1e-14));
    REQUIRE_THAT(g.at({1, 1}).real(), WithinAbs(-1.0, 1e-14));
  }
  SECTION("memory cap") {
    SparseSpectrum t(2);
    t.set(fq({1, 1}), cplx(1, 0));
    REQUIRE_THROWS_AS(
        grid_values(t, {std::size_t(1) << 20, std::size_t(1) << 20}),
        std::length_error);
  }
}

TEST_CASE("grid evaluation agrees with pointwise evaluation", "[trigpoly]") {
  int checked = 0;
  for (int i = 0; i < 50; ++i) {
    const int d = 1 + i % 3;
    const int n_box = d == 1 ? 10 : (d == 2 ? 6 : 3);
    // never request more distinct frequencies than the box holds
    const std::size_t box_card = d == 1 ? 21 : (d == 2 ? 169 : 343);
    const std::size_t terms =
        std::min<std::size_t>(8 + static_cast<std::size_t>(i) % 20, box_card);
    const SparseSpectrum t = random_spectrum(
        d, n_box, terms, 0x5eed0000 + static_cast<std::uint64_t>(i));
    const std::size_t mpts = d == 1 ? 32 : (d == 2 ? 16 : 8);
    const std::vector<std::size_t> shape(static_cast<std::size_t>(d), mpts);
    const GridValues g = grid_values(t, shape);

    double vmax = 0;
    for (const cplx& v : g.values) vmax = std::max(vmax, std::abs(v));

    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    for (std::size_t flat = 0; flat < g.values.size(); ++flat) {
      std::size_t rem = flat;
      std::vector<double> x(static_cast<std::size_t>(d));
      for (std::size_t a = shape.size(); a-- > 0;) {
        idx[a] = rem % shape[a];
        rem /= shape[a];
        x[a] = static_cast<double>(idx[a]) / static_cast<double>(shape[a]);
      }
      const cplx direct = evaluate(t, x);
      if (std::abs(g.values[flat] - direct) > 1e-12 * std::max(vmax, 1.0))
        ++checked;
    }
  }
  REQUIRE(checked == 0);
}

TEST_CASE("lq norm dispatch", "[trigpoly]") {
  SparseSpectrum mono(1);
  mono.set(fq({3}), cplx(1, 0));
  SparseSpectrum cospair(1);
  cospair.set(fq({1}), cplx(1, 0));
  cospair.set(fq({-1}), cplx(1, 0));

  SECTION("coefficient-space value at q = 2") {
    const NormResult r = lq_norm(mono, 2);
    REQUIRE(r.value == 1.0);
    REQUIRE(r.method == NormMethod::parseval_exact);
    REQUIRE(r.grid_points_per_axis == 0);
    REQUIRE(r.est_rel_error == 0.0);
  }
  SECTION("exact even exponent") {
    const NormResult r = lq_norm(cospair, 4);
    REQUIRE_THAT(r.value, WithinAbs(1.5650845800732873, 1e-14));
    REQUIRE(r.method == NormMethod::even_q_quadrature);
    REQUIRE(r.grid_points_per_axis == 8);
    REQUIRE(r.est_rel_error == 0.0);
  }
  SECTION("grid maximum lower-bounds the sup") {
    const NormResult r = lq_norm(cospair, kInf, 16);
    REQUIRE(r.value <= 2.0 + 1e-12);
    REQUIRE_THAT(r.value, WithinAbs(2.0, 1e-2));
    REQUIRE(r.method == NormMethod::oversampled_grid);
    REQUIRE(r.est_rel_error == 1.0 / 256.0);
  }
  SECTION("odd exponents interpolate between even neighbours") {
    const double v2 = lq_norm(cospair, 2).value;
    const double v3 = lq_norm(cospair, 3, 32).value;
    const double v4 = lq_norm(cospair, 4).value;
    REQUIRE(v3 > v2 - 1e-6);
    REQUIRE(v3 < v4 + 1e-6);
    REQUIRE(lq_norm(cospair, 3, 32).est_rel_error == 1.0 / 1024.0);
  }
  SECTION("rejects bad exponents and undersampling") {
    REQUIRE_THROWS_AS(lq_norm(cospair, 0.5), std::invalid_argument);
    REQUIRE_THROWS_AS(lq_norm(cospair, std::nan("")), std::invalid_argument);
    REQUIRE_THROWS_AS(lq_norm(cospair, 3, 1), std::invalid_argument);
  }
}

TEST_CASE("even quadrature cross-checks the coefficient-space norm",
          "[trigpoly]") {
  for (int i = 0; i < 100; ++i) {
    const int d = 1 + i % 4;
    const int n_box = d <= 2 ? 16 : (d == 3 ? 8 : 4);
    const std::size_t terms =
        d == 1 ? 25 : (d == 2 ? 40 + static_cast<std::size_t>(i) : 20);
    const SparseSpectrum t =
        random_spectrum(d, n_box, terms, 0xabc123 + static_cast<std::uint64_t>(i));
    const double parseval = lq_norm(t, 2).value;
    const double quad = even_q_quadrature_value(t, 2);
    REQUIRE_THAT(quad, WithinRel(parseval, 1e-10));
  }
}

TEST_CASE("norm monotonicity across exponents", "[trigpoly]") {
  for (int i = 0; i < 20; ++i) {
    const int d = 1 + i % 2;
    const SparseSpectrum t =
        random_spectrum(d, d == 1 ? 12 : 6, 15, 0xfeed + static_cast<std::uint64_t>(i));
    const double v2 = lq_norm(t, 2).value;
    const double v4 = lq_norm(t, 4).value;
    const double v6 = lq_norm(t, 6).value;
    const double v8 = lq_norm(t, 8).value;
    REQUIRE(v2 <= v4 + 1e-8);
    REQUIRE(v4 <= v6 + 1e-8);
    REQUIRE(v6 <= v8 + 1e-8);
  }
}

TEST_CASE("theta quasi-norms of the coefficient sequence", "[trigpoly]") {
  SparseSpectrum single(1);
  single.set(fq({7}), cplx(0, 5));
  for (double theta : {0.5, 1.0, 2.0, kInf})
    REQUIRE_THAT(a_theta_norm(single, theta), WithinAbs(5.0, 1e-14));

  SparseSpectrum pair(1);
  pair.set(fq({0}), cplx(3, 0));
  pair.set(fq({1}), cplx(0, 4));
  REQUIRE_THAT(a_theta_norm(pair, 2), WithinAbs(5.0, 1e-14));

  SparseSpectrum triple(1);
  for (int k : {0, 1, 2}) triple.set(fq({k}), cplx(1, 0));
  REQUIRE_THAT(a_theta_norm(triple, 0.5), WithinAbs(9.0, 1e-12));

  REQUIRE_THROWS_AS(a_theta_norm(pair, 0.0), std::invalid_argument);
}

TEST_CASE("ranking orders by modulus with lexicographic ties", "[trigpoly]") {
  SECTION("modulus sort") {
    SparseSpectrum t(1);
    t.set(fq({0}), cplx(0.5, 0));
    t.set(fq({1}), cplx(1.0, 0));
    const RankedCoefficients r = rank(t);
    REQUIRE(r.order[0].first == fq({1}));
    REQUIRE(r.order[1].first == fq({0}));
  }
  SECTION("lexicographic tie-break") {
    SparseSpectrum t(2);
    t.set(fq({0, 1}), cplx(1, 0));
    t.set(fq({1, 0}), cplx(1, 0));
    const RankedCoefficients r = rank(t);
    REQUIRE(r.order[0].first == fq({0, 1}));
    REQUIRE(r.order[1].first == fq({1, 0}));
  }
  SECTION("empty spectrum") {
    REQUIRE(rank(SparseSpectrum(3)).order.empty());
  }
  SECTION("round trip reconstructs the spectrum") {
    const SparseSpectrum t = random_spectrum(2, 8, 30, 0xd00d);
    const RankedCoefficients r = rank(t);
    REQUIRE(r.size() == t.size());
    SparseSpectrum back(t.dim());
    for (const auto& [f, c] : r.order) back.set(f, c);
    REQUIRE(back == t);
    for (std::size_t j = 1; j < r.size(); ++j)
      REQUIRE(std::abs(r.order[j - 1].second) >= std::abs(r.order[j].second));
  }
}

TEST_CASE("recentering shifts the support into a symmetric box", "[trigpoly]") {
  SECTION("singleton cuboid") {
    SparseSpectrum t(1);
    t.set(fq({4}), cplx(1, 1));
    const RecenterResult r = recenter(t, Cuboid({4}, {4}));
    REQUIRE(r.shift == fq({-4}));
    REQUIRE(r.spectrum.contains(fq({0})));
    REQUIRE(r.spectrum.coeff(fq({0})) == cplx(1, 1));
  }
  SECTION("even-width box") {
    SparseSpectrum t(1);
    for (int k : {0, 1, 2}) t.set(fq({k}), cplx(1, 0));
    const RecenterResult r = recenter(t, Cuboid({0}, {2}));
    REQUIRE(r.shift == fq({-1}));
    for (const auto& [f, c] : r.spectrum.terms()) {
      (void)c;
      REQUIRE(f[0] >= -1);
      REQUIRE(f[0] <= 1);
    }
  }
  SECTION("odd midpoint rounds toward minus infinity") {
    SparseSpectrum t(1);
    for (int k : {0, 1, 2, 3}) t.set(fq({k}), cplx(1, 0));
    const RecenterResult r = recenter(t, Cuboid({0}, {3}));
    REQUIRE(r.shift == fq({-1}));
    for (const auto& [f, c] : r.spectrum.terms()) {
      (void)c;
      REQUIRE(f[0] >= -2);
      REQUIRE(f[0] <= 2);
    }
  }
  SECTION("moduli and pointwise magnitudes are invariant") {
    const SparseSpectrum t = random_spectrum(2, 6, 20, 0x777);
    SparseSpectrum shifted = translate(t, fq({5, 3}));
    const Cuboid q({-1, -3}, {11, 9});
    const RecenterResult r = recenter(shifted, q);
    for (double theta : {0.5, 1.0, 2.0})
      REQUIRE(a_theta_norm(r.spectrum, theta) == a_theta_norm(shifted, theta));
    rng::SplitMix64 g(99);
    for (int i = 0; i < 10; ++i) {
      const std::vector<double> x{g.uniform01(), g.uniform01()};
      REQUIRE_THAT(std::abs(evaluate(r.spectrum, x)),
                   WithinAbs(std::abs(evaluate(shifted, x)), 1e-12));
    }
  }
  SECTION("support must lie inside the cuboid") {
    SparseSpectrum t(1);
    t.set(fq({5}), cplx(1, 0));
    REQUIRE_THROWS_AS(recenter(t, Cuboid({0}, {3})), std::invalid_argument);
  }
}

TEST_CASE("spectrum text format round trips", "[trigpoly]") {
  SECTION("write then read") {
    const SparseSpectrum t = random_spectrum(2, 9, 25, 0x10);
    std::stringstream ss;
    write_spectrum(ss, t);
    const SparseSpectrum back = read_spectrum(ss);
    REQUIRE(back == t);
  }
  SECTION("comments, blank lines, zero coefficients") {
    std::stringstream ss(
        "dim=2\n"
        "# a comment\n"
        "\n"
        "1 2 0.5 -0.25  # trailing comment\n"
        "3 4 0 0\n");
    const SparseSpectrum t = read_spectrum(ss);
    REQUIRE(t.size() == 1);
    REQUIRE(t.coeff(Frequency({1, 2})) == cplx(0.5, -0.25));
  }
  SECTION("duplicate frequency is an error") {
    std::stringstream ss("dim=1\n1 0.5 0\n1 0.25 0\n");
    REQUIRE_THROWS_AS(read_spectrum(ss), std::runtime_error);
  }
  SECTION("missing dim line is an error") {
    std::stringstream ss("1 0.5 0\n");
    REQUIRE_THROWS_AS(read_spectrum(ss), std::runtime_error);
  }
  SECTION("non-integer frequency is an error") {
    std::stringstream ss("dim=1\n1.5 0.5 0\n");
    REQUIRE_THROWS_AS(read_spectrum(ss), std::runtime_error);
  }
  SECTION("malformed number is an error") {
    std::stringstream ss("dim=1\n1 zzz 0\n");
    REQUIRE_THROWS_AS(read_spectrum(ss), std::runtime_error);
  }
  SECTION("decimal fractions survive exactly") {
    SparseSpectrum t(1);
    t.set(fq({2}), cplx(0.1, -0.3));
    std::stringstream ss;
    write_spectrum(ss, t);
    REQUIRE(read_spectrum(ss).coeff(fq({2})) == cplx(0.1, -0.3));
  }
}
