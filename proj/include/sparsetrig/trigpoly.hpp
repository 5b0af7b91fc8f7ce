#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <compare>
#include <complex>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sparsetrig/detail/fft.hpp"

// Trigonometric polynomials on the d-torus [0,1)^d, stored as finite maps
// from integer frequency vectors to complex coefficients, plus their exact
// and grid-based L_q norms. All operations are pure; inputs are never
// mutated after construction.

namespace sparsetrig {

using cplx = std::complex<double>;

inline constexpr std::size_t kDefaultGridCap = std::size_t(1) << 28;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Frequency {
  std::vector<int> k;

  Frequency() = default;
  explicit Frequency(std::vector<int> comps) : k(std::move(comps)) {}

  int dim() const { return static_cast<int>(k.size()); }
  int operator[](int i) const { return k[static_cast<std::size_t>(i)]; }

  // lexicographic; the tie-break order used everywhere
  auto operator<=>(const Frequency&) const = default;
};

class SparseSpectrum {
 public:
  explicit SparseSpectrum(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("SparseSpectrum: dim must be >= 1");
  }

  int dim() const { return dim_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const std::map<Frequency, cplx>& terms() const { return terms_; }

  // exact zeros are never stored
  void set(const Frequency& f, cplx c) {
    check_dim(f);
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw std::invalid_argument("SparseSpectrum: non-finite coefficient");
    if (c == cplx(0, 0))
      terms_.erase(f);
    else
      terms_[f] = c;
  }

  void add(const Frequency& f, cplx c) {
    check_dim(f);
    auto it = terms_.find(f);
    if (it == terms_.end()) {
      set(f, c);
      return;
    }
    it->second += c;
    if (it->second == cplx(0, 0)) terms_.erase(it);
  }

  cplx coeff(const Frequency& f) const {
    auto it = terms_.find(f);
    return it == terms_.end() ? cplx(0, 0) : it->second;
  }

  bool contains(const Frequency& f) const { return terms_.count(f) != 0; }

  bool operator==(const SparseSpectrum& o) const {
    return dim_ == o.dim_ && terms_ == o.terms_;
  }

 private:
  void check_dim(const Frequency& f) const {
    if (f.dim() != dim_)
      throw std::invalid_argument("SparseSpectrum: frequency dimension mismatch");
  }

  int dim_;
  std::map<Frequency, cplx> terms_;
};

struct RankedCoefficients {
  int source_dim = 0;
  std::vector<std::pair<Frequency, cplx>> order;  // non-increasing |coeff|

  std::size_t size() const { return order.size(); }
};

struct Cuboid {
  std::vector<int> lower;  // A
  std::vector<int> upper;  // B

  Cuboid(std::vector<int> a, std::vector<int> b)
      : lower(std::move(a)), upper(std::move(b)) {
    if (lower.empty() || lower.size() != upper.size())
      throw std::invalid_argument("Cuboid: bad bounds");
    for (std::size_t i = 0; i < lower.size(); ++i)
      if (lower[i] > upper[i]) throw std::invalid_argument("Cuboid: lower > upper");
  }

  // symmetric box [-R, R]^d
  static Cuboid symmetric(int d, int radius) {
    return Cuboid(std::vector<int>(static_cast<std::size_t>(d), -radius),
                  std::vector<int>(static_cast<std::size_t>(d), radius));
  }

  int dim() const { return static_cast<int>(lower.size()); }

  bool contains(const Frequency& f) const {
    if (f.dim() != dim()) return false;
    for (int i = 0; i < dim(); ++i)
      if (f[i] < lower[static_cast<std::size_t>(i)] ||
          f[i] > upper[static_cast<std::size_t>(i)])
        return false;
    return true;
  }

  std::uint64_t cardinality() const {
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < lower.size(); ++i) {
      const std::uint64_t side =
          static_cast<std::uint64_t>(static_cast<std::int64_t>(upper[i]) - lower[i] + 1);
      if (n > std::numeric_limits<std::uint64_t>::max() / side)
        throw std::overflow_error("Cuboid: cardinality overflow");
      n *= side;
    }
    return n;
  }
};

enum class NormMethod { parseval_exact, even_q_quadrature, oversampled_grid };

struct NormResult {
  double value = 0;
  NormMethod method = NormMethod::parseval_exact;
  std::size_t grid_points_per_axis = 0;  // max over axes; 0 for parseval
  double est_rel_error = 0;              // 1/oversample^2 heuristic for grids
};

struct GridValues {
  std::vector<std::size_t> shape;
  std::vector<cplx> values;  // row-major

  const cplx& at(const std::vector<std::size_t>& idx) const {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < shape.size(); ++a) flat = flat * shape[a] + idx[a];
    return values[flat];
  }
};

// ---------------------------------------------------------------------------
// spectrum arithmetic

inline SparseSpectrum operator+(const SparseSpectrum& a, const SparseSpectrum& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("spectrum add: dim mismatch");
  SparseSpectrum out = a;
  for (const auto& [f, c] : b.terms()) out.add(f, c);
  return out;
}

inline SparseSpectrum operator-(const SparseSpectrum& a, const SparseSpectrum& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("spectrum sub: dim mismatch");
  SparseSpectrum out = a;
  for (const auto& [f, c] : b.terms()) out.add(f, -c);
  return out;
}

inline SparseSpectrum operator*(const SparseSpectrum& a, cplx s) {
  SparseSpectrum out(a.dim());
  for (const auto& [f, c] : a.terms()) out.set(f, c * s);
  return out;
}

inline SparseSpectrum translate(const SparseSpectrum& t, const Frequency& delta) {
  if (delta.dim() != t.dim())
    throw std::invalid_argument("translate: dim mismatch");
  SparseSpectrum out(t.dim());
  for (const auto& [f, c] : t.terms()) {
    Frequency g = f;
    for (int i = 0; i < t.dim(); ++i) g.k[static_cast<std::size_t>(i)] += delta[i];
    out.set(g, c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// ranking

inline RankedCoefficients rank(const SparseSpectrum& t) {
  RankedCoefficients r;
  r.source_dim = t.dim();
  r.order.assign(t.terms().begin(), t.terms().end());
  std::sort(r.order.begin(), r.order.end(), [](const auto& a, const auto& b) {
    const double ma = std::abs(a.second);
    const double mb = std::abs(b.second);
    if (ma != mb) return ma > mb;
    return a.first < b.first;  // lexicographic tie-break
  });
  return r;
}

// ---------------------------------------------------------------------------
// evaluation

inline cplx evaluate(const SparseSpectrum& t, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != t.dim())
    throw std::invalid_argument("evaluate: point dimension mismatch");
  // summed in descending-modulus order so results are reproducible
  const RankedCoefficients r = rank(t);
  cplx acc(0, 0);
  for (const auto& [f, c] : r.order) {
    double dot = 0;
    for (int i = 0; i < t.dim(); ++i) dot += static_cast<double>(f[i]) * x[i];
    acc += c * std::polar(1.0, 2.0 * std::numbers::pi * dot);
  }
  return acc;
}

namespace detail {

inline std::size_t checked_grid_total(const std::vector<std::size_t>& shape,
                                      std::size_t cap) {
  std::size_t total = 1;
  for (std::size_t m : shape) {
    if (m == 0) throw std::invalid_argument("grid: zero points on an axis");
    if (total > cap / m)
      throw std::length_error("grid memory cap exceeded");
    total *= m;
  }
  return total;
}

}  // namespace detail

inline GridValues grid_values(const SparseSpectrum& t,
                              const std::vector<std::size_t>& points_per_axis,
                              std::size_t grid_cap = kDefaultGridCap) {
  if (static_cast<int>(points_per_axis.size()) != t.dim())
    throw std::invalid_argument("grid_values: axis count mismatch");
  const std::size_t total = detail::checked_grid_total(points_per_axis, grid_cap);
  GridValues g;
  g.shape = points_per_axis;
  g.values.assign(total, cplx(0, 0));
  // fold frequencies mod M per axis: exact at the grid points
  for (const auto& [f, c] : t.terms()) {
    std::size_t flat = 0;
    for (int i = 0; i < t.dim(); ++i) {
      const std::int64_t m = static_cast<std::int64_t>(g.shape[static_cast<std::size_t>(i)]);
      std::int64_t r = f[i] % m;
      if (r < 0) r += m;
      flat = flat * static_cast<std::size_t>(m) + static_cast<std::size_t>(r);
    }
    g.values[flat] += c;
  }
  detail::nd_dft(g.values, g.shape, +1);
  return g;
}

// ---------------------------------------------------------------------------
// norms

namespace detail {

inline bool is_even_integer(double q) {
  if (!std::isfinite(q)) return false;
  if (q != std::floor(q)) return false;
  const long long iq = static_cast<long long>(q);
  return iq % 2 == 0;
}

inline std::vector<int> support_halfwidths(const SparseSpectrum& t) {
  std::vector<int> n(static_cast<std::size_t>(t.dim()), 0);
  for (const auto& [f, c] : t.terms()) {
    (void)c;
    for (int i = 0; i < t.dim(); ++i)
      n[static_cast<std::size_t>(i)] =
          std::max(n[static_cast<std::size_t>(i)], std::abs(f[i]));
  }
  return n;
}

inline double ipow(double base, long long e) {
  double acc = 1;
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

// mean of |t|^q over the tensor grid, as value = (mean)^{1/q}; the largest
// grid value is factored out so |t|^q cannot overflow
inline double grid_power_mean(const GridValues& g, double q, bool even) {
  double vmax = 0;
  for (const cplx& v : g.values) vmax = std::max(vmax, std::abs(v));
  if (vmax == 0) return 0;
  double acc = 0;
  if (even) {
    const long long half = static_cast<long long>(q) / 2;
    const double inv2 = 1.0 / (vmax * vmax);
    for (const cplx& v : g.values) acc += ipow(std::norm(v) * inv2, half);
  } else {
    const double inv = 1.0 / vmax;
    for (const cplx& v : g.values) acc += std::pow(std::abs(v) * inv, q);
  }
  return vmax * std::pow(acc / static_cast<double>(g.values.size()), 1.0 / q);
}

}  // namespace detail

// Exact rectangle-rule L_q value for even q (exposed separately so the
// Parseval path can be cross-checked against the quadrature at q = 2).
inline double even_q_quadrature_value(const SparseSpectrum& t, double q,
                                      std::size_t grid_cap = kDefaultGridCap,
                                      std::size_t* points_used = nullptr) {
  const std::vector<int> n = detail::support_halfwidths(t);
  std::vector<std::size_t> shape;
  std::size_t mmax = 1;
  for (int nj : n) {
    // exactness needs M > q*N_j; the next power of two keeps the transform fast
    const std::size_t m = std::bit_ceil(
        static_cast<std::size_t>(q) * static_cast<std::size_t>(nj) + 1);
    shape.push_back(m);
    mmax = std::max(mmax, m);
  }
  if (points_used) *points_used = mmax;
  const GridValues g = grid_values(t, shape, grid_cap);
  return detail::grid_power_mean(g, q, true);
}

inline NormResult lq_norm(const SparseSpectrum& t, double q, int oversample = 8,
                          std::size_t grid_cap = kDefaultGridCap) {
  if (std::isnan(q) || q < 1)
    throw std::invalid_argument("lq_norm: q must be >= 1 or infinity");

  NormResult r;
  if (q == 2.0) {
    double acc = 0;
    for (const auto& [f, c] : t.terms()) {
      (void)f;
      acc += std::norm(c);
    }
    r.value = std::sqrt(acc);
    r.method = NormMethod::parseval_exact;
    r.grid_points_per_axis = 0;
    r.est_rel_error = 0;
    return r;
  }

  if (detail::is_even_integer(q)) {
    std::size_t pts = 0;
    r.value = even_q_quadrature_value(t, q, grid_cap, &pts);
    r.method = NormMethod::even_q_quadrature;
    r.grid_points_per_axis = pts;
    r.est_rel_error = 0;
    return r;
  }

  if (oversample < 2)
    throw std::invalid_argument("lq_norm: oversample must be >= 2 for this q");
  const std::vector<int> n = detail::support_halfwidths(t);
  std::vector<std::size_t> shape;
  std::size_t mmax = 1;
  for (int nj : n) {
    const std::size_t m = static_cast<std::size_t>(oversample) *
                          (2 * static_cast<std::size_t>(nj) + 1);
    shape.push_back(m);
    mmax = std::max(mmax, m);
  }
  const GridValues g = grid_values(t, shape, grid_cap);
  if (q == kInf) {
    double vmax = 0;
    for (const cplx& v : g.values) vmax = std::max(vmax, std::abs(v));
    r.value = vmax;  // grid maximum: a lower bound on the true sup
  } else {
    r.value = detail::grid_power_mean(g, q, false);
  }
  r.method = NormMethod::oversampled_grid;
  r.grid_points_per_axis = mmax;
  r.est_rel_error = 1.0 / (static_cast<double>(oversample) * oversample);
  return r;
}

inline double a_theta_norm(const SparseSpectrum& t, double theta) {
  if (std::isnan(theta) || theta <= 0)
    throw std::invalid_argument("a_theta_norm: theta must be > 0");
  double amax = 0;
  for (const auto& [f, c] : t.terms()) {
    (void)f;
    amax = std::max(amax, std::abs(c));
  }
  if (theta == kInf || amax == 0) return amax;
  double acc = 0;
  for (const auto& [f, c] : t.terms()) {
    (void)f;
    acc += std::pow(std::abs(c) / amax, theta);
  }
  return amax * std::pow(acc, 1.0 / theta);
}

// ---------------------------------------------------------------------------
// recentering

namespace detail {

inline int floor_div2(int a) { return (a >= 0) ? a / 2 : (a - 1) / 2; }

}  // namespace detail

struct RecenterResult {
  SparseSpectrum spectrum;
  Frequency shift;  // the additive shift applied to every frequency
};

// Shift the support of t into the symmetric box [-N, N]^d with
// N_j = floor((B_j - A_j + 1)/2). Odd midpoints round toward -infinity.
// Coefficients are untouched (the shift is a unimodular modulation), so all
// moduli and pointwise absolute values are preserved.
inline RecenterResult recenter(const SparseSpectrum& t, const Cuboid& q) {
  if (q.dim() != t.dim()) throw std::invalid_argument("recenter: dim mismatch");
  for (const auto& [f, c] : t.terms()) {
    (void)c;
    if (!q.contains(f))
      throw std::invalid_argument("recenter: support not contained in cuboid");
  }
  Frequency shift(std::vector<int>(static_cast<std::size_t>(t.dim()), 0));
  for (int i = 0; i < t.dim(); ++i)
    shift.k[static_cast<std::size_t>(i)] =
        -detail::floor_div2(q.lower[static_cast<std::size_t>(i)] +
                            q.upper[static_cast<std::size_t>(i)]);
  return RecenterResult{translate(t, shift), shift};
}

// ---------------------------------------------------------------------------
// spectrum file I/O
//
// Text format: first line `dim=<d>`, then one term per line as
// `k_1 ... k_d re im` (whitespace-separated); `#` starts a comment; empty
// lines are ignored. Duplicate frequencies are an error; zero coefficients
// are dropped on read.

namespace detail {

inline double parse_double(const std::string& tok, int line_no) {
  double v = 0;
  const char* b = tok.data();
  const char* e = b + tok.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e)
    throw std::runtime_error("spectrum parse error at line " +
                             std::to_string(line_no) + ": bad number '" + tok + "'");
  return v;
}

inline std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

}  // namespace detail

inline SparseSpectrum read_spectrum(std::istream& in) {
  std::string line;
  int line_no = 0;
  int dim = 0;
  bool have_dim = false;
  SparseSpectrum out(1);
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t h = line.find('#');
    if (h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string tok;
    while (ls >> tok) toks.push_back(tok);
    if (toks.empty()) continue;
    if (!have_dim) {
      if (toks.size() != 1 || toks[0].rfind("dim=", 0) != 0)
        throw std::runtime_error("spectrum parse error at line " +
                                 std::to_string(line_no) + ": expected dim=<d>");
      dim = static_cast<int>(detail::parse_double(toks[0].substr(4), line_no));
      if (dim < 1)
        throw std::runtime_error("spectrum parse error: dim must be >= 1");
      out = SparseSpectrum(dim);
      have_dim = true;
      continue;
    }
    if (static_cast<int>(toks.size()) != dim + 2)
      throw std::runtime_error("spectrum parse error at line " +
                               std::to_string(line_no) + ": expected " +
                               std::to_string(dim + 2) + " fields");
    Frequency f(std::vector<int>(static_cast<std::size_t>(dim), 0));
    for (int i = 0; i < dim; ++i) {
      const double v = detail::parse_double(toks[static_cast<std::size_t>(i)], line_no);
      if (v != std::floor(v))
        throw std::runtime_error("spectrum parse error at line " +
                                 std::to_string(line_no) + ": non-integer frequency");
      f.k[static_cast<std::size_t>(i)] = static_cast<int>(v);
    }
    const double re = detail::parse_double(toks[static_cast<std::size_t>(dim)], line_no);
    const double im = detail::parse_double(toks[static_cast<std::size_t>(dim) + 1], line_no);
    if (out.contains(f))
      throw std::runtime_error("spectrum parse error at line " +
                               std::to_string(line_no) + ": duplicate frequency");
    out.set(f, cplx(re, im));
  }
  if (!have_dim) throw std::runtime_error("spectrum parse error: missing dim line");
  return out;
}

inline void write_spectrum(std::ostream& os, const SparseSpectrum& t) {
  os << "dim=" << t.dim() << "\n";
  for (const auto& [f, c] : t.terms()) {
    for (int i = 0; i < t.dim(); ++i) os << f[i] << " ";
    os << detail::format_double(c.real()) << " " << detail::format_double(c.imag())
       << "\n";
  }
}

inline SparseSpectrum load_spectrum(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spectrum file: " + path);
  return read_spectrum(in);
}

inline void save_spectrum(const std::string& path, const SparseSpectrum& t) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open spectrum file for write: " + path);
  write_spectrum(os, t);
}

}  // namespace sparsetrig
