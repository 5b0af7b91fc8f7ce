#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <mutex>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "sparsetrig/approx.hpp"
#include "sparsetrig/besov.hpp"
#include "sparsetrig/probbounds.hpp"
#include "sparsetrig/rng.hpp"
#include "sparsetrig/sparsify.hpp"
#include "sparsetrig/trigpoly.hpp"
#include "sparsetrig/vdp.hpp"

// Experiment harness: seeded random test functions, bound-verification
// sweeps over parameter grids, deterministic CSV reporting, and text
// summaries. Everything is a pure function of the configuration, so two
// runs with the same config produce byte-identical CSV bodies (wall-clock
// timing is opt-in for that reason).

namespace sparsetrig {

enum class Mode {
  nikolskij,
  bernstein,
  moments,
  stechkin,
  sparsify_lq,
  sparsify_linf,
  besov,
};

inline const char* mode_name(Mode m) {
  switch (m) {
    case Mode::nikolskij: return "nikolskij";
    case Mode::bernstein: return "bernstein";
    case Mode::moments: return "moments";
    case Mode::stechkin: return "stechkin";
    case Mode::sparsify_lq: return "sparsify-lq";
    case Mode::sparsify_linf: return "sparsify-linf";
    case Mode::besov: return "besov";
  }
  return "?";
}

inline Mode mode_from_name(const std::string& s) {
  for (Mode m : {Mode::nikolskij, Mode::bernstein, Mode::moments, Mode::stechkin,
                 Mode::sparsify_lq, Mode::sparsify_linf, Mode::besov})
    if (s == mode_name(m)) return m;
  throw std::invalid_argument("unknown mode: " + s);
}

struct ExperimentConfig {
  Mode mode = Mode::nikolskij;
  std::vector<int> dims{1};
  std::vector<std::uint64_t> m_values{1};
  std::vector<double> q_values{2};
  std::vector<double> theta_values{1};
  std::vector<double> p_values{4};
  std::vector<int> n_values{1};
  std::uint64_t trials = 20;
  std::uint64_t seed = 1;
  int oversample = 0;       // 0 = per-mode automatic choice
  int max_attempts = 100;
  std::uint64_t support_size = 200;
  int box_radius = 0;       // 0 = smallest box holding support_size points
  double decay = 0;
  int workers = 1;
  std::string out;
  bool timing = false;
  std::size_t grid_cap = kDefaultGridCap;
  // bernstein mode
  std::uint64_t mc_trials = 100000;
  double bernoulli_prob = 0.25;
  std::vector<double> s_sigmas{0.674, 1.282, 1.960, 2.576, 3.290, 3.890};
  // moments mode
  std::vector<double> beta_values{1, 4};
  std::vector<double> sigma_values{0, 1, 2};
  std::vector<double> b_values{0, 1};
  std::vector<double> p_moments{1, 2, 4, 8};
  std::size_t quad_points = 10000;
  // besov mode
  int max_level_sum = 0;    // 0 = 7 for d = 1, 4 for d >= 2
  int terms_per_block = 3;
};

struct ExperimentRecord {
  std::string mode;
  int d = 1;
  std::uint64_t m = 0;
  double q = 0;
  double theta = 0;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  double measured = 0;
  double bound = 0;
  double ratio = 0;
  bool accepted = false;
  int attempts = 0;
  double wall_ms = 0;     // real measurement, regardless of the timing flag
  bool asserted = false;  // counts toward the exit code
  bool violation = false;
};

struct RunResult {
  std::vector<ExperimentRecord> records;
  std::size_t violations = 0;
};

// per-trial stream derivation: splitmix-style mixing of the cell tuple, so
// any scheduling of the work reproduces the same draws
inline std::uint64_t trial_seed(std::uint64_t seed, Mode mode, int d,
                                std::uint64_t m, double q, double theta,
                                std::uint64_t trial) {
  std::uint64_t h = rng::hash_combine(seed, static_cast<std::uint64_t>(mode));
  h = rng::hash_combine(h, static_cast<std::uint64_t>(d));
  h = rng::hash_combine(h, m);
  h = rng::hash_combine(h, std::bit_cast<std::uint64_t>(q));
  h = rng::hash_combine(h, std::bit_cast<std::uint64_t>(theta));
  return rng::hash_combine(h, trial);
}

// ---------------------------------------------------------------------------
// random unit-sphere test functions

// J distinct uniform frequencies in [-N, N]^d, moduli j^{-decay} in draw
// order, uniform phases, rescaled so the theta-quasi-norm is exactly 1
inline SparseSpectrum random_a_theta_ball(double theta, int d, std::uint64_t J,
                                          int n_box, double decay,
                                          std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("random_a_theta_ball: d must be >= 1");
  if (n_box < 0) throw std::invalid_argument("random_a_theta_ball: N < 0");
  if (J < 1) throw std::invalid_argument("random_a_theta_ball: J must be >= 1");
  const Cuboid box = Cuboid::symmetric(d, n_box);
  if (J > box.cardinality())
    throw std::invalid_argument("random_a_theta_ball: J exceeds box size");

  rng::SplitMix64 g(seed);
  const std::uint64_t side = 2 * static_cast<std::uint64_t>(n_box) + 1;
  std::set<Frequency> seen;
  std::vector<Frequency> order;
  while (order.size() < J) {
    std::vector<int> k(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
      k[static_cast<std::size_t>(i)] =
          static_cast<int>(g.below(side)) - n_box;
    Frequency f(std::move(k));
    if (seen.insert(f).second) order.push_back(std::move(f));
  }
  SparseSpectrum t(d);
  for (std::uint64_t j = 0; j < J; ++j) {
    const double mod = std::pow(static_cast<double>(j + 1), -decay);
    t.set(order[j], std::polar(mod, 2.0 * std::numbers::pi * g.uniform01()));
  }
  return t * cplx(1.0 / a_theta_norm(t, theta), 0.0);
}

// ---------------------------------------------------------------------------
// mode sweeps

namespace detail {

inline int auto_box_radius(const ExperimentConfig& cfg, int d,
                           std::uint64_t want) {
  if (cfg.box_radius > 0) return cfg.box_radius;
  int r = 1;
  while (Cuboid::symmetric(d, r).cardinality() < want) ++r;
  return std::max(r, 8);
}

inline int auto_oversample(const ExperimentConfig& cfg, int d) {
  if (cfg.oversample > 0) return cfg.oversample;
  if (d <= 1) return 16;
  if (d == 2) return 8;
  return 4;
}

inline int auto_level_sum(const ExperimentConfig& cfg, int d) {
  if (cfg.max_level_sum > 0) return cfg.max_level_sum;
  return d == 1 ? 7 : 4;
}

inline double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

using Task = std::function<std::vector<ExperimentRecord>()>;

inline std::vector<ExperimentRecord> execute_tasks(std::vector<Task>& tasks,
                                                   int workers) {
  std::vector<std::vector<ExperimentRecord>> slots(tasks.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) slots[i] = tasks[i]();
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mu;
    auto body = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) return;
        try {
          slots[i] = tasks[i]();
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (std::thread& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }
  std::vector<ExperimentRecord> out;
  for (std::vector<ExperimentRecord>& s : slots)
    for (ExperimentRecord& r : s) out.push_back(std::move(r));
  return out;
}

inline void finish_record(ExperimentRecord& r) {
  r.ratio = (r.bound > 0) ? r.measured / r.bound
                          : (r.measured > 0 ? kInf : 0.0);
}

}  // namespace detail

inline RunResult run(const ExperimentConfig& cfg) {
  if (cfg.dims.empty() || cfg.m_values.empty() || cfg.q_values.empty() ||
      cfg.theta_values.empty())
    throw std::invalid_argument("run: parameter lists must be nonempty");
  std::vector<detail::Task> tasks;
  const std::uint64_t seed = cfg.seed;

  auto record_base = [&](Mode mode, int d, std::uint64_t m, double q,
                         double theta, std::uint64_t trial) {
    ExperimentRecord r;
    r.mode = mode_name(mode);
    r.d = d;
    r.m = m;
    r.q = q;
    r.theta = theta;
    r.seed = seed;
    r.trial = trial;
    return r;
  };

  switch (cfg.mode) {
    case Mode::nikolskij: {
      for (int d : cfg.dims)
        for (int nj : cfg.n_values)
          for (double q : cfg.q_values)
            for (std::uint64_t tr = 0; tr < cfg.trials; ++tr)
              tasks.push_back([=, &cfg] {
                const double t0 = detail::now_ms();
                const Cuboid box = Cuboid::symmetric(d, nj);
                const std::uint64_t J =
                    std::min<std::uint64_t>(cfg.support_size, box.cardinality());
                const std::uint64_t s =
                    trial_seed(seed, Mode::nikolskij, d, J, q,
                               static_cast<double>(nj), tr);
                const SparseSpectrum t =
                    random_a_theta_ball(1.0, d, J, nj, cfg.decay, s);
                const NikolskijCheck c = verify_nikolskij(
                    t, q, detail::auto_oversample(cfg, d), cfg.grid_cap);
                ExperimentRecord r = record_base(Mode::nikolskij, d, J, q,
                                                 static_cast<double>(nj), tr);
                r.measured = c.ratio;
                r.bound = c.bound;
                r.accepted = c.ok;
                r.asserted = true;
                r.violation = !c.ok;
                r.wall_ms = detail::now_ms() - t0;
                detail::finish_record(r);
                return std::vector<ExperimentRecord>{r};
              });
      break;
    }

    case Mode::bernstein: {
      std::vector<SummandSpec> kinds;
      kinds.push_back({SummandKind::two_point, 1.0, 0.5, 0.0});
      kinds.push_back(
          {SummandKind::centered_bernoulli, 1.0, cfg.bernoulli_prob, 0.0});
      kinds.push_back({SummandKind::uniform, 1.0, 0.5, 0.0});
      kinds.push_back({SummandKind::centered_bernoulli, 1.0, cfg.bernoulli_prob,
                       std::numbers::pi / 4.0});
      for (std::size_t spec_idx = 0; spec_idx < kinds.size(); ++spec_idx)
        for (std::uint64_t J : cfg.m_values)
          tasks.push_back([=, &cfg] {
            const double t0 = detail::now_ms();
            const SummandSpec sp = kinds[spec_idx];
            double sigma2 = sp.variance() * static_cast<double>(J);
            std::vector<double> s_grid;
            for (double c : cfg.s_sigmas) s_grid.push_back(c * std::sqrt(sigma2));
            const std::uint64_t s0 =
                trial_seed(seed, Mode::bernstein, 1, J,
                           static_cast<double>(spec_idx), 0.0, 0);
            const std::vector<SummandSpec> specs(J, sp);
            const std::vector<BernsteinPoint> pts =
                mc_verify_bernstein(specs, s_grid, cfg.mc_trials, s0);
            const double ms = detail::now_ms() - t0;
            std::vector<ExperimentRecord> out;
            for (std::size_t i = 0; i < pts.size(); ++i) {
              ExperimentRecord r =
                  record_base(Mode::bernstein, 1, J,
                              static_cast<double>(spec_idx), pts[i].s, i);
              r.measured = pts[i].empirical;
              r.bound = pts[i].bound;
              r.accepted = pts[i].ok;
              r.asserted = true;
              r.violation = !pts[i].ok;
              r.wall_ms = ms;
              detail::finish_record(r);
              out.push_back(std::move(r));
            }
            return out;
          });
      break;
    }

    case Mode::moments: {
      for (double p : cfg.p_moments)
        for (double beta : cfg.beta_values) {
          std::uint64_t flat = 0;
          for (double sigma : cfg.sigma_values)
            for (double bb : cfg.b_values) {
              const std::uint64_t idx = flat++;
              tasks.push_back([=, &cfg] {
                const double t0 = detail::now_ms();
                const TailParams tp{sigma * sigma, bb, beta};
                const MomentCheck c = mc_verify_moment(tp, p, cfg.quad_points);
                ExperimentRecord r =
                    record_base(Mode::moments, 1, idx, p, beta, 0);
                r.measured = c.numeric_moment;
                r.bound = c.bound;
                r.accepted = c.ok;
                r.asserted = true;
                r.violation = !c.ok;
                r.wall_ms = detail::now_ms() - t0;
                detail::finish_record(r);
                return std::vector<ExperimentRecord>{r};
              });
            }
        }
      break;
    }

    case Mode::stechkin: {
      for (int d : cfg.dims)
        for (double theta : cfg.theta_values)
          for (double gamma : cfg.q_values) {
            if (!(gamma > theta)) continue;  // the tail bound needs theta < gamma
            for (std::uint64_t m : cfg.m_values)
              for (std::uint64_t tr = 0; tr < cfg.trials; ++tr)
                tasks.push_back([=, &cfg] {
                  const double t0 = detail::now_ms();
                  const int radius =
                      detail::auto_box_radius(cfg, d, cfg.support_size);
                  const std::uint64_t J = std::min<std::uint64_t>(
                      cfg.support_size, Cuboid::symmetric(d, radius).cardinality());
                  const std::uint64_t s =
                      trial_seed(seed, Mode::stechkin, d, m, gamma, theta, tr);
                  const SparseSpectrum t =
                      random_a_theta_ball(theta, d, J, radius, cfg.decay, s);
                  ExperimentRecord r =
                      record_base(Mode::stechkin, d, m, gamma, theta, tr);
                  r.measured = tail_gamma_norm(t, m, gamma);
                  r.bound = stechkin_bound(m, theta, gamma, 1.0);
                  r.asserted = true;
                  r.violation = r.measured > r.bound + 1e-12;
                  r.accepted = !r.violation;
                  r.wall_ms = detail::now_ms() - t0;
                  detail::finish_record(r);
                  return std::vector<ExperimentRecord>{r};
                });
              }
      break;
    }

    case Mode::sparsify_lq: {
      for (int d : cfg.dims)
        for (double theta : cfg.theta_values)
          for (double q : cfg.q_values)
            for (std::uint64_t m : cfg.m_values)
              for (std::uint64_t tr = 0; tr < cfg.trials; ++tr)
                tasks.push_back([=, &cfg] {
                  const double t0 = detail::now_ms();
                  const int radius =
                      detail::auto_box_radius(cfg, d, cfg.support_size);
                  const std::uint64_t J = std::min<std::uint64_t>(
                      cfg.support_size, Cuboid::symmetric(d, radius).cardinality());
                  const std::uint64_t s =
                      trial_seed(seed, Mode::sparsify_lq, d, m, q, theta, tr);
                  const SparseSpectrum t =
                      random_a_theta_ball(theta, d, J, radius, cfg.decay, s);
                  SparsifyConfig sc;
                  sc.m = m;
                  sc.q = q;
                  sc.max_attempts = cfg.max_attempts;
                  sc.oversample = detail::auto_oversample(cfg, d);
                  sc.seed = s;
                  sc.grid_cap = cfg.grid_cap;
                  const SparsifyResult res = sparsify_lq(t, sc, theta);
                  ExperimentRecord r =
                      record_base(Mode::sparsify_lq, d, m, q, theta, tr);
                  r.measured = res.measured_error.value;
                  r.bound = res.theorem_bound;
                  r.accepted = res.accepted;
                  r.attempts = res.attempts_used;
                  // the guarantee is stated for m >= q; smaller m is
                  // reported but not asserted
                  r.asserted = res.m_ge_q;
                  const double tol =
                      1e-9 + res.measured_error.est_rel_error;
                  const bool size_ok = res.approximant.size() <= 4 * m;
                  r.violation = r.asserted &&
                                (!size_ok || r.measured > r.bound * (1.0 + tol));
                  r.wall_ms = detail::now_ms() - t0;
                  detail::finish_record(r);
                  return std::vector<ExperimentRecord>{r};
                });
      break;
    }

    case Mode::sparsify_linf: {
      for (int d : cfg.dims)
        for (double theta : cfg.theta_values)
          for (std::uint64_t m : cfg.m_values)
            for (std::uint64_t tr = 0; tr < cfg.trials; ++tr)
              tasks.push_back([=, &cfg] {
                const double t0 = detail::now_ms();
                const int radius = (cfg.box_radius > 0) ? cfg.box_radius : 8;
                const Cuboid box = Cuboid::symmetric(d, radius);
                const std::uint64_t J =
                    std::min<std::uint64_t>(cfg.support_size, box.cardinality());
                const std::uint64_t s =
                    trial_seed(seed, Mode::sparsify_linf, d, m, 0.0, theta, tr);
                const SparseSpectrum t =
                    random_a_theta_ball(theta, d, J, radius, cfg.decay, s);
                SparsifyConfig sc;
                sc.max_attempts = cfg.max_attempts;
                sc.oversample =
                    (cfg.oversample > 0) ? cfg.oversample : 16;
                sc.seed = s;
                sc.grid_cap = cfg.grid_cap;
                const SparsifyResult res = sparsify_linf(t, box, m, theta, sc);
                ExperimentRecord r = record_base(Mode::sparsify_linf, d, m,
                                                 res.q_used, theta, tr);
                r.measured = res.measured_error.value;
                r.bound = res.theorem_bound;
                r.accepted = res.accepted;
                r.attempts = res.attempts_used;
                r.asserted = true;
                r.violation = r.measured > r.bound * (1.0 + 1e-9);
                r.wall_ms = detail::now_ms() - t0;
                detail::finish_record(r);
                return std::vector<ExperimentRecord>{r};
              });
      break;
    }

    case Mode::besov: {
      for (int d : cfg.dims)
        for (double p : cfg.p_values)
          for (double theta : cfg.theta_values)
            for (std::uint64_t m : cfg.m_values)
              for (std::uint64_t tr = 0; tr < cfg.trials; ++tr)
                tasks.push_back([=, &cfg] {
                  const double t0 = detail::now_ms();
                  BesovParams prm;
                  prm.p = p;
                  prm.theta = theta;
                  prm.r = 1.0 / theta - 0.5;
                  const std::uint64_t s =
                      trial_seed(seed, Mode::besov, d, m, p, theta, tr);
                  const SparseSpectrum f = random_besov_ball(
                      prm, d, detail::auto_level_sum(cfg, d),
                      cfg.terms_per_block, s, cfg.decay);
                  const int n_cube = choose_N(prm, d, m);
                  const SparseSpectrum g = project(f, n_cube);
                  const Cuboid box = Cuboid::symmetric(d, n_cube);
                  SparsifyConfig sc;
                  sc.max_attempts = cfg.max_attempts;
                  sc.oversample =
                      (cfg.oversample > 0) ? cfg.oversample : 16;
                  sc.seed = s;
                  sc.grid_cap = cfg.grid_cap;
                  const SparsifyResult res =
                      sparsify_linf(g, box, m, theta, sc);
                  const double tail =
                      projection_tail_bound(prm, d, n_cube, 1.0);
                  ExperimentRecord r =
                      record_base(Mode::besov, d, m, p, theta, tr);
                  r.measured = res.measured_error.value + tail;
                  r.bound = thm52_bound(prm, d, m);
                  r.accepted = res.accepted;
                  r.attempts = res.attempts_used;
                  r.asserted = true;
                  r.violation = r.measured > r.bound * (1.0 + 1e-9);
                  r.wall_ms = detail::now_ms() - t0;
                  detail::finish_record(r);
                  return std::vector<ExperimentRecord>{r};
                });
      break;
    }
  }

  RunResult out;
  out.records = detail::execute_tasks(tasks, cfg.workers);
  std::sort(out.records.begin(), out.records.end(),
            [](const ExperimentRecord& a, const ExperimentRecord& b) {
              return std::tie(a.mode, a.d, a.m, a.q, a.theta, a.trial) <
                     std::tie(b.mode, b.d, b.m, b.q, b.theta, b.trial);
            });
  for (const ExperimentRecord& r : out.records)
    if (r.violation) ++out.violations;
  return out;
}

// ---------------------------------------------------------------------------
// CSV output

inline constexpr const char* kCsvHeader =
    "mode,d,m,q,theta,seed,trial,measured,bound,ratio,accepted,attempts,wall_ms";

inline void write_csv(std::ostream& os,
                      const std::vector<ExperimentRecord>& records,
                      bool timing = false) {
  os << kCsvHeader << "\n";
  for (const ExperimentRecord& r : records) {
    os << r.mode << ',' << r.d << ',' << r.m << ','
       << detail::format_double(r.q) << ',' << detail::format_double(r.theta)
       << ',' << r.seed << ',' << r.trial << ','
       << detail::format_double(r.measured) << ','
       << detail::format_double(r.bound) << ','
       << detail::format_double(r.ratio) << ',' << (r.accepted ? 1 : 0) << ','
       << r.attempts << ','
       << detail::format_double(timing ? r.wall_ms : 0.0) << "\n";
  }
}

inline void write_csv_file(const std::string& path,
                           const std::vector<ExperimentRecord>& records,
                           bool timing = false) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  write_csv(os, records, timing);
}

// ---------------------------------------------------------------------------
// summaries

struct SummaryRow {
  std::string mode;
  int d = 1;
  double theta = 0;
  std::size_t count = 0;
  double max_ratio = 0;
  double mean_ratio = 0;
  double acceptance_rate = 0;
  double mean_attempts = 0;
};

inline std::vector<SummaryRow> summarize(
    const std::vector<ExperimentRecord>& records) {
  std::map<std::tuple<std::string, int, double>, SummaryRow> rows;
  for (const ExperimentRecord& r : records) {
    SummaryRow& s = rows[{r.mode, r.d, r.theta}];
    s.mode = r.mode;
    s.d = r.d;
    s.theta = r.theta;
    ++s.count;
    s.max_ratio = std::max(s.max_ratio, r.ratio);
    s.mean_ratio += r.ratio;
    s.acceptance_rate += r.accepted ? 1.0 : 0.0;
    s.mean_attempts += r.attempts;
  }
  std::vector<SummaryRow> out;
  for (auto& [key, s] : rows) {
    (void)key;
    s.mean_ratio /= static_cast<double>(s.count);
    s.acceptance_rate /= static_cast<double>(s.count);
    s.mean_attempts /= static_cast<double>(s.count);
    out.push_back(s);
  }
  return out;
}

inline void print_summary(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << "mode            d  theta    n     max_ratio  mean_ratio  accept  attempts\n";
  for (const SummaryRow& s : rows) {
    char line[160];
    std::snprintf(line, sizeof(line),
                  "%-15s %-2d %-8.4g %-5zu %-10.4g %-11.4g %-7.3f %-8.3f\n",
                  s.mode.c_str(), s.d, s.theta, s.count, s.max_ratio,
                  s.mean_ratio, s.acceptance_rate, s.mean_attempts);
    os << line;
  }
}

// ---------------------------------------------------------------------------
// configuration files: flat `key = value` text, `#` comments, comma lists

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

inline double parse_config_double(const std::string& tok, const std::string& key) {
  if (tok == "inf" || tok == "infinity") return kInf;
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config field " + key + ": bad number '" + tok + "'");
  }
}

inline std::uint64_t parse_config_u64(const std::string& tok,
                                      const std::string& key) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config field " + key + ": bad integer '" + tok +
                             "'");
  }
}

inline bool parse_config_bool(const std::string& tok, const std::string& key) {
  if (tok == "true" || tok == "1") return true;
  if (tok == "false" || tok == "0") return false;
  throw std::runtime_error("config field " + key + ": bad boolean '" + tok + "'");
}

}  // namespace detail

// criterion-grid defaults for each mode; an explicit config overrides them
inline ExperimentConfig default_config(Mode mode) {
  ExperimentConfig cfg;
  cfg.mode = mode;
  switch (mode) {
    case Mode::nikolskij:
      cfg.dims = {1, 2, 3};
      cfg.n_values = {1, 2, 4};
      cfg.q_values = {2, 4, 8};
      cfg.trials = 200;
      cfg.support_size = 200;
      break;
    case Mode::bernstein:
      cfg.dims = {1};
      cfg.m_values = {10, 100};
      cfg.trials = 1;
      break;
    case Mode::moments:
      cfg.dims = {1};
      cfg.trials = 1;
      break;
    case Mode::stechkin:
      cfg.dims = {1, 2};
      cfg.theta_values = {0.5, 1};
      cfg.q_values = {1, 2, kInf};
      cfg.m_values = {0, 1, 3, 7, 15};
      cfg.trials = 500;
      cfg.support_size = 200;
      break;
    case Mode::sparsify_lq:
      cfg.dims = {1, 2};
      cfg.theta_values = {0.5, 1};
      cfg.q_values = {2, 4};
      cfg.m_values = {4, 16, 64};
      cfg.trials = 20;
      cfg.support_size = 1000;
      break;
    case Mode::sparsify_linf:
      cfg.dims = {1, 2};
      cfg.theta_values = {0.5, 1};
      cfg.m_values = {4, 16};
      cfg.trials = 20;
      cfg.support_size = 200;
      cfg.box_radius = 8;
      break;
    case Mode::besov:
      cfg.dims = {1, 2};
      cfg.p_values = {4, 8};
      cfg.theta_values = {0.5, 1};
      cfg.m_values = {4, 16};
      cfg.trials = 20;
      break;
  }
  return cfg;
}

inline void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                               const std::string& value) {
  using detail::parse_config_bool;
  using detail::parse_config_double;
  using detail::parse_config_u64;
  auto doubles = [&](std::vector<double>& dst) {
    dst.clear();
    for (const std::string& tok : detail::split_list(value))
      dst.push_back(parse_config_double(tok, key));
    if (dst.empty()) throw std::runtime_error("config field " + key + ": empty list");
  };
  auto ints = [&](std::vector<int>& dst) {
    dst.clear();
    for (const std::string& tok : detail::split_list(value))
      dst.push_back(static_cast<int>(parse_config_u64(tok, key)));
    if (dst.empty()) throw std::runtime_error("config field " + key + ": empty list");
  };
  auto u64s = [&](std::vector<std::uint64_t>& dst) {
    dst.clear();
    for (const std::string& tok : detail::split_list(value))
      dst.push_back(parse_config_u64(tok, key));
    if (dst.empty()) throw std::runtime_error("config field " + key + ": empty list");
  };

  if (key == "mode") cfg.mode = mode_from_name(value);
  else if (key == "dims") ints(cfg.dims);
  else if (key == "m_values") u64s(cfg.m_values);
  else if (key == "q_values") doubles(cfg.q_values);
  else if (key == "theta_values") doubles(cfg.theta_values);
  else if (key == "p_values") doubles(cfg.p_values);
  else if (key == "n_values") ints(cfg.n_values);
  else if (key == "trials") cfg.trials = parse_config_u64(value, key);
  else if (key == "seed") cfg.seed = parse_config_u64(value, key);
  else if (key == "oversample") cfg.oversample = static_cast<int>(parse_config_u64(value, key));
  else if (key == "max_attempts") cfg.max_attempts = static_cast<int>(parse_config_u64(value, key));
  else if (key == "support_size") cfg.support_size = parse_config_u64(value, key);
  else if (key == "box_radius") cfg.box_radius = static_cast<int>(parse_config_u64(value, key));
  else if (key == "decay") cfg.decay = parse_config_double(value, key);
  else if (key == "workers") cfg.workers = static_cast<int>(parse_config_u64(value, key));
  else if (key == "out") cfg.out = value;
  else if (key == "timing") cfg.timing = parse_config_bool(value, key);
  else if (key == "grid_cap") cfg.grid_cap = parse_config_u64(value, key);
  else if (key == "mc_trials") cfg.mc_trials = parse_config_u64(value, key);
  else if (key == "bernoulli_prob") cfg.bernoulli_prob = parse_config_double(value, key);
  else if (key == "s_sigmas") doubles(cfg.s_sigmas);
  else if (key == "beta_values") doubles(cfg.beta_values);
  else if (key == "sigma_values") doubles(cfg.sigma_values);
  else if (key == "b_values") doubles(cfg.b_values);
  else if (key == "p_moments") doubles(cfg.p_moments);
  else if (key == "quad_points") cfg.quad_points = parse_config_u64(value, key);
  else if (key == "max_level_sum") cfg.max_level_sum = static_cast<int>(parse_config_u64(value, key));
  else if (key == "terms_per_block") cfg.terms_per_block = static_cast<int>(parse_config_u64(value, key));
  else throw std::runtime_error("unknown config field: " + key);
}

inline ExperimentConfig parse_config(std::istream& in,
                                     const ExperimentConfig& base) {
  ExperimentConfig cfg = base;
  std::string line;
  int line_no = 0;
  bool mode_set = false;
  std::vector<std::pair<std::string, std::string>> entries;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t h = line.find('#');
    if (h != std::string::npos) line.resize(h);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key == "mode") {
      cfg = default_config(mode_from_name(value));
      mode_set = true;
    }
    entries.emplace_back(key, value);
  }
  (void)mode_set;
  // the mode picks the grid defaults first; every other key then overrides
  for (const auto& [key, value] : entries)
    if (key != "mode") apply_config_entry(cfg, key, value);
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path,
                                    const ExperimentConfig& base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_config(in, base);
}

}  // namespace sparsetrig
