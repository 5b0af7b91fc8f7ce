#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sparsetrig/sparsetrig.hpp"

namespace {

using namespace sparsetrig;

// the tracked constants, re-derived at startup so a bad build dies loudly
bool constants_ok(std::ostream& err) {
  bool ok = true;
  if (!(kTheoremC < 27.0)) {
    err << "constant check failed: theorem constant " << kTheoremC << " >= 27\n";
    ok = false;
  }
  if (!(linf_c1() < 460.0)) {
    err << "constant check failed: sup-norm constant " << linf_c1()
        << " >= 460\n";
    ok = false;
  }
  if (!(thm52_c2() < 468.0)) {
    err << "constant check failed: mixed-smoothness constant " << thm52_c2()
        << " >= 468\n";
    ok = false;
  }
  return ok;
}

struct CommonOpts {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 0;
  std::uint64_t trials = 0;
  bool timing = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config, "config file (key = value lines)");
  cmd->add_option("--out", o.out, "CSV output path (default: CSV on stdout)");
  cmd->add_option("--seed", o.seed, "master seed")->each([&](const std::string&) {
    o.seed_set = true;
  });
  cmd->add_option("--workers", o.workers, "worker thread count");
  cmd->add_option("--trials", o.trials, "trials per grid cell");
  cmd->add_flag("--timing", o.timing,
                "write real wall_ms values (breaks byte-identical reruns)");
}

int run_sweep(Mode mode, const CommonOpts& o) {
  ExperimentConfig cfg = default_config(mode);
  if (!o.config.empty()) cfg = load_config(o.config, cfg);
  if (cfg.mode != mode)
    throw std::runtime_error("config mode does not match the subcommand");
  if (o.seed_set) cfg.seed = o.seed;
  if (o.workers > 0) cfg.workers = o.workers;
  if (o.trials > 0) cfg.trials = o.trials;
  if (o.timing) cfg.timing = true;
  if (!o.out.empty()) cfg.out = o.out;

  const RunResult rr = run(cfg);
  if (!cfg.out.empty()) {
    write_csv_file(cfg.out, rr.records, cfg.timing);
    print_summary(std::cout, summarize(rr.records));
    std::cout << "records: " << rr.records.size()
              << "  violations: " << rr.violations << "\n";
  } else {
    write_csv(std::cout, rr.records, cfg.timing);
    print_summary(std::cerr, summarize(rr.records));
    std::cerr << "records: " << rr.records.size()
              << "  violations: " << rr.violations << "\n";
  }
  return rr.violations == 0 ? 0 : 1;
}

struct SingleShotOpts {
  std::string spectrum;
  std::string out_spectrum;
  std::uint64_t m = 8;
  double q = 2;
  double theta = 1;
  std::uint64_t seed = 0;
  int max_attempts = 100;
  int oversample = 16;
};

int run_single_shot(const SingleShotOpts& o) {
  const SparseSpectrum t = load_spectrum(o.spectrum);
  SparsifyConfig sc;
  sc.m = o.m;
  sc.q = o.q;
  sc.max_attempts = o.max_attempts;
  sc.oversample = o.oversample;
  sc.seed = o.seed;
  const SparsifyResult res = sparsify_lq(t, sc, o.theta);
  std::cout << "accepted = " << (res.accepted ? 1 : 0) << "\n"
            << "attempts = " << res.attempts_used << "\n"
            << "support = " << res.approximant.size() << "\n"
            << "sampled = " << res.sampled_count << "\n"
            << "measured_error = " << detail::format_double(res.measured_error.value)
            << "\n"
            << "est_rel_error = "
            << detail::format_double(res.measured_error.est_rel_error) << "\n"
            << "expectation_bound = "
            << detail::format_double(res.expectation_bound) << "\n"
            << "acceptance_bound = "
            << detail::format_double(res.acceptance_bound) << "\n"
            << "theorem_bound = " << detail::format_double(res.theorem_bound)
            << "\n"
            << "q_used = " << detail::format_double(res.q_used) << "\n"
            << "m_ge_q = " << (res.m_ge_q ? 1 : 0) << "\n";
  if (!o.out_spectrum.empty()) save_spectrum(o.out_spectrum, res.approximant);
  return 0;
}

void print_constants_table(std::ostream& os) {
  os << "name,value,limit\n";
  os << "theorem_c," << detail::format_double(kTheoremC) << ",27\n";
  os << "linf_c1," << detail::format_double(linf_c1()) << ",460\n";
  os << "thm52_c2," << detail::format_double(thm52_c2()) << ",468\n";
}

void print_besov_table(std::ostream& os, const std::vector<double>& ps,
                       const std::vector<double>& thetas,
                       const std::vector<int>& ds,
                       const std::vector<std::uint64_t>& ms) {
  os << "p,theta,d,m,thm52_bound,cor53_bound,cor53_index\n";
  for (double p : ps)
    for (double theta : thetas)
      for (int d : ds)
        for (std::uint64_t m : ms) {
          BesovParams prm;
          prm.p = p;
          prm.theta = theta;
          prm.r = 1.0 / theta - 0.5;
          if (!prm.admissible_for_thm52()) continue;
          if (!(1.0 / theta - 0.5 - 1.0 / p > 0)) continue;
          if (static_cast<double>(d) * static_cast<double>(m) < 2.0) continue;
          os << detail::format_double(p) << ',' << detail::format_double(theta)
             << ',' << d << ',' << m << ','
             << detail::format_double(thm52_bound(prm, d, m)) << ','
             << detail::format_double(cor53_bound(prm, d, m)) << ','
             << cor53_index_map(d, m) << "\n";
        }
}

}  // namespace

int main(int argc, char** argv) {
  if (!constants_ok(std::cerr)) return 2;

  CLI::App app{"sparse trigonometric approximation toolkit"};
  app.require_subcommand(1);

  CommonOpts nik, bern, mom, stech, slq, slinf, bes;
  CLI::App* c_nik = app.add_subcommand(
      "verify-nikolskij", "sup-norm vs L_q comparison sweep");
  add_common(c_nik, nik);
  CLI::App* c_bern = app.add_subcommand(
      "verify-bernstein", "Monte-Carlo concentration-tail sweep");
  add_common(c_bern, bern);
  CLI::App* c_mom = app.add_subcommand(
      "verify-moments", "tail-to-moment transfer check grid");
  add_common(c_mom, mom);
  CLI::App* c_stech = app.add_subcommand(
      "verify-stechkin", "coefficient-tail bound sweep");
  add_common(c_stech, stech);

  CLI::App* c_slq =
      app.add_subcommand("sparsify", "randomized m-term L_q sparsifier");
  add_common(c_slq, slq);
  SingleShotOpts shot;
  c_slq->add_option("--spectrum", shot.spectrum,
                    "spectrum file: run one sparsification instead of a sweep");
  c_slq->add_option("--out-spectrum", shot.out_spectrum,
                    "write the approximant spectrum here (single-shot only)");
  c_slq->add_option("--m", shot.m, "term budget (single-shot only)");
  c_slq->add_option("--q", shot.q, "error norm exponent (single-shot only)");
  c_slq->add_option("--theta", shot.theta, "coefficient class exponent");
  c_slq->add_option("--max-attempts", shot.max_attempts, "resampling budget");
  c_slq->add_option("--oversample", shot.oversample, "grid oversampling");

  CLI::App* c_slinf = app.add_subcommand(
      "sparsify-linf", "sup-norm sparsifier sweep over a frequency box");
  add_common(c_slinf, slinf);
  CLI::App* c_bes = app.add_subcommand(
      "besov-experiment", "projection + sparsifier rate sweep");
  add_common(c_bes, bes);

  CLI::App* c_bounds =
      app.add_subcommand("bounds", "print bound tables as CSV");
  std::string which = "constants";
  c_bounds->add_option("table", which, "constants | besov");
  std::vector<double> tbl_p{4, 8};
  std::vector<double> tbl_theta{0.5, 1};
  std::vector<int> tbl_d{1, 2};
  std::vector<std::uint64_t> tbl_m{4, 16, 64, 256};
  c_bounds->add_option("--p", tbl_p, "p values");
  c_bounds->add_option("--theta", tbl_theta, "theta values");
  c_bounds->add_option("--d", tbl_d, "dimensions");
  c_bounds->add_option("--m", tbl_m, "budgets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_nik->parsed()) return run_sweep(Mode::nikolskij, nik);
    if (c_bern->parsed()) return run_sweep(Mode::bernstein, bern);
    if (c_mom->parsed()) return run_sweep(Mode::moments, mom);
    if (c_stech->parsed()) return run_sweep(Mode::stechkin, stech);
    if (c_slq->parsed()) {
      if (!shot.spectrum.empty()) {
        if (slq.seed_set) shot.seed = slq.seed;
        return run_single_shot(shot);
      }
      return run_sweep(Mode::sparsify_lq, slq);
    }
    if (c_slinf->parsed()) return run_sweep(Mode::sparsify_linf, slinf);
    if (c_bes->parsed()) return run_sweep(Mode::besov, bes);
    if (c_bounds->parsed()) {
      if (which == "constants")
        print_constants_table(std::cout);
      else if (which == "besov")
        print_besov_table(std::cout, tbl_p, tbl_theta, tbl_d, tbl_m);
      else
        throw std::runtime_error("unknown bounds table: " + which);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
