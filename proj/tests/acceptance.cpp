// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.
// Usage: acceptance [criterion numbers...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pacbayes/anytime.hpp"
#include "pacbayes/bounded.hpp"
#include "pacbayes/general.hpp"
#include "pacbayes/lab.hpp"
#include "pacbayes/specfun.hpp"
#include "pacbayes/tails.hpp"

using namespace pacbayes;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double e = std::numbers::e;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  std::set<std::string> seen;

  void require(bool ok, const std::string& what) {
    if (!ok && seen.insert(what).second) {
      if (pass) detail << "failed: ";
      else detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

unsigned cores() { return std::max(1u, std::thread::hardware_concurrency()); }

// Random contexts: r in [0,1], kl in [0, 3n], n in {10..1e4}, beta in {0.5, 0.05, 0.001}.
std::vector<BoundContext> random_grid() {
  static const std::uint64_t ns[] = {10, 100, 1000, 10000};
  static const double betas[] = {0.5, 0.05, 0.001};
  std::mt19937_64 rng(20240101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<BoundContext> out;
  for (int i = 0; i < 1000; ++i) {
    const auto n = ns[rng() % 4];
    const double beta = betas[rng() % 3];
    const double kl = 3.0 * static_cast<double>(n) * u(rng);
    out.push_back(BoundContext::with_beta(n, beta, kl, u(rng)));
  }
  return out;
}

double unclamped(const Certificate& c) { return c.params.count("unclamped") ? c.params.at("unclamped") : c.value; }

void criterion_1(Outcome& o) {
  const auto t0 = Clock::now();
  double worst_cu = 0.0, worst_fs = 0.0;
  for (const auto& ctx : random_grid()) {
    const double sl = seeger_langford(ctx).value;
    worst_cu = std::max(worst_cu, std::abs(sl - catoni_uniform(ctx).value));
    worst_fs = std::max(worst_fs, std::abs(sl - fast_rate_strong(ctx).value));
  }
  const double secs = seconds_since(t0);
  o.require(worst_cu <= 1e-5, "seeger vs catoni-uniform");
  o.require(worst_fs <= 1e-5, "seeger vs fast-rate-strong");
  o.require(secs < 60.0, "runtime");
  o.detail << " max|sl-cu|=" << worst_cu << " max|sl-frs|=" << worst_fs << " time=" << secs << "s";
}

void criterion_2(Outcome& o) {
  std::vector<std::pair<double, double>> grid;
  for (int i = 0; i < 100; ++i)
    for (int j = 0; j < 100; ++j) grid.emplace_back(i / 99.0, 2.0 * j / 99.0);
  const auto rep = dominance_check(grid, 1e-12);
  o.require(rep.violations == 0, "f_fr or f_mr exceeds f_th");
  double worst_mr = -INFINITY, worst_sl = -INFINITY;
  for (const auto& ctx : random_grid()) {
    worst_mr = std::max(worst_mr, unclamped(mixed_rate(ctx)) - unclamped(rivasplata(ctx)));
    worst_sl = std::max(worst_sl, seeger_langford(ctx).value - mcallester(ctx).value);
  }
  o.require(worst_mr <= 1e-12, "mixed-rate exceeds rivasplata");
  o.require(worst_sl <= 1e-12, "seeger-langford exceeds mcallester");
  o.detail << " grid=" << rep.points << " max(f_fr-f_th)=" << rep.max_violation_fast
           << " max(f_mr-f_th)=" << rep.max_violation_mixed << " max(mr-rv)=" << worst_mr
           << " max(sl-mc)=" << worst_sl;
}

void criterion_3(Outcome& o) {
  double worst_fr = 0.0, worst_rv = 0.0;
  for (auto ctx : random_grid()) {
    ctx.emp_risk = 0.0;
    const double c = budget_xi(ctx);
    worst_fr = std::max(worst_fr, std::abs(unclamped(fast_rate_simple(ctx)) - c));
    worst_rv = std::max(worst_rv, std::abs(unclamped(rivasplata(ctx)) - 2.0 * c));
  }
  o.require(worst_fr <= 1e-6, "fast-rate-simple at zero empirical risk");
  o.require(worst_rv <= 1e-12, "rivasplata at zero empirical risk");
  o.detail << " max|fr-C|=" << worst_fr << " max|rv-2C|=" << worst_rv
           << " (fast rate keeps factor 1 on C, rivasplata pays factor 2)";
}

void criterion_4(Outcome& o) {
  // objective(r, budget) is affine in both; coefficients read off at unit points
  auto fr = [](double r, double b) { return fast_rate_objective(r, b, 1.0, 2.0); };
  auto th = [](double r, double b) { return thiemann_objective(r, b, 1.0); };
  const double fr_emp = fr(1.0, 0.0) - fr(0.0, 0.0);
  const double fr_conf = fr(0.0, 1.0) - fr(0.0, 0.0);
  const double th_conf = th(0.0, 1.0) - th(0.0, 0.0);
  const double th_emp = th(1.0, 0.0) - th(0.0, 0.0);
  o.require(fr(0.0, 0.0) == 0.0, "fast-rate intercept");
  o.require(std::abs(fr_emp - 2.0 * std::log(2.0)) <= 1e-15, "empirical coefficient 2 ln 2");
  o.require(fr_conf == 2.0, "confidence coefficient 2");
  o.require(fr_conf == th_conf, "thiemann confidence coefficient");
  o.require(std::abs(fr(0.3, 0.7) - (fr_emp * 0.3 + fr_conf * 0.7)) <= 1e-15, "affinity");
  o.detail << " fast-rate(gamma=2): emp=" << fr_emp << " conf=" << fr_conf << "; thiemann(lambda=1): emp=" << th_emp
           << " conf=" << th_conf;
}

void criterion_5(Outcome& o) {
  std::set<BoundId> covered;
  double worst_ratio = 0.0, slowest = 0.0;
  std::string worst_name;
  int problems = 0;
  for (const auto& preset : presets()) {
    ++problems;
    for (double beta : {0.05, 0.2}) {
      CoverageConfig cfg;
      cfg.n = preset.n;
      cfg.beta = beta;
      cfg.trials = 10000;
      cfg.master_seed = 77;
      cfg.threads = cores();
      const auto specs = default_specs(preset.problem, preset.n, beta);
      for (const auto& s : specs) covered.insert(s.id);
      const auto t0 = Clock::now();
      const auto reports = coverage_suite(preset.problem, preset.rule, specs, cfg);
      // the suite shares trials, so its wall time bounds every member's
      slowest = std::max(slowest, seconds_since(t0));
      for (const auto& r : reports) {
        if (r.ci_hi / beta > worst_ratio) {
          worst_ratio = r.ci_hi / beta;
          worst_name = preset.problem.name + "/" + r.bound + "@" + std::to_string(beta).substr(0, 4);
        }
        o.require(r.ci_hi <= beta, preset.problem.name + "/" + r.bound + " at beta " + std::to_string(beta) +
                                        " (" + std::to_string(r.violations) + " violations)");
      }
    }
  }
  o.require(problems >= 6, "fewer than six presets");
  o.require(covered.size() == all_bounds().size(), "some bound has no preset");
  o.require(slowest <= 120.0, "runtime");
  o.detail << " problems=" << problems << " bounds=" << covered.size() << " worst ci_hi/beta=" << worst_ratio << " ("
           << worst_name << ") slowest suite=" << slowest << "s";

  // negative control, reported only
  const auto half = *find_preset("bernoulli-half");
  std::uint64_t bad = 0;
  const std::uint64_t trials = 10000;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto s = draw_dataset(half.problem, half.n, trial_seed(77, t));
    const auto q = exact_quantities(half.problem, s, posterior_for(half.problem, s, half.rule));
    if (q.pop_risk > data_dependent_catoni(BoundContext::with_beta(half.n, 0.05, q.kl, q.emp_risk)).value) ++bad;
  }
  o.detail << "; data-dependent-lambda catoni negative control violation rate=" << static_cast<double>(bad) / trials << " at beta 0.05";
}

// inf over lambda of (y + psi(lambda)) / lambda on a dense log grid
double grid_inf(const TailFamily& family, double y) {
  const double b = domain_end(family);
  const double lo = 1e-6, hi = std::isinf(b) ? 1e6 : b * (1.0 - 1e-12);
  const int points = 1000000;
  double best = INFINITY;
  for (int i = 0; i < points; ++i) {
    const double l = lo * std::pow(hi / lo, i / (points - 1.0));
    best = std::min(best, (y + psi(family, l)) / l);
  }
  return best;
}

void criterion_6(Outcome& o) {
  double worst = 0.0;
  const std::vector<TailFamily> closed{SubGaussian{1.0}, SubGaussian{0.03}, SubGamma{1.0, 1.0}, SubGamma{0.2, 5.0},
                                       SubGamma{4.0, 0.1}};
  for (const auto& fam : closed) {
    for (int i = 0; i <= 200; ++i) {
      const double y = 1e-3 * std::pow(1e5, i / 200.0);
      const double c = psi_star_inverse(fam, y);
      worst = std::max(worst, std::abs(psi_star_inverse_numeric(fam, y) - c) / c);
    }
  }
  o.require(worst <= 1e-6, "numeric vs closed form");
  double worst_relax = 0.0;
  const std::vector<TailFamily> families{SubGaussian{1.0}, SubGamma{1.0, 1.0}, SubGamma{0.3, 0.2},
                                         SubExponential{1.0, 2.0}, BoundedRange{0.0, 1.0}};
  for (const auto& fam : families) {
    for (std::uint64_t n : {10u, 1000u}) {
      for (double kl : {0.0, 3.0}) {
        const auto ctx = BoundContext::with_beta(n, 0.05, kl, 0.0);
        const double analogue = chernoff_analogue(ctx, fam).value;
        worst_relax = std::max(worst_relax, std::abs(grid_inf(fam, chernoff_budget(ctx, n)) - analogue) / analogue);
      }
    }
  }
  o.require(worst_relax <= 1e-6, "re-relaxation vs chernoff analogue");
  o.detail << " max rel err closed=" << worst << " re-relaxation=" << worst_relax;
}

void criterion_7(Outcome& o) {
  const BetaSchedule basel{Basel{}, 0.05};
  long double partial = 0.0L;
  bool sums_ok = true;
  for (std::uint64_t n = 1; n <= 1000000; ++n) {
    partial += beta_at(basel, n);
    if (partial > 0.05L || 0.05L - partial > 6.0L * 0.05L / (pi * pi * n) * (1.0L + 1e-9L)) sums_ok = false;
  }
  o.require(sums_ok, "basel partial sums");

  const auto t0 = Clock::now();
  double worst = 0.0;
  std::string worst_name;
  int runs = 0;
  for (const auto& preset : presets()) {
    struct Run {
      BoundId id;
      AnytimeMode mode;
    };
    for (const Run run : {Run{BoundId::seeger_langford, AnytimeMode::schedule},
                          Run{BoundId::fast_rate_simple, AnytimeMode::schedule},
                          Run{BoundId::seeger_langford, AnytimeMode::seeger_substitution},
                          Run{BoundId::mixed_rate, AnytimeMode::seeger_substitution}}) {
      AnytimeConfig cfg;
      cfg.horizon = 200;
      cfg.beta = 0.05;
      cfg.mode = run.mode;
      cfg.trials = 2000;
      cfg.master_seed = 91;
      cfg.threads = cores();
      const auto r = anytime_coverage_experiment(preset.problem, preset.rule, BoundSpec{run.id}, cfg);
      ++runs;
      const std::string name = preset.problem.name + "/" + r.bound +
                               (run.mode == AnytimeMode::schedule ? "[schedule]" : "");
      if (r.ci_hi > worst) {
        worst = r.ci_hi;
        worst_name = name;
      }
      o.require(r.ci_hi <= 0.05, name + " (" + std::to_string(r.violations) + " violations)");
    }
  }
  o.detail << " basel sums to 1e6 ok=" << sums_ok << " runs=" << runs << " worst ci_hi=" << worst << " ("
           << worst_name << ") time=" << seconds_since(t0) << "s";

  // negative control, reported only: a fixed-n bound at the total beta at every prefix
  AnytimeConfig ctl;
  ctl.horizon = 200;
  ctl.beta = 0.05;
  ctl.mode = AnytimeMode::unscheduled;
  ctl.trials = 2000;
  ctl.master_seed = 91;
  ctl.threads = cores();
  BoundSpec fixed{BoundId::catoni_fixed};
  fixed.lambda = 20.0;
  const auto half = *find_preset("bernoulli-half");
  const auto r = anytime_coverage_experiment(half.problem, half.rule, fixed, ctl);
  o.detail << "; unscheduled negative control " << r.bound << " violation rate=" << r.violation_rate
           << " wilson=[" << r.ci_lo << ", " << r.ci_hi << "]";
}

void criterion_8(Outcome& o) {
  const auto preset = *find_preset("fifty");
  const auto& p = preset.problem;
  o.require(p.num_hypotheses() == 50, "problem size");
  double margin_prior = INFINITY, margin_mc = INFINITY;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto s = draw_dataset(p, preset.n, seed);
    const auto res = alternating_optimize(p, s, OptimizedBound::fast_rate_simple, 0.05);
    for (std::size_t t = 1; t < res.trace.size(); ++t)
      o.require(res.trace[t] <= res.trace[t - 1], "trace increases at seed " + std::to_string(seed));
    auto fr_at = [&](const std::vector<double>& post) {
      const auto q = exact_quantities(p, s, post);
      return fast_rate_simple(BoundContext::with_beta(preset.n, 0.05, q.kl, q.emp_risk)).value;
    };
    const double prior_cert = fr_at(p.prior);
    const auto mc = mcallester_optimized(p, s, 0.05);
    const double mc_cert = std::min(fr_at(mc.posterior), mc.certificate.value);
    o.require(res.certificate.value <= prior_cert, "worse than the prior at seed " + std::to_string(seed));
    o.require(res.certificate.value <= mc_cert, "worse than the mcallester posterior at seed " + std::to_string(seed));
    margin_prior = std::min(margin_prior, prior_cert - res.certificate.value);
    margin_mc = std::min(margin_mc, mc_cert - res.certificate.value);
    if (seed == 1)
      o.detail << " seed1: alternating=" << res.certificate.value << " prior=" << prior_cert
               << " mcallester-opt=" << mc_cert << " iters=" << res.iterations << ";";
  }
  o.detail << " min margins: prior=" << margin_prior << " mcallester-opt=" << margin_mc;
}

void criterion_9(Outcome& o) {
  double worst_w = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double x = -10.0 + 9.0 * i / 20000.0;
    worst_w = std::max(worst_w, std::abs(lambert_w_m1(x * std::exp(x)) - x));
  }
  o.require(worst_w <= 1e-9, "lambert W round trip");

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_kl = 0.0;
  int floor_limited = 0;
  for (int i = 0; i < 100000; ++i) {
    const double p = u(rng), c = 5.0 * u(rng);
    const double q = kl_inverse_upper(p, c);
    if (q >= 1.0) continue;
    const double r = std::abs(binary_kl(p, q) - c);
    if (r > 1e-10) {
      // acceptable only when q and its predecessor bracket the target
      const double prev = std::nextafter(q, 0.0);
      const bool bracketed = binary_kl(p, prev) <= c && c < binary_kl(p, q);
      o.require(bracketed, "kl inverse residual");
      ++floor_limited;
    } else {
      worst_kl = std::max(worst_kl, r);
    }
  }
  bool xi_ok = true;
  for (std::uint64_t n = 1; n <= 200; ++n) {
    const double v = xi_maurer(n, XiMode::exact).value, nd = static_cast<double>(n);
    if (v < std::sqrt(nd) * (1 - 1e-12) || v > std::min(2.0 * std::sqrt(nd), 2.0 + std::sqrt(2.0 * nd)) * (1 + 1e-12))
      xi_ok = false;
  }
  o.require(xi_ok, "xi range");
  o.detail << " max|W(xe^x)-x|=" << worst_w << " max kl residual=" << worst_kl << " (" << floor_limited
           << " points near q=1, where one ulp of q moves kl by more than 1e-10, bracketed by adjacent doubles)";
}

void criterion_10(Outcome& o) {
  double worst_nc = 0.0, worst_ll = 0.0;
  for (std::uint64_t n : {1u, 10u, 100u, 10000u, 1000000u}) {
    for (double beta : {0.5, 0.05, 1e-6}) {
      for (int j = 0; j <= 20; ++j) {
        const double kl = n * j / 20.0;
        const auto ctx = BoundContext::with_beta(n, beta, kl, 0.0);
        const double analogue = chernoff_log_term(ctx, n);
        const double nc = no_cutoff_log_term(ctx) - analogue;
        const double nc_expected = std::log(pi * pi * (kl + 1.0) * (kl + 1.0) / 6.0) - std::log(double(n));
        worst_nc = std::max(worst_nc, std::abs(nc - nc_expected) / (1.0 + std::abs(nc_expected)));
        const double ll = (e * std::max(kl, 1.0) + loglog_log_term(ctx)) - (kl + analogue);
        const double ll_expected =
            e * std::max(kl, 1.0) - kl + std::log(2.0 + std::log(double(n))) - 1.0 - std::log(double(n));
        worst_ll = std::max(worst_ll, std::abs(ll - ll_expected) / (1.0 + std::abs(ll_expected)));
      }
    }
  }
  o.require(worst_nc <= 1e-12, "no-cutoff identity");
  o.require(worst_ll <= 1e-12, "loglog identity");

  int wins = 0, points = 0, mismatches = 0, log_kl_wins = 0;
  double max_win_ratio = 0.0;
  for (double ln_n = 1.0; ln_n <= 30.0; ln_n += 0.5) {
    const auto n = static_cast<std::uint64_t>(std::exp(ln_n));
    for (double kl = 0.0; kl <= std::min(double(n), 40.0); kl += 0.25) {
      const auto c = BoundContext::with_beta(n, 0.05, kl, 0.1);
      const double lhs = e * std::max(kl, 1.0) - kl;
      const double rhs = std::log(e * double(n)) - std::log(2.0 + std::log(double(n)));
      if (std::abs(lhs - rhs) < 1e-9) continue;
      ++points;
      const bool win = chernoff_loglog(c, SubGaussian{1.0}).value < chernoff_analogue(c, SubGaussian{1.0}).value;
      if (win != (lhs < rhs)) ++mismatches;
      if (win) {
        ++wins;
        max_win_ratio = std::max(max_win_ratio, kl / std::log(double(n)));
        if (kl >= std::log(double(n))) ++log_kl_wins;
      }
    }
  }
  o.require(mismatches == 0, "crossover boundary");
  o.require(wins > 0, "loglog never wins");
  o.require(log_kl_wins == 0, "loglog wins at kl >= ln n");
  o.detail << " max identity err no-cutoff=" << worst_nc << " loglog=" << worst_ll << "; grid=" << points
           << " loglog wins=" << wins << " max kl/ln n among wins=" << max_win_ratio;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<void(Outcome&)>> criteria{criterion_1, criterion_2, criterion_3, criterion_4,
                                                            criterion_5, criterion_6, criterion_7, criterion_8,
                                                            criterion_9, criterion_10};
  const char* names[] = {"three-way equivalence",  "dominance",         "realizable fast rate",
                         "gamma=2 constants",      "coverage suite",    "conjugate inverse round trip",
                         "anytime validity",       "posterior optimisation", "special functions",
                         "cut-off variants"};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    const auto t0 = Clock::now();
    try {
      criteria[i](o);
    } catch (const std::exception& ex) {
      o.require(false, std::string("exception: ") + ex.what());
    }
    all = all && o.pass;
    std::printf("criterion %2d %-30s %s [%.1fs]%s\n", id, names[i], o.pass ? "PASS" : "FAIL", seconds_since(t0),
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
