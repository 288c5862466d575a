#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "doctest.h"
#include "pacbayes/bounded.hpp"
#include "pacbayes/lab.hpp"

using namespace pacbayes;

namespace {

DiscreteProblem two_hypotheses() {
  DiscreteProblem p;
  p.name = "toy";
  p.outcomes = {0.0, 1.0};
  p.pmf = {0.5, 0.5};
  p.hypotheses = {"a", "b"};
  p.prior = {0.5, 0.5};
  p.loss = {{0.0, 0.0}, {1.0, 1.0}};
  p.loss_range = std::pair{0.0, 1.0};
  return p;
}

}  // namespace

TEST_CASE("gibbs posterior") {
  const auto p = two_hypotheses();
  const Sample s{0, 1, 1};
  const auto post = gibbs_posterior(p, s, 1.0);
  CHECK(post[0] == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-15));
  CHECK(std::abs(post[0] - 0.731059) < 5e-7);
  const auto flat = gibbs_posterior(p, s, 0.0);
  CHECK(flat[0] == 0.5);
  CHECK(flat[1] == 0.5);
  const auto sharp = gibbs_posterior(p, s, 1e6);
  CHECK(sharp[0] == 1.0);
  CHECK(sharp[1] == 0.0);

  const auto q = exact_quantities(p, s, post);
  const double pw = post[0];
  CHECK(q.kl == doctest::Approx(std::log(2.0) + pw * std::log(pw) + (1 - pw) * std::log(1 - pw)).epsilon(1e-14));
  CHECK(std::abs(q.kl - 0.1109440717) < 1e-10);
  CHECK(exact_quantities(p, s, p.prior).kl == 0.0);
  CHECK_THROWS_AS(gibbs_posterior(p, s, -1.0), std::invalid_argument);
}

TEST_CASE("posterior rules") {
  auto p = two_hypotheses();
  const Sample s{0, 1};
  CHECK(posterior_for(p, s, Gibbs{2.0, GibbsScale::n_scaled}) == gibbs_posterior(p, s, 4.0));
  CHECK(posterior_for(p, s, FixedPosterior{{0.25, 0.75}}) == std::vector<double>{0.25, 0.75});
  const auto soft = posterior_for(p, s, ErmSoftmax{0.5});
  CHECK(soft[0] == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))).epsilon(1e-15));
  p.prior = {0.0, 1.0};
  CHECK(posterior_for(p, s, ErmSoftmax{0.01})[0] == 0.0);
  CHECK_THROWS_AS(exact_quantities(p, s, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(exact_quantities(p, s, {0.2, 0.2}), std::invalid_argument);
}

TEST_CASE("exact quantities against direct summation") {
  const auto preset = *find_preset("heavy-tailed");
  const auto& p = preset.problem;
  const Sample s = draw_dataset(p, 40, 99);
  const auto post = posterior_for(p, s, preset.rule);
  const auto q = exact_quantities(p, s, post);
  double pop = 0, emp = 0, sq_emp = 0, sq_pop = 0, var_emp = 0, var_pred = 0;
  for (std::size_t w = 0; w < p.num_hypotheses(); ++w) {
    double risk = 0, second = 0;
    for (std::size_t z = 0; z < p.num_outcomes(); ++z) {
      risk += p.pmf[z] * p.loss[w][z];
      second += p.pmf[z] * p.loss[w][z] * p.loss[w][z];
    }
    double r = 0, sq = 0, dev = 0;
    for (auto z : s) {
      r += p.loss[w][z];
      sq += p.loss[w][z] * p.loss[w][z];
      dev += (risk - p.loss[w][z]) * (risk - p.loss[w][z]);
    }
    pop += post[w] * risk;
    emp += post[w] * r / s.size();
    sq_emp += post[w] * sq / s.size();
    sq_pop += post[w] * second;
    var_emp += post[w] * dev;
    var_pred += post[w] * s.size() * (second - risk * risk);
  }
  CHECK(q.pop_risk == doctest::Approx(pop).epsilon(1e-12));
  CHECK(q.emp_risk == doctest::Approx(emp).epsilon(1e-12));
  CHECK(q.sigma2_n == doctest::Approx(sq_emp + 2.0 * sq_pop + 1.0).epsilon(1e-12));
  CHECK(q.var_empirical == doctest::Approx(var_emp).epsilon(1e-12));
  CHECK(q.var_predictable == doctest::Approx(var_pred).epsilon(1e-10));
  CHECK(q.esssup == 2.0 * population_risks(p)[1]);

  DiscreteProblem flat = two_hypotheses();
  flat.loss = {{0.3, 0.3}, {0.3, 0.3}};
  const auto qc = exact_quantities(flat, {0, 1, 1}, {0.9, 0.1});
  CHECK(qc.pop_risk == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(qc.emp_risk == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("dataset draws") {
  auto p = two_hypotheses();
  p.pmf = {1.0, 0.0};
  for (auto z : draw_dataset(p, 1000, 5)) CHECK(z == 0);
  const auto preset = *find_preset("heavy-tailed");
  CHECK(draw_dataset(preset.problem, 500, 17) == draw_dataset(preset.problem, 500, 17));
  CHECK(draw_dataset(preset.problem, 500, 17) != draw_dataset(preset.problem, 500, 18));
  const std::uint64_t n = 100000;
  const auto s = draw_dataset(preset.problem, n, 2024);
  std::vector<double> counts(preset.problem.num_outcomes(), 0.0);
  for (auto z : s) counts[z] += 1.0;
  double chi2 = 0.0;
  for (std::size_t z = 0; z < counts.size(); ++z) {
    const double expected = n * preset.problem.pmf[z];
    chi2 += (counts[z] - expected) * (counts[z] - expected) / expected;
  }
  CHECK(chi2 < 20.52);  // 0.999 quantile of chi-square with 5 degrees of freedom
  CHECK(trial_seed(1, 2) != trial_seed(1, 3));
  CHECK(trial_seed(1, 2) != trial_seed(2, 2));
}

TEST_CASE("problem validation and files") {
  auto p = two_hypotheses();
  CHECK_NOTHROW(validate(p));
  auto bad = p;
  bad.pmf = {0.5, 0.6};
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = p;
  bad.loss[0][1] = 2.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = p;
  bad.loss.pop_back();
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = p;
  bad.prior = {-0.5, 1.5};
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);

  const std::string path = "lab_problem_test.json";
  for (const auto& preset : presets()) {
    save_problem(preset.problem, path);
    const auto loaded = load_problem(path);
    CHECK(loaded.pmf == preset.problem.pmf);
    CHECK(loaded.loss == preset.problem.loss);
    CHECK(loaded.prior == preset.problem.prior);
    CHECK(loaded.loss_range == preset.problem.loss_range);
    CHECK(loaded.hypotheses == preset.problem.hypotheses);
  }
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs("{\"outcomes\": [{\"value\": 0}], \"hypotheses\": []}", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(load_problem(path), std::invalid_argument);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_problem("no/such/file.json"), std::invalid_argument);
}

TEST_CASE("wilson interval") {
  const auto [lo, hi] = wilson_interval(0, 10000);
  CHECK(lo == 0.0);
  CHECK(hi == doctest::Approx(wilson_z99 * wilson_z99 / (10000 + wilson_z99 * wilson_z99)).epsilon(1e-12));
  const auto [lo2, hi2] = wilson_interval(500, 10000);
  CHECK(lo2 < 0.05);
  CHECK(hi2 > 0.05);
  CHECK(hi2 - 0.05 == doctest::Approx(0.05 - lo2).epsilon(0.05));
}

TEST_CASE("coverage experiments") {
  const auto preset = *find_preset("bernoulli-half");
  CoverageConfig cfg;
  cfg.n = 100;
  cfg.beta = 0.05;
  cfg.trials = 10000;
  cfg.master_seed = 7;
  const auto r = coverage_experiment(preset.problem, preset.rule, BoundSpec{BoundId::mcallester}, cfg);
  CHECK(r.trials == 10000);
  CHECK(r.violations <= r.trials);
  CHECK(r.violation_rate == doctest::Approx(double(r.violations) / r.trials).epsilon(1e-15));
  CHECK(r.ci_hi <= 0.05);
  CHECK(r.mean_pop_risk == doctest::Approx(0.5).epsilon(1e-12));

  cfg.beta = 0.999;
  cfg.trials = 2000;
  const auto stress = coverage_experiment(preset.problem, preset.rule, BoundSpec{BoundId::seeger_langford}, cfg);
  CHECK(stress.ci_lo <= 0.999);

  // bit-identical regardless of thread count
  cfg.beta = 0.05;
  const auto gibbs = *find_preset("gibbs10");
  cfg.n = gibbs.n;
  cfg.threads = 1;
  const auto one = coverage_suite(gibbs.problem, gibbs.rule, gibbs.bounds, cfg);
  cfg.threads = 3;
  const auto three = coverage_suite(gibbs.problem, gibbs.rule, gibbs.bounds, cfg);
  CHECK(one == three);
}

TEST_CASE("certificates dominate the empirical risk on every preset") {
  for (const auto& preset : presets()) {
    for (std::uint64_t t = 0; t < 30; ++t) {
      const auto s = draw_dataset(preset.problem, preset.n, trial_seed(3, t));
      const auto q = exact_quantities(preset.problem, s, posterior_for(preset.problem, s, preset.rule));
      const auto in = lab_inputs(preset.problem, q, preset.n, -std::log(0.05));
      for (const auto& spec : preset.bounds) {
        const auto cert = evaluate_risk(spec, in);
        if (cert.informative) CHECK(cert.value >= q.emp_risk - 1e-12);
      }
    }
  }
}

TEST_CASE("anytime coverage") {
  const auto preset = *find_preset("bernoulli-half");
  AnytimeConfig acfg;
  acfg.horizon = 1;
  acfg.mode = AnytimeMode::unscheduled;
  acfg.trials = 500;
  acfg.master_seed = 11;
  CoverageConfig cfg;
  cfg.n = 1;
  cfg.trials = 500;
  cfg.master_seed = 11;
  const BoundSpec spec{BoundId::seeger_langford};
  CHECK(anytime_coverage_experiment(preset.problem, preset.rule, spec, acfg) ==
        coverage_experiment(preset.problem, preset.rule, spec, cfg));

  acfg.horizon = 50;
  acfg.mode = AnytimeMode::seeger_substitution;
  const auto r = anytime_coverage_experiment(preset.problem, preset.rule, BoundSpec{BoundId::mixed_rate}, acfg);
  CHECK(r.ci_hi <= 0.05);
  CHECK(r.bound == "mixed-rate{anytime}");
  CHECK_THROWS_AS(anytime_coverage_experiment(preset.problem, preset.rule, BoundSpec{BoundId::chernoff}, acfg),
                  std::invalid_argument);
}

TEST_CASE("alternating optimisation") {
  auto single = two_hypotheses();
  single.prior = {1.0, 0.0};
  const Sample s{0, 1, 0, 0};
  const auto one = alternating_optimize(single, s, OptimizedBound::fast_rate_simple, 0.05);
  CHECK(one.iterations == 1);
  CHECK(one.converged);

  const auto two = *find_preset("two-hypothesis");
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto sample = draw_dataset(two.problem, 200, seed);
    for (auto bound : {OptimizedBound::fast_rate_simple, OptimizedBound::catoni_uniform}) {
      const auto res = alternating_optimize(two.problem, sample, bound, 0.05);
      for (std::size_t t = 1; t < res.trace.size(); ++t) CHECK(res.trace[t] <= res.trace[t - 1] + 1e-12);
      const auto q = exact_quantities(two.problem, sample, two.problem.prior);
      const auto prior_ctx = BoundContext::with_beta(200, 0.05, q.kl, q.emp_risk);
      const double prior_cert = bound == OptimizedBound::fast_rate_simple ? fast_rate_simple(prior_ctx).value
                                                                          : catoni_uniform(prior_ctx).value;
      CHECK(res.certificate.value <= prior_cert + 1e-12);
    }
  }
  const auto mc = mcallester_optimized(two.problem, draw_dataset(two.problem, 200, 1), 0.05);
  const auto qm = exact_quantities(two.problem, draw_dataset(two.problem, 200, 1), two.problem.prior);
  CHECK(mc.certificate.value <= mcallester(BoundContext::with_beta(200, 0.05, qm.kl, qm.emp_risk)).value + 1e-12);

  const auto heavy = *find_preset("heavy-tailed");
  CHECK_THROWS_AS(alternating_optimize(heavy.problem, {0, 1}, OptimizedBound::catoni_uniform, 0.05),
                  std::invalid_argument);
}

TEST_CASE("tightness table") {
  CoverageConfig cfg;
  cfg.trials = 300;
  for (const auto& preset : presets()) {
    cfg.n = preset.n;
    const auto rows = tightness_table(preset.problem, preset.rule, preset.bounds, cfg);
    auto row = [&](const std::string& id) {
      for (const auto& r : rows)
        if (r.bound == id) return r;
      FAIL("missing row " << id);
      return rows.front();
    };
    CHECK(row("seeger-langford").certificate <= row("mcallester").certificate + 1e-12);
    CHECK(row("mixed-rate").certificate <= row("rivasplata").certificate + 1e-12);
    CHECK(row("mcallester").emp_risk == row("seeger-langford").emp_risk);
  }
}

TEST_CASE("presets") {
  const auto all = presets();
  CHECK(all.size() >= 6);
  for (const auto& preset : all) {
    CHECK_NOTHROW(validate(preset.problem));
    CHECK(find_preset(preset.problem.name).has_value());
  }
  CHECK(find_preset("gibbs10")->problem.num_hypotheses() == 10);
  CHECK(find_preset("fifty")->problem.num_hypotheses() == 50);
  CHECK_FALSE(find_preset("nope").has_value());
  DiscreteProblem unbounded = two_hypotheses();
  unbounded.loss_range.reset();
  CHECK(default_specs(unbounded, 10, 0.05).size() == 2);

  const auto ctx = BoundContext::with_beta(100, 0.05, 0.0, 0.3);
  CHECK(data_dependent_catoni(ctx).value <= catoni_uniform(ctx).value);
}
