#include "pacbayes/lab.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "pacbayes/bounded.hpp"
#include "pacbayes/specfun.hpp"

namespace pacbayes {

namespace {

using json = nlohmann::json;
using Counts = std::vector<std::uint64_t>;

void check_pmf(const std::vector<double>& pmf, const char* what) {
  if (pmf.empty()) throw std::invalid_argument(std::string(what) + " is empty");
  double sum = 0.0;
  for (double p : pmf) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument(std::string(what) + " has a negative or non-finite entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument(std::string(what) + " does not sum to 1");
}

// Per-hypothesis population moments; fixed for a problem.
struct Moments {
  std::vector<double> risk, second, variance;
  double esssup = 0.0;
};

Moments moments_of(const DiscreteProblem& p) {
  Moments m;
  const std::size_t h = p.num_hypotheses();
  m.risk.assign(h, 0.0);
  m.second.assign(h, 0.0);
  m.variance.assign(h, 0.0);
  m.esssup = -std::numeric_limits<double>::infinity();
  for (std::size_t w = 0; w < h; ++w) {
    for (std::size_t z = 0; z < p.num_outcomes(); ++z) {
      m.risk[w] += p.pmf[z] * p.loss[w][z];
      m.second[w] += p.pmf[z] * p.loss[w][z] * p.loss[w][z];
    }
    for (std::size_t z = 0; z < p.num_outcomes(); ++z) {
      const double d = p.loss[w][z] - m.risk[w];
      m.variance[w] += p.pmf[z] * d * d;
    }
    if (p.prior[w] > 0.0) m.esssup = std::max(m.esssup, m.risk[w]);
  }
  return m;
}

Counts counts_of(const DiscreteProblem& p, const Sample& s) {
  Counts c(p.num_outcomes(), 0);
  for (auto z : s) {
    if (z >= c.size()) throw std::invalid_argument("sample outcome out of range");
    ++c[z];
  }
  return c;
}

std::vector<double> emp_risks_from_counts(const DiscreteProblem& p, const Counts& c, std::uint64_t n) {
  std::vector<double> r(p.num_hypotheses(), 0.0);
  for (std::size_t w = 0; w < r.size(); ++w) {
    double acc = 0.0;
    for (std::size_t z = 0; z < c.size(); ++z)
      if (c[z]) acc += static_cast<double>(c[z]) * p.loss[w][z];
    r[w] = acc / static_cast<double>(n);
  }
  return r;
}

std::vector<double> gibbs_from_risks(const std::vector<double>& prior, const std::vector<double>& risks, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("temperature must be >= 0");
  std::vector<double> logw(prior.size(), -std::numeric_limits<double>::infinity());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t w = 0; w < prior.size(); ++w) {
    if (prior[w] > 0.0) {
      logw[w] = std::log(prior[w]) - (t == 0.0 ? 0.0 : t * risks[w]);
      top = std::max(top, logw[w]);
    }
  }
  std::vector<double> out(prior.size(), 0.0);
  double z = 0.0;
  for (std::size_t w = 0; w < prior.size(); ++w) {
    if (prior[w] > 0.0) {
      out[w] = std::exp(logw[w] - top);
      z += out[w];
    }
  }
  for (double& v : out) v /= z;
  return out;
}

std::vector<double> rule_posterior(const DiscreteProblem& p, const std::vector<double>& risks, std::uint64_t n,
                                   const PosteriorRule& rule) {
  if (const auto* g = std::get_if<Gibbs>(&rule)) {
    const double t = g->scale == GibbsScale::n_scaled ? g->lambda * static_cast<double>(n) : g->lambda;
    return gibbs_from_risks(p.prior, risks, t);
  }
  if (const auto* f = std::get_if<FixedPosterior>(&rule)) {
    if (f->pmf.size() != p.num_hypotheses()) throw std::invalid_argument("fixed posterior has the wrong size");
    return f->pmf;
  }
  const auto& e = std::get<ErmSoftmax>(rule);
  if (!(e.temperature > 0.0)) throw std::invalid_argument("softmax temperature must be positive");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t w = 0; w < risks.size(); ++w)
    if (p.prior[w] > 0.0) best = std::min(best, risks[w]);
  std::vector<double> shifted(risks.size());
  for (std::size_t w = 0; w < risks.size(); ++w) shifted[w] = risks[w] - best;
  std::vector<double> flat(p.prior.size());
  for (std::size_t w = 0; w < flat.size(); ++w) flat[w] = p.prior[w] > 0.0 ? 1.0 : 0.0;
  return gibbs_from_risks(flat, shifted, 1.0 / e.temperature);
}

ExactQuantities quantities(const DiscreteProblem& p, const Moments& m, const Counts& c, std::uint64_t n,
                           const std::vector<double>& emp, const std::vector<double>& post) {
  if (post.size() != p.num_hypotheses()) throw std::invalid_argument("posterior has the wrong size");
  double total = 0.0;
  for (double v : post) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("posterior has a negative or non-finite entry");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("posterior does not sum to 1");
  const double nd = static_cast<double>(n);
  ExactQuantities q;
  for (std::size_t w = 0; w < post.size(); ++w) {
    const double pw = post[w];
    if (pw == 0.0) continue;
    if (p.prior[w] == 0.0) throw std::invalid_argument("posterior is not absolutely continuous with respect to the prior");
    q.kl += pw * std::log(pw / p.prior[w]);
    q.pop_risk += pw * m.risk[w];
    q.emp_risk += pw * emp[w];
    double sq = 0.0, dev = 0.0;
    for (std::size_t z = 0; z < c.size(); ++z) {
      if (!c[z]) continue;
      const double l = p.loss[w][z], cz = static_cast<double>(c[z]);
      sq += cz * l * l;
      dev += cz * (m.risk[w] - l) * (m.risk[w] - l);
    }
    q.second_empirical += pw * sq / nd;
    q.second_population += pw * m.second[w];
    q.var_empirical += pw * dev;
    q.var_predictable += pw * nd * m.variance[w];
  }
  q.kl = std::max(q.kl, 0.0);
  q.sigma2_n = q.second_empirical + 2.0 * q.second_population + 1.0;
  q.esssup = m.esssup;
  return q;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<double> cumulative(const std::vector<double>& pmf) {
  std::vector<double> cdf(pmf.size());
  std::partial_sum(pmf.begin(), pmf.end(), cdf.begin());
  return cdf;
}

std::uint32_t draw_one(std::mt19937_64& rng, const std::vector<double>& cdf) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u * cdf.back());
  return static_cast<std::uint32_t>(std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1));
}

// Runs body(trial) for every trial, spread over threads; rethrows the first error.
template <class Body>
void for_trials(std::uint64_t trials, unsigned threads, Body body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(trials, 256))));
  if (threads == 1) {
    for (std::uint64_t t = 0; t < trials; ++t) body(t);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < threads; ++k) {
    pool.emplace_back([&, k] {
      try {
        for (std::uint64_t t = k; t < trials; t += threads) body(t);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct TrialRecord {
  double value = 0.0;
  double pop = 0.0;
  double emp = 0.0;
  double kl_over_n = 0.0;
  bool violated = false;
};

// Aggregates in trial order so the result does not depend on scheduling.
CoverageReport aggregate(const std::string& bound, const std::vector<TrialRecord>& recs, double beta) {
  CoverageReport r;
  r.bound = bound;
  r.trials = recs.size();
  r.beta = beta;
  double sb = 0.0, sp = 0.0, se = 0.0, sk = 0.0, ss = 0.0;
  std::uint64_t finite = 0;
  for (const auto& x : recs) {
    if (x.violated) ++r.violations;
    sp += x.pop;
    se += x.emp;
    sk += x.kl_over_n;
    if (std::isfinite(x.value)) {
      ++finite;
      sb += x.value;
      ss += x.value - x.pop;
    } else {
      ++r.uninformative;
    }
  }
  const double t = static_cast<double>(r.trials);
  r.violation_rate = static_cast<double>(r.violations) / t;
  r.mean_pop_risk = sp / t;
  r.mean_emp_risk = se / t;
  r.mean_kl_over_n = sk / t;
  r.mean_bound = finite ? sb / static_cast<double>(finite) : std::numeric_limits<double>::infinity();
  r.mean_slack = finite ? ss / static_cast<double>(finite) : std::numeric_limits<double>::infinity();
  std::tie(r.ci_lo, r.ci_hi) = wilson_interval(r.violations, r.trials);
  return r;
}

void require_unit_losses(const DiscreteProblem& p) {
  for (const auto& row : p.loss)
    for (double l : row)
      if (!(l >= 0.0 && l <= 1.0)) throw std::invalid_argument("optimisation requires losses in [0,1]");
}

}  // namespace

void validate(const DiscreteProblem& p) {
  check_pmf(p.pmf, "outcome pmf");
  check_pmf(p.prior, "prior");
  if (!p.outcomes.empty() && p.outcomes.size() != p.pmf.size())
    throw std::invalid_argument("outcome labels and pmf differ in length");
  if (!p.hypotheses.empty() && p.hypotheses.size() != p.prior.size())
    throw std::invalid_argument("hypothesis ids and prior differ in length");
  if (p.loss.size() != p.prior.size()) throw std::invalid_argument("loss table needs one row per hypothesis");
  for (const auto& row : p.loss) {
    if (row.size() != p.pmf.size()) throw std::invalid_argument("loss table needs one column per outcome");
    for (double l : row)
      if (!std::isfinite(l)) throw std::invalid_argument("loss table has a non-finite entry");
  }
  if (p.loss_range) {
    const auto [a, b] = *p.loss_range;
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("loss_range requires finite a < b");
    for (const auto& row : p.loss)
      for (double l : row)
        if (l < a || l > b) throw std::invalid_argument("loss table entry outside loss_range");
  }
}

DiscreteProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open problem file " + path);
  json j;
  try {
    in >> j;
    DiscreteProblem p;
    p.name = j.value("name", std::string{});
    for (const auto& o : j.at("outcomes")) {
      p.outcomes.push_back(o.at("value").get<double>());
      p.pmf.push_back(o.at("prob").get<double>());
    }
    p.hypotheses = j.at("hypotheses").get<std::vector<std::string>>();
    p.loss = j.at("loss").get<std::vector<std::vector<double>>>();
    p.prior = j.at("prior").get<std::vector<double>>();
    if (j.contains("loss_range") && !j.at("loss_range").is_null()) {
      const auto r = j.at("loss_range").get<std::vector<double>>();
      if (r.size() != 2) throw std::invalid_argument("loss_range must have two entries");
      p.loss_range = std::pair{r[0], r[1]};
    }
    validate(p);
    return p;
  } catch (const json::exception& e) {
    throw std::invalid_argument("malformed problem file " + path + ": " + e.what());
  }
}

void save_problem(const DiscreteProblem& p, const std::string& path) {
  json j;
  j["name"] = p.name;
  j["outcomes"] = json::array();
  for (std::size_t z = 0; z < p.pmf.size(); ++z)
    j["outcomes"].push_back({{"value", p.outcomes.empty() ? static_cast<double>(z) : p.outcomes[z]}, {"prob", p.pmf[z]}});
  j["hypotheses"] = p.hypotheses;
  j["loss"] = p.loss;
  j["prior"] = p.prior;
  j["loss_range"] = p.loss_range ? json::array({p.loss_range->first, p.loss_range->second}) : json(nullptr);
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write problem file " + path);
  out << j.dump(2) << '\n';
}

std::vector<double> empirical_risks(const DiscreteProblem& p, const Sample& s) {
  if (s.empty()) throw std::invalid_argument("sample is empty");
  return emp_risks_from_counts(p, counts_of(p, s), s.size());
}

std::vector<double> population_risks(const DiscreteProblem& p) { return moments_of(p).risk; }

std::vector<double> gibbs_posterior(const DiscreteProblem& p, const Sample& s, double temperature) {
  return gibbs_from_risks(p.prior, empirical_risks(p, s), temperature);
}

std::vector<double> posterior_for(const DiscreteProblem& p, const Sample& s, const PosteriorRule& rule) {
  return rule_posterior(p, empirical_risks(p, s), s.size(), rule);
}

ExactQuantities exact_quantities(const DiscreteProblem& p, const Sample& s, const std::vector<double>& posterior) {
  if (s.empty()) throw std::invalid_argument("sample is empty");
  const Counts c = counts_of(p, s);
  return quantities(p, moments_of(p), c, s.size(), emp_risks_from_counts(p, c, s.size()), posterior);
}

BoundInputs lab_inputs(const DiscreteProblem& p, const ExactQuantities& q, std::uint64_t n, double log_inv_beta) {
  BoundInputs in;
  in.ctx.n = n;
  in.ctx.log_inv_beta = log_inv_beta;
  in.ctx.kl = q.kl;
  in.ctx.emp_risk = q.emp_risk;
  in.range = p.loss_range;
  // posterior averages of in-range losses may leave the range by rounding
  if (in.range) in.ctx.emp_risk = std::clamp(q.emp_risk, in.range->first, in.range->second);
  in.esssup = {q.esssup, true};
  in.sigma2_n = q.sigma2_n;
  in.var_empirical = q.var_empirical;
  in.var_predictable = q.var_predictable;
  return in;
}

Sample draw_dataset(const DiscreteProblem& p, std::uint64_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  std::mt19937_64 rng(seed);
  const auto cdf = cumulative(p.pmf);
  Sample s(n);
  for (auto& z : s) z = draw_one(rng, cdf);
  return s;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial) {
  return splitmix64(master_seed ^ splitmix64(trial));
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) throw std::invalid_argument("wilson interval needs at least one trial");
  const double n = static_cast<double>(trials), p = static_cast<double>(successes) / n, z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

std::vector<CoverageReport> coverage_suite(const DiscreteProblem& p, const PosteriorRule& rule,
                                           const std::vector<BoundSpec>& specs, const CoverageConfig& cfg) {
  validate(p);
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (!(cfg.beta > 0.0 && cfg.beta < 1.0)) throw std::invalid_argument("beta must lie in (0,1)");
  const Moments m = moments_of(p);
  const auto cdf = cumulative(p.pmf);
  const double lib = -std::log(cfg.beta);
  std::vector<std::vector<TrialRecord>> recs(specs.size(), std::vector<TrialRecord>(cfg.trials));
  for_trials(cfg.trials, cfg.threads, [&](std::uint64_t t) {
    std::mt19937_64 rng(trial_seed(cfg.master_seed, t));
    Counts c(p.num_outcomes(), 0);
    for (std::uint64_t i = 0; i < cfg.n; ++i) ++c[draw_one(rng, cdf)];
    const auto emp = emp_risks_from_counts(p, c, cfg.n);
    const auto post = rule_posterior(p, emp, cfg.n, rule);
    const auto q = quantities(p, m, c, cfg.n, emp, post);
    const BoundInputs in = lab_inputs(p, q, cfg.n, lib);
    for (std::size_t k = 0; k < specs.size(); ++k) {
      const Certificate cert = evaluate_risk(specs[k], in);
      recs[k][t] = {cert.value, q.pop_risk, q.emp_risk, q.kl / static_cast<double>(cfg.n), q.pop_risk > cert.value};
    }
  });
  std::vector<CoverageReport> out;
  for (std::size_t k = 0; k < specs.size(); ++k) out.push_back(aggregate(describe(specs[k]), recs[k], cfg.beta));
  return out;
}

CoverageReport coverage_experiment(const DiscreteProblem& p, const PosteriorRule& rule, const BoundSpec& spec,
                                   const CoverageConfig& cfg) {
  return coverage_suite(p, rule, {spec}, cfg).front();
}

CoverageReport anytime_coverage_experiment(const DiscreteProblem& p, const PosteriorRule& rule, const BoundSpec& spec,
                                           const AnytimeConfig& cfg) {
  validate(p);
  if (cfg.horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  const BetaSchedule schedule{cfg.rule, cfg.beta};
  BoundSpec effective = spec;
  if (cfg.mode == AnytimeMode::seeger_substitution) {
    if (!accepts_xi(spec.id))
      throw std::invalid_argument(std::string(to_string(spec.id)) + " has no xi term to substitute");
    effective.xi = ConfidenceConstant::anytime;
  }
  const Moments m = moments_of(p);
  const auto cdf = cumulative(p.pmf);
  std::vector<double> lib(cfg.horizon + 1);
  for (std::uint64_t n = 1; n <= cfg.horizon; ++n)
    lib[n] = cfg.mode == AnytimeMode::schedule ? log_inv_beta_at(schedule, n) : -std::log(cfg.beta);
  std::vector<TrialRecord> recs(cfg.trials);
  for_trials(cfg.trials, cfg.threads, [&](std::uint64_t t) {
    std::mt19937_64 rng(trial_seed(cfg.master_seed, t));
    Counts c(p.num_outcomes(), 0);
    TrialRecord rec;
    for (std::uint64_t n = 1; n <= cfg.horizon; ++n) {
      ++c[draw_one(rng, cdf)];
      const auto emp = emp_risks_from_counts(p, c, n);
      const auto post = rule_posterior(p, emp, n, rule);
      const auto q = quantities(p, m, c, n, emp, post);
      Certificate cert;
      try {
        cert = evaluate_risk(effective, lab_inputs(p, q, n, lib[n]));
      } catch (const std::exception& e) {
        throw AnytimeError(n, e.what());
      }
      rec.violated = rec.violated || q.pop_risk > cert.value;
      if (n == cfg.horizon) {
        rec.value = cert.value;
        rec.pop = q.pop_risk;
        rec.emp = q.emp_risk;
        rec.kl_over_n = q.kl / static_cast<double>(n);
      }
    }
    recs[t] = rec;
  });
  return aggregate(describe(effective), recs, cfg.beta);
}

AlternatingResult alternating_optimize(const DiscreteProblem& p, const Sample& sample, OptimizedBound bound, double beta,
                                       std::uint64_t max_iters, double tol) {
  validate(p);
  require_unit_losses(p);
  if (sample.empty()) throw std::invalid_argument("sample is empty");
  const std::uint64_t n = sample.size();
  const double nd = static_cast<double>(n);
  const Moments m = moments_of(p);
  const Counts c = counts_of(p, sample);
  const auto emp = emp_risks_from_counts(p, c, n);
  const double lib = -std::log(beta);
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0,1)");

  auto context_for = [&](const std::vector<double>& post) {
    const auto q = quantities(p, m, c, n, emp, post);
    BoundContext ctx;
    ctx.n = n;
    ctx.log_inv_beta = lib;
    ctx.kl = q.kl;
    ctx.emp_risk = std::clamp(q.emp_risk, 0.0, 1.0);
    return ctx;
  };
  // certificate and parameter at a posterior, never worse than keeping `previous`
  auto step = [&](const std::vector<double>& post, double previous) -> std::pair<Certificate, double> {
    const BoundContext ctx = context_for(post);
    if (bound == OptimizedBound::catoni_uniform) {
      Certificate best = catoni_uniform(ctx);
      double param = best.params.at("lambda");
      if (std::isfinite(previous)) {
        Certificate kept = catoni_fixed(ctx, previous, true);
        if (kept.params.at("unclamped") < best.params.at("unclamped")) {
          kept.bound_id = best.bound_id;
          best = kept;
          param = previous;
        }
      }
      return {best, param};
    }
    Certificate best = fast_rate_simple(ctx);
    const double budget = budget_xi(ctx);
    double param = optimal_gamma(ctx.emp_risk, budget, 1.0);
    if (std::isfinite(previous)) {
      const double kept = fast_rate_objective(ctx.emp_risk, budget, 1.0, previous);
      if (kept < best.params.at("unclamped")) {
        best.params["unclamped"] = kept;
        best.value = std::clamp(kept, 0.0, 1.0);
        best.informative = kept < 1.0;
        best.params["gamma"] = previous;
        param = previous;
      }
    }
    return {best, param};
  };
  auto temperature = [&](double param) {
    if (bound == OptimizedBound::catoni_uniform) return param;
    return std::isinf(param) ? 0.0 : nd * std::log(param / (param - 1.0));
  };

  AlternatingResult res;
  res.posterior = p.prior;
  auto [cert, param] = step(res.posterior, std::numeric_limits<double>::quiet_NaN());
  res.certificate = cert;
  res.parameter = param;
  res.trace.push_back(cert.params.at("unclamped"));
  for (std::uint64_t it = 1; it <= max_iters; ++it) {
    auto post = gibbs_from_risks(p.prior, emp, temperature(res.parameter));
    auto [next, next_param] = step(post, res.parameter);
    const double value = next.params.at("unclamped");
    res.iterations = it;
    if (value > res.trace.back()) {
      // no improvement at the Gibbs step; keep the best so far
      res.converged = true;
      break;
    }
    const double gain = res.trace.back() - value;
    res.trace.push_back(value);
    res.posterior = std::move(post);
    res.certificate = next;
    res.parameter = next_param;
    if (gain < tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

AlternatingResult mcallester_optimized(const DiscreteProblem& p, const Sample& sample, double beta) {
  validate(p);
  require_unit_losses(p);
  if (sample.empty()) throw std::invalid_argument("sample is empty");
  const std::uint64_t n = sample.size();
  const Moments m = moments_of(p);
  const Counts c = counts_of(p, sample);
  const auto emp = emp_risks_from_counts(p, c, n);
  auto cert_at = [&](double t) {
    const auto post = gibbs_from_risks(p.prior, emp, t);
    const auto q = quantities(p, m, c, n, emp, post);
    return mcallester(BoundContext::with_beta(n, beta, q.kl, std::clamp(q.emp_risk, 0.0, 1.0)));
  };
  const double nd = static_cast<double>(n);
  const auto best = minimize_scalar([&](double t) { return cert_at(t).params.at("unclamped"); }, 1e-3, 1e3 * nd, 1e-10);
  double t = best.argmin;
  if (cert_at(0.0).params.at("unclamped") <= best.min) t = 0.0;
  AlternatingResult res;
  res.parameter = t;
  res.posterior = gibbs_from_risks(p.prior, emp, t);
  res.certificate = cert_at(t);
  res.trace = {res.certificate.params.at("unclamped")};
  res.iterations = 1;
  res.converged = true;
  return res;
}

std::vector<TightnessRow> tightness_table(const DiscreteProblem& p, const PosteriorRule& rule,
                                          const std::vector<BoundSpec>& specs, const CoverageConfig& cfg) {
  std::vector<TightnessRow> rows;
  for (const auto& r : coverage_suite(p, rule, specs, cfg))
    rows.push_back({r.bound, r.mean_bound, r.mean_emp_risk, r.mean_kl_over_n, r.mean_slack});
  return rows;
}

Certificate data_dependent_catoni(const BoundContext& ctx) {
  validate(ctx, true);
  const double nd = static_cast<double>(ctx.n);
  const auto best = minimize_scalar([&](double l) { return catoni_fixed(ctx, l).params.at("unclamped"); }, 1e-3,
                                    1e3 * nd, 1e-12);
  Certificate cert = catoni_fixed(ctx, best.argmin);
  cert.bound_id = "data-dependent-catoni";
  return cert;
}

std::vector<BoundSpec> default_specs(const DiscreteProblem& p, std::uint64_t n, double beta) {
  std::vector<BoundSpec> out;
  if (!p.loss_range) {
    out.emplace_back(BoundId::second_moment);
    out.emplace_back(BoundId::martingale);
    return out;
  }
  const auto [a, b] = *p.loss_range;
  const double w = b - a, sigma2 = w * w / 4.0, nd = static_cast<double>(n);
  for (BoundId id : bounded_bounds()) {
    BoundSpec s{id};
    if (id == BoundId::catoni_fixed) s.lambda = 2.0 * std::sqrt(nd);
    out.push_back(s);
  }
  const TailFamily gauss = SubGaussian{sigma2};
  BoundSpec fixed{BoundId::cgf_fixed_lambda};
  fixed.family = gauss;
  fixed.lambda = std::sqrt(2.0 * -std::log(beta) / (nd * sigma2));
  out.push_back(fixed);
  for (const TailFamily& fam : {gauss, TailFamily{SubGamma{sigma2, w}}, TailFamily{SubExponential{sigma2, w}}}) {
    BoundSpec s{BoundId::chernoff};
    s.family = fam;
    out.push_back(s);
  }
  for (const TailFamily& fam : {TailFamily{BoundedRange{a, b}}, TailFamily{SubExponential{sigma2, w}}}) {
    BoundSpec s{BoundId::chernoff_menu};
    s.family = fam;
    out.push_back(s);
  }
  for (BoundId id : {BoundId::chernoff_no_cutoff, BoundId::chernoff_linearized, BoundId::chernoff_loglog}) {
    BoundSpec s{id};
    s.family = gauss;
    out.push_back(s);
  }
  out.emplace_back(BoundId::second_moment);
  out.emplace_back(BoundId::martingale);
  out.emplace_back(BoundId::randomized_subsample);
  return out;
}

namespace {

DiscreteProblem uniform_outcomes(std::string name, std::size_t outcomes, std::size_t hyps) {
  DiscreteProblem p;
  p.name = std::move(name);
  for (std::size_t z = 0; z < outcomes; ++z) p.outcomes.push_back(static_cast<double>(z));
  p.pmf.assign(outcomes, 1.0 / static_cast<double>(outcomes));
  for (std::size_t w = 0; w < hyps; ++w) p.hypotheses.push_back("w" + std::to_string(w));
  p.prior.assign(hyps, 1.0 / static_cast<double>(hyps));
  p.loss.assign(hyps, std::vector<double>(outcomes, 0.0));
  p.loss_range = std::pair{0.0, 1.0};
  return p;
}

DiscreteProblem bernoulli(std::string name, double rate) {
  DiscreteProblem p;
  p.name = std::move(name);
  p.outcomes = {0.0, 1.0};
  p.pmf = {1.0 - rate, rate};
  p.hypotheses = {"w0"};
  p.prior = {1.0};
  p.loss = {{0.0, 1.0}};
  p.loss_range = std::pair{0.0, 1.0};
  return p;
}

Preset make_preset(DiscreteProblem p, PosteriorRule rule, std::uint64_t n, std::string description) {
  Preset s;
  s.bounds = default_specs(p, n, 0.05);
  s.problem = std::move(p);
  s.rule = std::move(rule);
  s.n = n;
  s.description = std::move(description);
  return s;
}

}  // namespace

std::vector<Preset> presets() {
  std::vector<Preset> out;
  out.push_back(make_preset(bernoulli("bernoulli-half", 0.5), FixedPosterior{{1.0}}, 100,
                            "single hypothesis with Bernoulli(0.5) loss"));
  out.push_back(make_preset(bernoulli("bernoulli-rare", 0.05), FixedPosterior{{1.0}}, 100,
                            "single hypothesis with Bernoulli(0.05) loss"));
  {
    auto p = uniform_outcomes("two-hypothesis", 20, 2);
    p.loss[0][0] = 1.0;
    for (std::size_t z = 0; z < 10; ++z) p.loss[1][z] = 1.0;
    out.push_back(make_preset(std::move(p), Gibbs{10.0}, 100, "risks 0.05 and 0.5 under a Gibbs posterior"));
  }
  {
    auto p = uniform_outcomes("gibbs10", 20, 10);
    for (std::size_t w = 0; w < 10; ++w)
      for (std::size_t j = 0; j < 2 * w + 1; ++j) p.loss[w][(3 * w + j) % 20] = 1.0;
    out.push_back(make_preset(std::move(p), Gibbs{1.0, GibbsScale::n_scaled}, 100,
                              "ten hypotheses with risks 0.05..0.95, Gibbs at temperature n"));
  }
  {
    auto p = uniform_outcomes("realizable", 10, 5);
    for (std::size_t w = 1; w < 5; ++w)
      for (std::size_t z = 0; z < w; ++z) p.loss[w][z] = 1.0;
    out.push_back(make_preset(std::move(p), ErmSoftmax{0.01}, 50, "one zero-risk hypothesis, near-ERM posterior"));
  }
  {
    auto p = uniform_outcomes("graded", 10, 8);
    for (std::size_t w = 0; w < 8; ++w)
      for (std::size_t z = 0; z < 10; ++z) p.loss[w][z] = static_cast<double>((3 * w + 7 * z) % 5) / 4.0;
    out.push_back(make_preset(std::move(p), ErmSoftmax{0.05}, 100, "losses on a five-level grid in [0,1]"));
  }
  {
    DiscreteProblem p;
    p.name = "heavy-tailed";
    double total = 0.0;
    for (int k = 0; k <= 5; ++k) {
      p.outcomes.push_back(k);
      p.pmf.push_back(std::pow(0.25, k));
      total += p.pmf.back();
    }
    for (double& v : p.pmf) v /= total;
    p.hypotheses = {"w0", "w1", "w2"};
    p.prior = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    p.loss.assign(3, std::vector<double>(6));
    for (int k = 0; k <= 5; ++k) {
      p.loss[0][k] = std::ldexp(1.0, k);
      p.loss[1][k] = std::ldexp(1.0, k - 1);
      p.loss[2][k] = std::min(32.0, 3.0 * k);
    }
    p.loss_range = std::pair{0.0, 32.0};
    out.push_back(make_preset(std::move(p), Gibbs{1.0}, 200, "losses up to 32 with geometric tail probabilities"));
  }
  {
    auto p = uniform_outcomes("fifty", 100, 50);
    for (std::size_t w = 0; w < 50; ++w)
      for (std::size_t z = 0; z < 100; ++z)
        if ((z + 17 * w) % 100 < 5 + w) p.loss[w][z] = 1.0;
    out.push_back(make_preset(std::move(p), Gibbs{1.0, GibbsScale::n_scaled}, 200,
                              "fifty hypotheses with risks 0.05..0.54"));
  }
  return out;
}

std::optional<Preset> find_preset(const std::string& name) {
  for (auto& s : presets())
    if (s.problem.name == name) return s;
  return std::nullopt;
}

}  // namespace pacbayes
