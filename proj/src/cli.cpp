#include "pacbayes/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "pacbayes/anytime.hpp"
#include "pacbayes/expression.hpp"
#include "pacbayes/lab.hpp"
#include "pacbayes/registry.hpp"
#include "pacbayes/serialize.hpp"

namespace pacbayes::cli {

namespace {

using nlohmann::json;

// A malformed flag value; what() is already "flag: reason".
struct FlagError : std::invalid_argument {
  FlagError(const std::string& flag, const std::string& reason) : std::invalid_argument(flag + ": " + reason) {}
};

struct Options {
  // context
  std::optional<std::uint64_t> n;
  std::optional<double> beta, log_inv_beta, kl, kl_bits, emp_risk;
  // tail family
  std::string family;
  std::optional<double> sigma2, c;
  double range_a = 0.0, range_b = 1.0;
  std::string cgf_expr, cgf_table;
  double cgf_domain = std::numeric_limits<double>::infinity();
  // bound parameters
  std::vector<std::string> bounds;
  std::optional<double> lambda;
  std::uint64_t k_max = 0;
  std::string xi = "bound";
  bool catoni_xi = false;
  std::optional<double> esssup, sigma2_n, var_empirical, var_predictable;
  // lab
  std::string preset, problem, posterior;
  std::optional<double> temperature;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  // anytime
  std::uint64_t horizon = 200;
  std::string schedule = "basel", weights, mode = "schedule";
  // sweep
  std::string field;
  double from = 0.0, to = 0.0;
  std::uint64_t steps = 11;
  bool log_spacing = false;
  // output
  std::optional<std::string> format;

  bool csv(const std::string& fallback) const { return format.value_or(fallback) == "csv"; }
};

void add_context(CLI::App* sub, Options& o, bool needs_emp) {
  sub->add_option("--n", o.n, "Sample size (>= 1)");
  auto* beta = sub->add_option("--beta", o.beta, "Confidence level beta in (0,1)");
  auto* lib = sub->add_option("--log-inv-beta", o.log_inv_beta, "ln(1/beta) in nats, for extreme confidence");
  beta->excludes(lib);
  auto* kl = sub->add_option("--kl", o.kl, "KL(posterior || prior) in nats");
  auto* bits = sub->add_option("--kl-bits", o.kl_bits, "KL(posterior || prior) in bits");
  kl->excludes(bits);
  if (needs_emp) sub->add_option("--emp-risk", o.emp_risk, "Empirical risk of the posterior, in loss units");
}

void add_family(CLI::App* sub, Options& o) {
  sub->add_option("--family", o.family, "Tail family: bounded, subgaussian, subgamma, subexponential, custom")
      ->check(CLI::IsMember({"bounded", "subgaussian", "subgamma", "subexponential", "custom"}));
  sub->add_option("--sigma2", o.sigma2, "Variance proxy of the tail family");
  sub->add_option("--c", o.c, "Scale c of the subgamma or subexponential family");
  sub->add_option("--range-a", o.range_a, "Lower end of the loss range (default 0)");
  sub->add_option("--range-b", o.range_b, "Upper end of the loss range (default 1)");
  sub->add_option("--cgf-expr", o.cgf_expr, "Custom psi(lambda) as an expression in lambda");
  sub->add_option("--cgf-domain", o.cgf_domain, "Right end of the custom psi domain (default inf)");
  sub->add_option("--cgf-table", o.cgf_table, "Custom psi as a two-column CSV (lambda, psi)");
}

void add_bound_params(CLI::App* sub, Options& o) {
  sub->add_option("--lambda", o.lambda, "Fixed lambda for catoni-fixed and cgf-fixed-lambda");
  sub->add_option("--k-max", o.k_max, "Grid cut-off of the chernoff analogue (default n)");
  sub->add_option("--xi", o.xi, "Confidence constant: bound, exact, anytime")
      ->check(CLI::IsMember({"bound", "exact", "anytime"}));
  sub->add_flag("--catoni-xi", o.catoni_xi, "Include ln xi in the catoni-fixed confidence term");
  sub->add_option("--esssup", o.esssup, "Essential supremum of the population risk, used when a cut-off event fails");
  sub->add_option("--sigma2-n", o.sigma2_n, "Second-moment proxy for second-moment");
  sub->add_option("--var-empirical", o.var_empirical, "Empirical variance process for martingale");
  sub->add_option("--var-predictable", o.var_predictable, "Predictable variance process for martingale");
}

void add_lab(CLI::App* sub, Options& o) {
  auto* preset = sub->add_option("--preset", o.preset, "Shipped problem preset");
  auto* problem = sub->add_option("--problem", o.problem, "Problem file (JSON)");
  preset->excludes(problem);
  sub->add_option("--posterior", o.posterior, "Posterior rule for a problem file: gibbs, gibbs-n, erm")
      ->check(CLI::IsMember({"gibbs", "gibbs-n", "erm"}));
  sub->add_option("--temperature", o.temperature, "Gibbs lambda or erm temperature");
  sub->add_option("--trials", o.trials, "Monte-Carlo trials (default 10000, anytime 2000)");
  sub->add_option("--seed", o.seed, "Master seed (falls back to PACBAYES_SEED, then 1)");
  sub->add_option("--threads", o.threads, "Worker thread cap (0 uses all cores)");
}

void add_format(CLI::App* sub, Options& o, const std::string& fallback) {
  sub->add_option("--format", o.format, "Output format: json or csv (default " + fallback + ")")
      ->check(CLI::IsMember({"json", "csv"}));
}

double finite(const std::optional<double>& v, const std::string& flag) {
  if (!v) throw FlagError(flag, "is required");
  if (!std::isfinite(*v)) throw FlagError(flag, "must be finite");
  return *v;
}

double log_inv_beta_of(const Options& o) {
  if (o.beta) {
    if (!(*o.beta > 0.0 && *o.beta < 1.0)) throw FlagError("--beta", "must lie in (0,1)");
    return -std::log(*o.beta);
  }
  if (o.log_inv_beta) {
    if (!(*o.log_inv_beta > 0.0) || !std::isfinite(*o.log_inv_beta))
      throw FlagError("--log-inv-beta", "must be positive and finite");
    return *o.log_inv_beta;
  }
  throw FlagError("--beta", "one of --beta or --log-inv-beta is required");
}

double kl_of(const Options& o) {
  if (o.kl_bits) {
    if (!(*o.kl_bits >= 0.0) || !std::isfinite(*o.kl_bits)) throw FlagError("--kl-bits", "must be finite and >= 0");
    return *o.kl_bits * std::log(2.0);
  }
  if (!o.kl) throw FlagError("--kl", "one of --kl or --kl-bits is required");
  if (!(*o.kl >= 0.0) || !std::isfinite(*o.kl)) throw FlagError("--kl", "must be finite and >= 0");
  return *o.kl;
}

std::uint64_t n_of(const Options& o) {
  if (!o.n) throw FlagError("--n", "is required");
  if (*o.n < 1) throw FlagError("--n", "must be >= 1");
  return *o.n;
}

std::pair<double, double> range_of(const Options& o) {
  if (!std::isfinite(o.range_a) || !std::isfinite(o.range_b) || !(o.range_a < o.range_b))
    throw FlagError("--range-a", "loss range requires finite --range-a < --range-b");
  return {o.range_a, o.range_b};
}

ConfidenceConstant xi_of(const Options& o) {
  if (o.xi == "exact") return ConfidenceConstant::maurer_exact;
  if (o.xi == "anytime") return ConfidenceConstant::anytime;
  return ConfidenceConstant::maurer_bound;
}

BoundContext context_of(const Options& o) {
  BoundContext ctx;
  ctx.n = n_of(o);
  ctx.log_inv_beta = log_inv_beta_of(o);
  ctx.kl = kl_of(o);
  ctx.emp_risk = finite(o.emp_risk, "--emp-risk");
  ctx.xi = xi_of(o);
  return ctx;
}

std::optional<TailFamily> family_of(const Options& o) {
  if (o.family.empty()) return std::nullopt;
  auto positive = [](const std::optional<double>& v, const std::string& flag) {
    if (!v) throw FlagError(flag, "is required by --family");
    if (!(*v > 0.0) || !std::isfinite(*v)) throw FlagError(flag, "must be positive and finite");
    return *v;
  };
  TailFamily fam;
  if (o.family == "bounded") {
    const auto [a, b] = range_of(o);
    fam = BoundedRange{a, b};
  } else if (o.family == "subgaussian") {
    fam = SubGaussian{positive(o.sigma2, "--sigma2")};
  } else if (o.family == "subgamma") {
    fam = SubGamma{positive(o.sigma2, "--sigma2"), positive(o.c, "--c")};
  } else if (o.family == "subexponential") {
    fam = SubExponential{positive(o.sigma2, "--sigma2"), positive(o.c, "--c")};
  } else {
    if (o.cgf_expr.empty() == o.cgf_table.empty())
      throw FlagError("--cgf-expr", "custom family needs exactly one of --cgf-expr or --cgf-table");
    try {
      if (!o.cgf_table.empty()) {
        fam = load_custom_cgf_csv(o.cgf_table);
      } else {
        if (!(o.cgf_domain > 0.0)) throw FlagError("--cgf-domain", "must be positive");
        fam = make_custom_cgf(compile_expression(o.cgf_expr), o.cgf_domain, o.cgf_expr);
      }
    } catch (const FlagError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw FlagError(o.cgf_table.empty() ? "--cgf-expr" : "--cgf-table", e.what());
    }
  }
  try {
    validate(fam);
  } catch (const std::invalid_argument& e) {
    throw FlagError("--family", e.what());
  }
  return fam;
}

BoundSpec spec_of(BoundId id, const Options& o, const std::optional<TailFamily>& fam) {
  BoundSpec spec(id);
  const std::string name(to_string(id));
  if (needs_family(id)) {
    if (!fam) throw FlagError("--family", name + " requires a tail family");
    spec.family = fam;
  }
  if (needs_lambda(id)) {
    if (!o.lambda) throw FlagError("--lambda", name + " requires --lambda");
    if (!(*o.lambda > 0.0) || !std::isfinite(*o.lambda)) throw FlagError("--lambda", "must be positive and finite");
    spec.lambda = *o.lambda;
  }
  spec.k_max = o.k_max;
  spec.xi = xi_of(o);
  spec.catoni_fixed_use_xi = o.catoni_xi;
  return spec;
}

BoundId bound_of(const std::string& text) {
  const auto id = parse_bound_id(text);
  if (!id) throw FlagError("--bound", "unknown bound '" + text + "'");
  return *id;
}

BoundInputs inputs_of(const BoundContext& ctx, const Options& o) {
  BoundInputs in;
  in.ctx = ctx;
  in.range = range_of(o);
  if (o.esssup) in.esssup = {finite(o.esssup, "--esssup"), true};
  if (o.sigma2_n) {
    if (!(*o.sigma2_n >= 1.0) || !std::isfinite(*o.sigma2_n)) throw FlagError("--sigma2-n", "must be finite and >= 1");
    in.sigma2_n = *o.sigma2_n;
  }
  if (o.var_empirical) {
    if (!(*o.var_empirical >= 0.0)) throw FlagError("--var-empirical", "must be >= 0");
    in.var_empirical = finite(o.var_empirical, "--var-empirical");
  }
  if (o.var_predictable) {
    if (!(*o.var_predictable >= 0.0)) throw FlagError("--var-predictable", "must be >= 0");
    in.var_predictable = finite(o.var_predictable, "--var-predictable");
  }
  return in;
}

// Validates flag-level requirements of spec against the inputs.
void require_inputs(const BoundSpec& spec, const BoundInputs& in) {
  if (spec.id == BoundId::second_moment && std::isnan(in.sigma2_n))
    throw FlagError("--sigma2-n", "second-moment requires --sigma2-n");
  if (spec.id == BoundId::martingale && std::isnan(in.var_empirical))
    throw FlagError("--var-empirical", "martingale requires --var-empirical");
  if (spec.id == BoundId::martingale && std::isnan(in.var_predictable))
    throw FlagError("--var-predictable", "martingale requires --var-predictable");
  if (is_bounded_module(spec.id)) {
    const auto [a, b] = *in.range;
    if (!(in.ctx.emp_risk >= a && in.ctx.emp_risk <= b))
      throw FlagError("--emp-risk", "must lie in the loss range [" + format_number(a) + ", " + format_number(b) + "]");
  }
}

json envelope(const std::string& command) { return {{"schema", schema_tag}, {"command", command}}; }

json context_json(const BoundContext& ctx) {
  return {{"n", ctx.n},
          {"beta", number_to_json(ctx.beta())},
          {"log_inv_beta", number_to_json(ctx.log_inv_beta)},
          {"kl", number_to_json(ctx.kl)},
          {"emp_risk", number_to_json(ctx.emp_risk)}};
}

std::uint64_t seed_of(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("PACBAYES_SEED")) {
    std::uint64_t v = 0;
    const std::string s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty())
      throw FlagError("PACBAYES_SEED", "must be an unsigned integer");
    return v;
  }
  return 1;
}

unsigned threads_of(const Options& o) {
  if (o.threads == 0) return std::max(1u, std::thread::hardware_concurrency());
  return o.threads;
}

struct LabSetup {
  DiscreteProblem problem;
  PosteriorRule rule;
  std::uint64_t n;
  std::vector<BoundSpec> preset_bounds;
};

LabSetup lab_of(const Options& o) {
  LabSetup s;
  if (!o.preset.empty()) {
    const auto p = find_preset(o.preset);
    if (!p) throw FlagError("--preset", "unknown preset '" + o.preset + "'");
    s.problem = p->problem;
    s.rule = p->rule;
    s.n = p->n;
    s.preset_bounds = p->bounds;
  } else if (!o.problem.empty()) {
    try {
      s.problem = load_problem(o.problem);
      std::ifstream in(o.problem);
      const json j = json::parse(in);
      s.rule = j.contains("posterior") ? posterior_rule_from_json(j.at("posterior")) : PosteriorRule{Gibbs{}};
    } catch (const std::exception& e) {
      throw FlagError("--problem", e.what());
    }
    s.n = 100;
  } else {
    throw FlagError("--preset", "one of --preset or --problem is required");
  }
  if (!o.posterior.empty()) {
    const double t = o.temperature.value_or(o.posterior == "erm" ? 0.01 : 1.0);
    if (!(t > 0.0 || (t == 0.0 && o.posterior != "erm")) || !std::isfinite(t))
      throw FlagError("--temperature", "must be finite and positive");
    if (o.posterior == "erm") s.rule = ErmSoftmax{t};
    else s.rule = Gibbs{t, o.posterior == "gibbs-n" ? GibbsScale::n_scaled : GibbsScale::unscaled};
  } else if (o.temperature) {
    throw FlagError("--temperature", "requires --posterior");
  }
  if (o.n) s.n = n_of(o);
  return s;
}

std::vector<BoundSpec> lab_specs(const Options& o, const LabSetup& s, double beta) {
  if (o.bounds.empty()) return s.preset_bounds.empty() ? default_specs(s.problem, s.n, beta) : s.preset_bounds;
  const auto fam = family_of(o);
  std::vector<BoundSpec> specs;
  for (const auto& b : o.bounds) {
    const BoundId id = bound_of(b);
    if ((is_bounded_module(id) || id == BoundId::randomized_subsample) && !s.problem.loss_range)
      throw FlagError("--bound", std::string(to_string(id)) + " requires a problem with a loss range");
    specs.push_back(spec_of(id, o, fam));
  }
  return specs;
}

double lab_beta(const Options& o) {
  if (!o.beta && !o.log_inv_beta) return 0.05;
  return std::exp(-log_inv_beta_of(o));
}

std::uint64_t trials_of(const Options& o, std::uint64_t fallback) {
  const std::uint64_t t = o.trials.value_or(fallback);
  if (t < 1) throw FlagError("--trials", "must be >= 1");
  return t;
}

// ---- commands ----

int cmd_certify(const Options& o, std::ostream& out) {
  if (o.bounds.size() != 1) throw FlagError("--bound", "certify takes exactly one --bound");
  const BoundContext ctx = context_of(o);
  const BoundSpec spec = spec_of(bound_of(o.bounds.front()), o, family_of(o));
  const BoundInputs in = inputs_of(ctx, o);
  require_inputs(spec, in);
  const Certificate cert = evaluate(spec, in);
  if (!o.csv("json")) {
    json j = envelope("certify");
    j["context"] = context_json(ctx);
    j["certificate"] = to_json(cert);
    out << j.dump(2) << '\n';
  } else {
    std::vector<std::string> head{"bound_id", "value", "informative", "n", "beta"};
    std::vector<std::string> row{cert.bound_id, format_number(cert.value), cert.informative ? "true" : "false",
                                 std::to_string(cert.n), format_number(cert.beta)};
    for (const auto& [k, v] : cert.params) {
      head.push_back("param:" + k);
      row.push_back(format_number(v));
    }
    out << csv_row(head) << '\n' << csv_row(row) << '\n';
  }
  return ok;
}

// Bounds against which seeger-langford is the tightest relaxation.
bool in_chain(BoundId id) { return is_bounded_module(id) && id != BoundId::seeger_langford; }

int cmd_compare(const Options& o, std::ostream& out) {
  const BoundContext ctx = context_of(o);
  const auto fam = family_of(o);
  const BoundInputs in = inputs_of(ctx, o);
  std::vector<Certificate> rows;
  for (BoundId id : all_bounds()) {
    if (needs_family(id) && !fam) continue;
    if (needs_lambda(id) && !o.lambda) continue;
    if (id == BoundId::second_moment && !o.sigma2_n) continue;
    if (id == BoundId::martingale && (!o.var_empirical || !o.var_predictable)) continue;
    const BoundSpec spec = spec_of(id, o, fam);
    require_inputs(spec, in);
    rows.push_back(evaluate(spec, in));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Certificate& a, const Certificate& b) {
    if (std::isnan(a.value) != std::isnan(b.value)) return std::isnan(b.value);
    return a.value < b.value;
  });
  constexpr double tol = 1e-8;
  double seeger = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : rows)
    if (r.bound_id == "seeger-langford") seeger = r.value;
  bool holds = true;
  double worst = 0.0;
  for (const auto& r : rows) {
    const auto id = parse_bound_id(r.bound_id);
    if (!id || !in_chain(*id)) continue;
    worst = std::max(worst, seeger - r.value);
    if (seeger > r.value + tol) holds = false;
  }
  if (!o.csv("json")) {
    json j = envelope("compare");
    j["context"] = context_json(ctx);
    j["rows"] = json::array();
    for (const auto& r : rows) j["rows"].push_back(to_json(r));
    j["dominance"] = {{"reference", "seeger-langford"},
                      {"holds", holds},
                      {"max_violation", number_to_json(worst)},
                      {"tolerance", tol}};
    out << j.dump(2) << '\n';
  } else {
    out << csv_row({"rank", "bound_id", "value", "informative", "seeger_dominates"}) << '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto id = parse_bound_id(rows[i].bound_id);
      const std::string dom = id && in_chain(*id) ? (seeger <= rows[i].value + tol ? "true" : "false") : "";
      out << csv_row({std::to_string(i + 1), rows[i].bound_id, format_number(rows[i].value),
                      rows[i].informative ? "true" : "false", dom})
          << '\n';
    }
  }
  return ok;
}

void write_reports(const std::string& command, const LabSetup& s, const std::vector<CoverageReport>& reports,
                   std::uint64_t seed, const Options& o, std::ostream& out, const json& extra = json::object()) {
  if (!o.csv("json")) {
    json j = envelope(command);
    j["problem"] = s.problem.name;
    j["posterior"] = to_json(s.rule);
    j["n"] = s.n;
    j["seed"] = seed;
    for (const auto& [k, v] : extra.items()) j[k] = v;
    j["reports"] = json::array();
    for (const auto& r : reports) j["reports"].push_back(to_json(r));
    out << j.dump(2) << '\n';
    return;
  }
  out << csv_row({"bound", "trials", "violations", "violation_rate", "ci_lo", "ci_hi", "beta", "mean_bound",
                  "mean_pop_risk", "mean_emp_risk", "mean_kl_over_n", "mean_slack", "uninformative"})
      << '\n';
  for (const auto& r : reports)
    out << csv_row({r.bound, std::to_string(r.trials), std::to_string(r.violations), format_number(r.violation_rate),
                    format_number(r.ci_lo), format_number(r.ci_hi), format_number(r.beta), format_number(r.mean_bound),
                    format_number(r.mean_pop_risk), format_number(r.mean_emp_risk), format_number(r.mean_kl_over_n),
                    format_number(r.mean_slack), std::to_string(r.uninformative)})
        << '\n';
}

int cmd_coverage(const Options& o, std::ostream& out) {
  const LabSetup s = lab_of(o);
  CoverageConfig cfg;
  cfg.n = s.n;
  cfg.beta = lab_beta(o);
  cfg.trials = trials_of(o, 10000);
  cfg.master_seed = seed_of(o);
  cfg.threads = threads_of(o);
  const auto specs = lab_specs(o, s, cfg.beta);
  write_reports("coverage", s, coverage_suite(s.problem, s.rule, specs, cfg), cfg.master_seed, o, out);
  return ok;
}

ScheduleRule schedule_of(const Options& o) {
  if (o.schedule == "basel") return Basel{};
  if (o.schedule == "kk") return KaufmannKoolen{};
  if (o.weights.empty()) throw FlagError("--weights", "custom schedule requires --weights");
  std::ifstream in(o.weights);
  if (!in) throw FlagError("--weights", "cannot open " + o.weights);
  std::vector<double> w;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      std::size_t used = 0;
      w.push_back(std::stod(line, &used));
    } catch (const std::exception&) {
      throw FlagError("--weights", "non-numeric line '" + line + "'");
    }
  }
  return CustomWeights{w};
}

AnytimeMode mode_of(const Options& o) {
  if (o.mode == "seeger") return AnytimeMode::seeger_substitution;
  if (o.mode == "unscheduled") return AnytimeMode::unscheduled;
  return AnytimeMode::schedule;
}

int cmd_anytime(const Options& o, std::ostream& out) {
  if (o.horizon < 1) throw FlagError("--horizon", "must be >= 1");
  if (o.bounds.size() > 1) throw FlagError("--bound", "anytime takes at most one --bound");
  const double beta = lab_beta(o);
  BetaSchedule schedule = [&] {
    try {
      return BetaSchedule(schedule_of(o), beta);
    } catch (const FlagError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw FlagError(o.schedule == "custom" ? "--weights" : "--beta", e.what());
    }
  }();
  const AnytimeMode mode = mode_of(o);

  if (!o.preset.empty() || !o.problem.empty()) {
    const LabSetup s = lab_of(o);
    AnytimeConfig cfg;
    cfg.horizon = o.horizon;
    cfg.beta = beta;
    cfg.mode = mode;
    cfg.rule = schedule.rule;
    cfg.trials = trials_of(o, 2000);
    cfg.master_seed = seed_of(o);
    cfg.threads = threads_of(o);
    std::vector<BoundSpec> specs;
    if (o.bounds.empty()) specs.emplace_back(BoundId::seeger_langford);
    else specs = lab_specs(o, s, beta);
    if (mode == AnytimeMode::seeger_substitution && !accepts_xi(specs.front().id))
      throw FlagError("--mode", "seeger substitution needs a bound with a xi term");
    const auto report = anytime_coverage_experiment(s.problem, s.rule, specs.front(), cfg);
    write_reports("anytime", s, {report}, cfg.master_seed, o, out,
                  {{"horizon", cfg.horizon}, {"schedule", o.schedule}, {"mode", o.mode}});
    return ok;
  }

  // Certificate trajectory at fixed kl and empirical risk.
  Options fixed = o;
  fixed.n = 1;
  if (!fixed.beta && !fixed.log_inv_beta) fixed.beta = beta;
  const BoundContext base = context_of(fixed);
  const BoundSpec spec = spec_of(o.bounds.empty() ? BoundId::seeger_langford : bound_of(o.bounds.front()), o, family_of(o));
  if (mode == AnytimeMode::seeger_substitution && !accepts_xi(spec.id))
    throw FlagError("--mode", "seeger substitution needs a bound with a xi term");
  require_inputs(spec, inputs_of(base, o));
  const FixedNBound bound = [&](std::uint64_t n, double lib) {
    BoundContext ctx = base;
    ctx.n = n;
    ctx.log_inv_beta = mode == AnytimeMode::schedule ? lib : -std::log(beta);
    BoundSpec sp = spec;
    if (mode == AnytimeMode::seeger_substitution) sp.xi = ConfidenceConstant::anytime;
    return evaluate(sp, inputs_of(ctx, o));
  };
  const auto certs = make_anytime(bound, schedule, o.horizon);
  if (!o.csv("json")) {
    json j = envelope("anytime");
    j["schedule"] = o.schedule;
    j["mode"] = o.mode;
    j["beta"] = number_to_json(beta);
    j["rows"] = json::array();
    for (const auto& c : certs) j["rows"].push_back(to_json(c));
    out << j.dump(2) << '\n';
  } else {
    out << csv_row({"n", "log_inv_beta_n", "value", "informative"}) << '\n';
    for (const auto& c : certs)
      out << csv_row({std::to_string(c.n), format_number(c.params.at("schedule_log_inv_beta")), format_number(c.value),
                      c.informative ? "true" : "false"})
          << '\n';
  }
  return ok;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  if (o.steps < 2) throw FlagError("--steps", "must be >= 2");
  if (!std::isfinite(o.from) || !std::isfinite(o.to)) throw FlagError("--from", "--from and --to must be finite");
  if (o.log_spacing && !(o.from > 0.0 && o.to > 0.0)) throw FlagError("--log", "needs positive --from and --to");
  const auto fam = family_of(o);
  std::vector<BoundSpec> specs;
  if (o.bounds.empty()) {
    for (BoundId id : bounded_bounds())
      if (!needs_lambda(id)) specs.push_back(spec_of(id, o, fam));
  } else {
    for (const auto& b : o.bounds) specs.push_back(spec_of(bound_of(b), o, fam));
  }
  // The swept field's own flag is not required.
  Options base = o;
  if (o.field == "n") base.n = 1;
  if (o.field == "kl") {
    base.kl = 0.0;
    base.kl_bits.reset();
  }
  if (o.field == "emp-risk") base.emp_risk = 0.0;
  if (o.field == "beta" || o.field == "log-inv-beta") {
    base.beta.reset();
    base.log_inv_beta = 1.0;
  }
  const BoundContext ctx0 = context_of(base);

  std::vector<std::string> head{o.field};
  for (const auto& s : specs) head.push_back(describe(s));
  std::vector<std::vector<std::string>> table;
  json rows = json::array();
  for (std::uint64_t i = 0; i < o.steps; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(o.steps - 1);
    const double x = o.log_spacing ? std::exp(std::log(o.from) + t * (std::log(o.to) - std::log(o.from)))
                                   : o.from + t * (o.to - o.from);
    BoundContext ctx = ctx0;
    double shown = x;
    if (o.field == "n") {
      if (!(x >= 1.0)) throw FlagError("--from", "n values must be >= 1");
      ctx.n = static_cast<std::uint64_t>(std::llround(x));
      shown = static_cast<double>(ctx.n);
    } else if (o.field == "kl") {
      if (!(x >= 0.0)) throw FlagError("--from", "kl values must be >= 0");
      ctx.kl = x;
    } else if (o.field == "emp-risk") {
      ctx.emp_risk = x;
    } else if (o.field == "beta") {
      if (!(x > 0.0 && x < 1.0)) throw FlagError("--from", "beta values must lie in (0,1)");
      ctx.log_inv_beta = -std::log(x);
    } else {
      if (!(x > 0.0)) throw FlagError("--from", "log-inv-beta values must be positive");
      ctx.log_inv_beta = x;
    }
    const BoundInputs in = inputs_of(ctx, o);
    std::vector<std::string> row{format_number(shown)};
    json jrow = {{"x", number_to_json(shown)}, {"values", json::array()}};
    for (const auto& s : specs) {
      require_inputs(s, in);
      const double v = evaluate(s, in).value;
      row.push_back(format_number(v));
      jrow["values"].push_back(number_to_json(v));
    }
    table.push_back(row);
    rows.push_back(jrow);
  }
  if (o.csv("csv")) {
    out << csv_row(head) << '\n';
    for (const auto& r : table) out << csv_row(r) << '\n';
  } else {
    json j = envelope("sweep");
    j["field"] = o.field;
    j["bounds"] = std::vector<std::string>(head.begin() + 1, head.end());
    j["rows"] = rows;
    out << j.dump(2) << '\n';
  }
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"PAC-Bayes risk certificates and Monte-Carlo coverage lab", "pacbayes"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Print help for every command");

  auto* certify = app.add_subcommand("certify", "Evaluate one bound on one context");
  add_context(certify, o, true);
  certify->add_option("--bound", o.bounds, "Bound id")->required();
  add_family(certify, o);
  add_bound_params(certify, o);
  add_format(certify, o, "json");

  auto* compare = app.add_subcommand("compare", "Evaluate every applicable bound on one context");
  add_context(compare, o, true);
  add_family(compare, o);
  add_bound_params(compare, o);
  add_format(compare, o, "json");

  auto* coverage = app.add_subcommand("coverage", "Monte-Carlo coverage of bounds on a discrete problem");
  add_lab(coverage, o);
  coverage->add_option("--n", o.n, "Sample size (default from the preset, else 100)");
  auto* cb = coverage->add_option("--beta", o.beta, "Confidence level beta in (0,1) (default 0.05)");
  cb->excludes(coverage->add_option("--log-inv-beta", o.log_inv_beta, "ln(1/beta) in nats"));
  coverage->add_option("--bound", o.bounds, "Bound id, repeatable (default: every valid bound)");
  add_family(coverage, o);
  add_bound_params(coverage, o);
  add_format(coverage, o, "json");

  auto* anytime = app.add_subcommand("anytime", "Apply a confidence schedule over a horizon");
  add_context(anytime, o, true);
  add_lab(anytime, o);
  anytime->add_option("--bound", o.bounds, "Bound id (default seeger-langford)");
  anytime->add_option("--horizon", o.horizon, "Largest sample size n");
  anytime->add_option("--schedule", o.schedule, "Schedule: basel, kk, custom")
      ->check(CLI::IsMember({"basel", "kk", "custom"}));
  anytime->add_option("--weights", o.weights, "Custom schedule weights, one per line");
  anytime->add_option("--mode", o.mode, "schedule, seeger (sqrt(pi(n+1)) substitution) or unscheduled")
      ->check(CLI::IsMember({"schedule", "seeger", "unscheduled"}));
  add_family(anytime, o);
  add_bound_params(anytime, o);
  add_format(anytime, o, "json");

  auto* sweep = app.add_subcommand("sweep", "Vary one context field over a range");
  add_context(sweep, o, true);
  sweep->add_option("--field", o.field, "Swept field: n, kl, emp-risk, beta, log-inv-beta")
      ->required()
      ->check(CLI::IsMember({"n", "kl", "emp-risk", "beta", "log-inv-beta"}));
  sweep->add_option("--from", o.from, "First value")->required();
  sweep->add_option("--to", o.to, "Last value")->required();
  sweep->add_option("--steps", o.steps, "Number of points (>= 2)");
  sweep->add_flag("--log", o.log_spacing, "Geometric spacing");
  sweep->add_option("--bound", o.bounds, "Bound id, repeatable (default: the [0,1] bounds)");
  add_family(sweep, o);
  add_bound_params(sweep, o);
  add_format(sweep, o, "csv");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::CallForHelp&) {
    const auto selected = app.get_subcommands();
    out << (selected.empty() ? app.help("", CLI::AppFormatMode::All) : selected.front()->help());
    return ok;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: " << msg << '\n';
    return validation_error;
  }
  try {
    if (certify->parsed()) return cmd_certify(o, out);
    if (compare->parsed()) return cmd_compare(o, out);
    if (coverage->parsed()) return cmd_coverage(o, out);
    if (anytime->parsed()) return cmd_anytime(o, out);
    return cmd_sweep(o, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return validation_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return runtime_error;
  }
}

}  // namespace pacbayes::cli
