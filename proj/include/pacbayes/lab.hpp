#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pacbayes/anytime.hpp"
#include "pacbayes/registry.hpp"

namespace pacbayes {

struct DiscreteProblem {
  std::string name;
  std::vector<double> outcomes;  // outcome labels, informational
  std::vector<double> pmf;
  std::vector<std::string> hypotheses;
  std::vector<std::vector<double>> loss;  // loss[w][z]
  std::vector<double> prior;
  std::optional<std::pair<double, double>> loss_range;

  std::size_t num_outcomes() const { return pmf.size(); }
  std::size_t num_hypotheses() const { return prior.size(); }
};

// Throws std::invalid_argument naming the first broken invariant.
void validate(const DiscreteProblem& problem);

DiscreteProblem load_problem(const std::string& path);
void save_problem(const DiscreteProblem& problem, const std::string& path);

enum class GibbsScale { unscaled, n_scaled };

// P(w) proportional to Q(w) exp(-t r(w,S)) with t = lambda, or lambda n when n-scaled.
struct Gibbs {
  double lambda = 1.0;
  GibbsScale scale = GibbsScale::unscaled;
};
struct FixedPosterior {
  std::vector<double> pmf;
};
// P(w) proportional to 1[Q(w) > 0] exp(-r(w,S) / temperature).
struct ErmSoftmax {
  double temperature = 0.01;
};
using PosteriorRule = std::variant<Gibbs, FixedPosterior, ErmSoftmax>;

// Outcome indices into problem.pmf.
using Sample = std::vector<std::uint32_t>;

std::vector<double> empirical_risks(const DiscreteProblem& problem, const Sample& sample);
std::vector<double> population_risks(const DiscreteProblem& problem);

std::vector<double> gibbs_posterior(const DiscreteProblem& problem, const Sample& sample, double temperature);
std::vector<double> posterior_for(const DiscreteProblem& problem, const Sample& sample, const PosteriorRule& rule);

struct ExactQuantities {
  double pop_risk = 0.0;
  double emp_risk = 0.0;
  double kl = 0.0;
  double second_empirical = 0.0;   // E^S (1/n) sum_i l(W,Z_i)^2
  double second_population = 0.0;  // E^S E l(W,Z')^2
  double sigma2_n = 0.0;           // second_empirical + 2 second_population + 1
  double var_empirical = 0.0;      // E^S sum_i (R(W) - l(W,Z_i))^2
  double var_predictable = 0.0;    // E^S n Var l(W,Z)
  double esssup = 0.0;             // max_w R(w), bounds E^S R(W) for every posterior
};

// Throws std::invalid_argument when the posterior is not absolutely continuous
// with respect to the prior or is not a pmf.
ExactQuantities exact_quantities(const DiscreteProblem& problem, const Sample& sample, const std::vector<double>& posterior);

BoundInputs lab_inputs(const DiscreteProblem& problem, const ExactQuantities& q, std::uint64_t n, double log_inv_beta);

// Inverse-CDF draws on 53-bit uniforms from mt19937_64(seed).
Sample draw_dataset(const DiscreteProblem& problem, std::uint64_t n, std::uint64_t seed);

// splitmix64 finaliser of (master, trial); independent of execution order.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial);

inline constexpr double wilson_z99 = 2.5758293035489004;
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = wilson_z99);

struct CoverageReport {
  std::string bound;
  std::uint64_t trials = 0;
  std::uint64_t violations = 0;
  double violation_rate = 0.0;
  double mean_bound = 0.0;
  double mean_pop_risk = 0.0;
  double mean_emp_risk = 0.0;
  double mean_kl_over_n = 0.0;
  double mean_slack = 0.0;  // certificate - pop_risk
  std::uint64_t uninformative = 0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double beta = 0.0;

  bool operator==(const CoverageReport&) const = default;
};

struct CoverageConfig {
  std::uint64_t n = 100;
  double beta = 0.05;
  std::uint64_t trials = 10000;
  std::uint64_t master_seed = 1;
  unsigned threads = 1;
};

// All specs share the datasets and posteriors of each trial.
std::vector<CoverageReport> coverage_suite(const DiscreteProblem& problem, const PosteriorRule& rule,
                                           const std::vector<BoundSpec>& specs, const CoverageConfig& config);
CoverageReport coverage_experiment(const DiscreteProblem& problem, const PosteriorRule& rule, const BoundSpec& spec,
                                   const CoverageConfig& config);

enum class AnytimeMode {
  schedule,              // ln(1/beta_n) from the schedule at every prefix
  seeger_substitution,   // xi replaced by sqrt(pi(n+1)) at the total beta
  unscheduled,           // total beta at every prefix, no union cost
};

struct AnytimeConfig {
  std::uint64_t horizon = 200;
  double beta = 0.05;
  AnytimeMode mode = AnytimeMode::schedule;
  ScheduleRule rule = Basel{};
  std::uint64_t trials = 2000;
  std::uint64_t master_seed = 1;
  unsigned threads = 1;
};

// A trial violates when any prefix n = 1..horizon violates its certificate.
// mean_* fields refer to the final prefix n = horizon.
CoverageReport anytime_coverage_experiment(const DiscreteProblem& problem, const PosteriorRule& rule,
                                           const BoundSpec& spec, const AnytimeConfig& config);

enum class OptimizedBound { catoni_uniform, fast_rate_simple };

struct AlternatingResult {
  std::vector<double> posterior;
  double parameter = 0.0;  // lambda or gamma
  std::vector<double> trace;
  std::uint64_t iterations = 0;
  bool converged = false;
  Certificate certificate;
};

// Alternates the Gibbs posterior at the current temperature with the
// parameter update; the trace is non-increasing. Losses must lie in [0,1].
AlternatingResult alternating_optimize(const DiscreteProblem& problem, const Sample& sample, OptimizedBound bound,
                                       double beta, std::uint64_t max_iters = 100, double tol = 1e-10);

// Gibbs posterior minimising the mcallester certificate over the temperature.
AlternatingResult mcallester_optimized(const DiscreteProblem& problem, const Sample& sample, double beta);

struct TightnessRow {
  std::string bound;
  double certificate = 0.0;
  double emp_risk = 0.0;
  double dependency = 0.0;  // kl / n
  double slack = 0.0;
};

std::vector<TightnessRow> tightness_table(const DiscreteProblem& problem, const PosteriorRule& rule,
                                          const std::vector<BoundSpec>& specs, const CoverageConfig& config);

struct Preset {
  DiscreteProblem problem;
  PosteriorRule rule;
  std::uint64_t n = 100;
  std::vector<BoundSpec> bounds;
  std::string description;
};

// Shipped scenarios; each bound listed is valid for its problem.
std::vector<Preset> presets();
std::optional<Preset> find_preset(const std::string& name);
// Default valid bound list for a problem with the given range.
std::vector<BoundSpec> default_specs(const DiscreteProblem& problem, std::uint64_t n, double beta);

// Catoni at a lambda fitted to the realised sample with no union cost; a
// negative control that is not a valid certificate.
Certificate data_dependent_catoni(const BoundContext& ctx);

}  // namespace pacbayes
