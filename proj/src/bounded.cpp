#include "pacbayes/bounded.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pacbayes/specfun.hpp"

namespace pacbayes {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
// Argument of exp below which -exp(-1-A) stays a normal double.
constexpr double lambert_arg_limit = 700.0;

void put(std::map<std::string, double>& params, const std::string& key, double v) {
  if (std::isfinite(v)) params[key] = v;
}

Certificate finish(const BoundContext& ctx, const char* id, double raw,
                   std::map<std::string, double> params = {}) {
  Certificate cert;
  cert.bound_id = id;
  cert.params = std::move(params);
  cert.params["unclamped"] = raw;
  cert.value = std::clamp(raw, 0.0, 1.0);
  cert.informative = raw < 1.0;
  cert.beta = ctx.beta();
  cert.n = ctx.n;
  return cert;
}

double catoni_objective(double r, double budget, double lambda_over_n) {
  return -std::expm1(-lambda_over_n * r - budget) / -std::expm1(-lambda_over_n);
}

}  // namespace

Certificate mcallester(const BoundContext& ctx) {
  validate(ctx, true);
  const double nd = static_cast<double>(ctx.n);
  const double raw = ctx.emp_risk + std::sqrt((ctx.kl + log_xi(ctx) + ctx.log_inv_beta) / (2.0 * nd));
  return finish(ctx, "mcallester", raw, {{"budget", budget_xi(ctx)}});
}

Certificate seeger_langford(const BoundContext& ctx) {
  validate(ctx, true);
  const double budget = budget_xi(ctx);
  return finish(ctx, "seeger-langford", kl_inverse_upper(ctx.emp_risk, budget), {{"budget", budget}});
}

Certificate catoni_fixed(const BoundContext& ctx, double lambda, bool use_xi) {
  validate(ctx, true);
  if (!(lambda > 0.0) || std::isinf(lambda)) throw std::invalid_argument("lambda must be positive and finite");
  const double budget = use_xi ? budget_xi(ctx) : budget_plain(ctx);
  const double raw = catoni_objective(ctx.emp_risk, budget, lambda / static_cast<double>(ctx.n));
  return finish(ctx, "catoni-fixed", raw, {{"lambda", lambda}, {"budget", budget}});
}

Certificate catoni_uniform(const BoundContext& ctx) {
  validate(ctx, true);
  const double nd = static_cast<double>(ctx.n);
  const double budget = budget_xi(ctx);
  const double r = ctx.emp_risk;
  const auto best = minimize_scalar([&](double lambda) { return catoni_objective(r, budget, lambda / nd); },
                                    1e-3, 1e3 * nd, 1e-12);
  return finish(ctx, "catoni-uniform", best.min, {{"lambda", best.argmin}, {"budget", budget}});
}

double kappa(double c) {
  if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("c must lie in (0,1]");
  return 1.0 - c * (1.0 - std::log(c));
}

double fast_rate_objective(double r_hat, double budget, double c, double gamma) {
  if (!(gamma > 1.0)) throw std::invalid_argument("gamma must exceed 1");
  const double k = kappa(c);
  if (std::isinf(gamma)) return (c * budget + k == 0.0) ? c * r_hat : inf;
  const double log_ratio = -std::log1p(-1.0 / gamma);
  const double risk_term = r_hat == 0.0 ? 0.0 : c * gamma * log_ratio * r_hat;
  return risk_term + c * gamma * budget + k * gamma;
}

double optimal_gamma(double r_hat, double budget, double c) {
  if (!(r_hat >= 0.0)) throw std::invalid_argument("r_hat must be >= 0");
  if (!(budget >= 0.0)) throw std::invalid_argument("budget must be >= 0");
  const double k = kappa(c);
  if (r_hat == 0.0) return gamma_realizable;
  const double a = (c * budget + k) / (c * r_hat);
  if (a == 0.0) return inf;
  // v = -1 - W_{-1}(-exp(-1-a)) solves v - ln(1+v) = a
  double v;
  if (a <= lambert_arg_limit) {
    const double arg = -std::exp(-1.0 - a);
    if (!(arg >= -std::exp(-1.0) && arg < 0.0))
      throw std::domain_error("optimal_gamma: Lambert W argument outside [-1/e, 0)");
    v = -1.0 - lambert_w_m1(arg);
  } else {
    v = a + std::log1p(a);
  }
  // Newton polish in the log form removes the branch-point conditioning loss.
  for (int i = 0; i < 3 && v > 0.0; ++i) {
    const double g = v - std::log1p(v) - a;
    const double next = v - g * (1.0 + v) / v;
    if (!(next > 0.0)) break;
    v = next;
  }
  if (!(v > 0.0)) return inf;
  // huge v (vanishing r_hat) would round gamma to 1, outside the domain
  return std::max(1.0 + 1.0 / v, std::nextafter(1.0, 2.0));
}

double optimal_gamma_approx(double r_hat, double budget, double c) {
  if (!(r_hat > 0.0)) throw std::invalid_argument("r_hat must be > 0");
  const double a = (c * budget + kappa(c)) / (c * r_hat);
  return 1.0 + 1.0 / (std::sqrt(2.0 * a) + (5.0 / 6.0) * a);
}

Certificate fast_rate_strong(const BoundContext& ctx) {
  validate(ctx, true);
  const double r = ctx.emp_risk;
  const double budget = budget_xi(ctx);
  auto inner = [&](double c) { return fast_rate_objective(r, budget, c, optimal_gamma(r, budget, c)); };
  const auto best = minimize_scalar(inner, 1e-6, 1.0, 1e-12, 512);
  std::map<std::string, double> params{{"c", best.argmin}, {"budget", budget}};
  put(params, "gamma", optimal_gamma(r, budget, best.argmin));
  return finish(ctx, "fast-rate-strong", best.min, std::move(params));
}

Certificate fast_rate_simple(const BoundContext& ctx) {
  validate(ctx, true);
  const double budget = budget_xi(ctx);
  const double gamma = optimal_gamma(ctx.emp_risk, budget, 1.0);
  std::map<std::string, double> params{{"budget", budget}};
  put(params, "gamma", gamma);
  return finish(ctx, "fast-rate-simple", fast_rate_objective(ctx.emp_risk, budget, 1.0, gamma),
                std::move(params));
}

Certificate mixed_rate(const BoundContext& ctx) {
  validate(ctx, true);
  const double budget = budget_xi(ctx);
  std::map<std::string, double> params{{"budget", budget}};
  if (budget > 0.0) put(params, "gamma", 1.0 + std::sqrt(ctx.emp_risk / (2.0 * budget)));
  return finish(ctx, "mixed-rate", f_mixed_rate(ctx.emp_risk, budget), std::move(params));
}

double thiemann_objective(double r, double c, double lambda) {
  const double shrink = 1.0 - lambda / 2.0;
  return r / shrink + c / (lambda * shrink);
}

Certificate thiemann(const BoundContext& ctx) {
  validate(ctx, true);
  const double budget = budget_xi(ctx);
  const double r = ctx.emp_risk;
  const auto best = minimize_scalar([&](double l) { return thiemann_objective(r, budget, l); }, 1e-9,
                                    2.0 * (1.0 - 1e-9), 1e-12);
  return finish(ctx, "thiemann", best.min, {{"lambda", best.argmin}, {"budget", budget}});
}

Certificate rivasplata(const BoundContext& ctx) {
  validate(ctx, true);
  const double b = budget_xi(ctx);
  const double r = ctx.emp_risk;
  return finish(ctx, "rivasplata", r + b + std::sqrt(2.0 * r * b + b * b), {{"budget", b}});
}

double f_fast_rate(double r, double c) {
  return fast_rate_objective(r, c, 1.0, optimal_gamma(r, c, 1.0));
}

double f_mixed_rate(double r, double c) { return r + c + std::sqrt(2.0 * r * c); }

double f_thiemann(double r, double c) {
  return minimize_scalar([&](double l) { return thiemann_objective(r, c, l); }, 1e-9, 2.0 * (1.0 - 1e-9),
                         1e-12)
      .min;
}

DominanceReport dominance_check(const std::vector<std::pair<double, double>>& grid, double slack) {
  DominanceReport report;
  report.max_violation_fast = -inf;
  report.max_violation_mixed = -inf;
  for (const auto& [r, c] : grid) {
    if (!(r >= 0.0 && r <= 1.0) || !(c >= 0.0))
      throw std::invalid_argument("dominance grid requires r in [0,1] and c >= 0");
    const double th = f_thiemann(r, c);
    const double dfast = f_fast_rate(r, c) - th;
    const double dmixed = f_mixed_rate(r, c) - th;
    report.max_violation_fast = std::max(report.max_violation_fast, dfast);
    report.max_violation_mixed = std::max(report.max_violation_mixed, dmixed);
    ++report.points;
    if (dfast > slack || dmixed > slack) {
      ++report.violations;
      report.violating.emplace_back(r, c);
    }
  }
  return report;
}

}  // namespace pacbayes
