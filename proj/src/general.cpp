#include "pacbayes/general.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pacbayes {

namespace {

constexpr double two_over_root6 = 0.81649658092772603;  // 2 / sqrt(6)

Certificate make(const BoundContext& ctx, const char* id, double value, std::map<std::string, double> params = {}) {
  Certificate cert;
  cert.bound_id = id;
  cert.value = value;
  cert.params = std::move(params);
  cert.informative = std::isfinite(value);
  cert.beta = ctx.beta();
  cert.n = ctx.n;
  return cert;
}

Certificate fallback(const BoundContext& ctx, const char* id, const EssSupInfo& esssup) {
  Certificate cert = make(ctx, id, esssup.value, {{"event", 0.0}});
  cert.informative = esssup.known && std::isfinite(esssup.value);
  return cert;
}

void check_family(const TailFamily& family) { validate(family); }

double nd(std::uint64_t n) { return static_cast<double>(n); }

}  // namespace

Certificate cgf_fixed_lambda(const BoundContext& ctx, const TailFamily& family, double lambda) {
  validate(ctx, false);
  check_family(family);
  if (!(lambda > 0.0)) throw std::domain_error("lambda must be positive");
  const double c = budget_plain(ctx);
  return make(ctx, "cgf-fixed-lambda", ctx.emp_risk + (c + psi(family, lambda)) / lambda, {{"lambda", lambda}});
}

double chernoff_log_term(const BoundContext& ctx, std::uint64_t k_max) {
  return 1.0 + std::log(nd(k_max)) + ctx.log_inv_beta;
}

double no_cutoff_log_term(const BoundContext& ctx) {
  return 1.0 + 2.0 * std::log(std::numbers::pi) + 2.0 * std::log1p(ctx.kl) - std::log(6.0) + ctx.log_inv_beta;
}

double linearized_log_term(const BoundContext& ctx) {
  return std::log(10.0) + 1.0 + 2.0 * std::log(std::numbers::pi) + ctx.log_inv_beta;
}

double loglog_log_term(const BoundContext& ctx) {
  return std::log(2.0 + std::log(nd(ctx.n))) + ctx.log_inv_beta;
}

double chernoff_budget(const BoundContext& ctx, std::uint64_t k_max) {
  return (ctx.kl + chernoff_log_term(ctx, k_max)) / nd(ctx.n);
}

double no_cutoff_budget(const BoundContext& ctx) { return (ctx.kl + no_cutoff_log_term(ctx)) / nd(ctx.n); }

double linearized_budget(const BoundContext& ctx) { return (1.1 * ctx.kl + linearized_log_term(ctx)) / nd(ctx.n); }

double loglog_budget(const BoundContext& ctx) {
  return (std::numbers::e * std::max(ctx.kl, 1.0) + loglog_log_term(ctx)) / nd(ctx.n);
}

Certificate chernoff_analogue(const BoundContext& ctx, const TailFamily& family, const EssSupInfo& esssup,
                              std::uint64_t k_max) {
  validate(ctx, false);
  check_family(family);
  if (k_max == 0) k_max = ctx.n;
  if (!(ctx.kl <= nd(k_max))) return fallback(ctx, "chernoff", esssup);
  const double y = chernoff_budget(ctx, k_max);
  return make(ctx, "chernoff", ctx.emp_risk + psi_star_inverse(family, y),
              {{"budget", y}, {"k_max", nd(k_max)}, {"event", 1.0}});
}

Certificate chernoff_tail_menu(const BoundContext& ctx, const TailFamily& family, const EssSupInfo& esssup) {
  validate(ctx, false);
  check_family(family);
  const double n = nd(ctx.n);
  const double y = (ctx.kl + 1.0 + std::log(n) + ctx.log_inv_beta) / n;  // (kl + ln(en/beta)) / n
  if (const auto* f = std::get_if<BoundedRange>(&family)) {
    // k_max = 2n: past kl = 2n the gap exceeds b - a, so no fallback is needed
    const double half = chernoff_budget(ctx, 2 * ctx.n) / 2.0;
    return make(ctx, "chernoff-menu", ctx.emp_risk + (f->b - f->a) * std::sqrt(half),
                {{"budget", half}, {"k_max", 2.0 * n}});
  }
  if (std::holds_alternative<SubGaussian>(family) || std::holds_alternative<SubGamma>(family)) {
    Certificate cert = chernoff_analogue(ctx, family, esssup);
    cert.bound_id = "chernoff-menu";
    return cert;
  }
  if (const auto* f = std::get_if<SubExponential>(&family)) {
    if (!(ctx.kl <= n)) return fallback(ctx, "chernoff-menu", esssup);
    const bool on_f = y <= f->sigma2 / (2.0 * f->c * f->c);
    const double gap = on_f ? std::sqrt(2.0 * f->sigma2 * y) : f->c * y + std::max(y, f->sigma2 / (2.0 * f->c));
    return make(ctx, "chernoff-menu", ctx.emp_risk + gap,
                {{"budget", y}, {"event", 1.0}, {"event_f", on_f ? 1.0 : 0.0}});
  }
  throw std::invalid_argument("chernoff_tail_menu does not accept custom families");
}

Certificate chernoff_no_cutoff(const BoundContext& ctx, const TailFamily& family) {
  validate(ctx, false);
  check_family(family);
  const double y = no_cutoff_budget(ctx);
  return make(ctx, "chernoff-no-cutoff", ctx.emp_risk + psi_star_inverse(family, y), {{"budget", y}});
}

Certificate chernoff_linearized(const BoundContext& ctx, const TailFamily& family) {
  validate(ctx, false);
  check_family(family);
  const double y = linearized_budget(ctx);
  return make(ctx, "chernoff-linearized", ctx.emp_risk + psi_star_inverse(family, y), {{"budget", y}});
}

Certificate chernoff_loglog(const BoundContext& ctx, const TailFamily& family, const EssSupInfo& esssup) {
  validate(ctx, false);
  check_family(family);
  if (!(ctx.kl <= nd(ctx.n))) return fallback(ctx, "chernoff-loglog", esssup);
  const double y = loglog_budget(ctx);
  return make(ctx, "chernoff-loglog", ctx.emp_risk + psi_star_inverse(family, y), {{"budget", y}, {"event", 1.0}});
}

double log_xi_prime(std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const double x = nd(n);
  return std::log(2.0) + 1.0 + std::log(x) + 2.0 * std::log(x + 1.0) + std::log1p(std::log(x));
}

Certificate second_moment_bound(const SecondMomentContext& smc, const EssSupInfo& esssup) {
  const auto& ctx = smc.ctx;
  validate(ctx, false);
  if (!(smc.sigma2_n >= 1.0) || std::isinf(smc.sigma2_n)) throw std::invalid_argument("sigma2_n must be >= 1");
  const double n = nd(ctx.n);
  if (!(smc.sigma2_n * ctx.kl <= n)) return fallback(ctx, "second-moment", esssup);
  const double y = (ctx.kl + log_xi_prime(ctx.n) + ctx.log_inv_beta) / n;
  return make(ctx, "second-moment", ctx.emp_risk + two_over_root6 * std::sqrt(smc.sigma2_n * y),
              {{"budget", y}, {"sigma2_n", smc.sigma2_n}, {"event", 1.0}});
}

Certificate martingale_bound(const MartingaleContext& mc, const EssSupInfo& esssup) {
  BoundContext ctx;
  ctx.n = mc.n;
  ctx.log_inv_beta = mc.log_inv_beta;
  ctx.kl = mc.kl;
  validate(ctx, false);
  if (!(mc.var_empirical >= 0.0) || !(mc.var_predictable >= 0.0))
    throw std::invalid_argument("variance processes must be non-negative");
  const double v = mc.var_empirical + 2.0 * mc.var_predictable + 1.0;
  const double n = nd(mc.n);
  if (!(v * mc.kl <= n * n)) return fallback(ctx, "martingale", esssup);
  const double z = mc.kl + log_xi_prime(mc.n) + mc.log_inv_beta;
  return make(ctx, "martingale", two_over_root6 * std::sqrt(v * z), {{"variance", v}, {"event", 1.0}});
}

Certificate randomized_subsample_bound(const BoundContext& ctx, double a, double b) {
  validate(ctx, false);
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("range requires finite a < b");
  const double n = nd(ctx.n);
  const double w2 = (b - a) * (b - a);
  const double y = (ctx.kl + 1.0 + std::log(n) + ctx.log_inv_beta) / n;
  const double first = std::sqrt(2.0 * w2 * y);
  const double second = std::sqrt(w2 * (std::log(4.0) + ctx.log_inv_beta) / (2.0 * n));
  return make(ctx, "randomized-subsample", ctx.emp_risk + first + second, {{"budget", y}});
}

std::uint64_t k_max_log_dn(double d, std::uint64_t n) {
  if (!(d >= 1.0)) throw std::invalid_argument("dimension must be >= 1");
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(std::log(d * nd(n)))));
}

std::uint64_t k_max_log_dpn(double d, double p, std::uint64_t n) {
  if (!(d >= 1.0) || !(p >= 1.0)) throw std::invalid_argument("dimensions must be >= 1");
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(std::log(d * p * nd(n)))));
}

}  // namespace pacbayes
