#include "pacbayes/anytime.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pacbayes {

namespace {

double log_basel_scale() { return std::log(6.0) - 2.0 * std::log(std::numbers::pi); }

const std::vector<double>& weights_of(const BetaSchedule& s) { return std::get<CustomWeights>(s.rule).weights; }

double custom_weight(const BetaSchedule& s, std::uint64_t n) {
  const auto& w = weights_of(s);
  if (n > w.size()) throw std::out_of_range("custom schedule has no weight for n = " + std::to_string(n));
  return w[n - 1];
}

}  // namespace

BetaSchedule::BetaSchedule(ScheduleRule rule_in, double total) : rule(std::move(rule_in)), total_beta(total) {
  if (!(total_beta > 0.0 && total_beta < 1.0)) throw std::invalid_argument("total_beta must lie in (0,1)");
  if (const auto* c = std::get_if<CustomWeights>(&rule)) {
    if (c->weights.empty()) throw std::invalid_argument("custom schedule needs at least one weight");
    long double sum = 0.0L;
    for (double w : c->weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("custom weights must be finite and >= 0");
      sum += w;
    }
    if (sum > 1.0L) throw std::invalid_argument("custom weights sum to more than 1");
  }
}

double beta_at(const BetaSchedule& schedule, std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (std::holds_alternative<CustomWeights>(schedule.rule)) return custom_weight(schedule, n) * schedule.total_beta;
  return std::exp(-log_inv_beta_at(schedule, n));
}

double log_inv_beta_at(const BetaSchedule& schedule, std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const double x = static_cast<double>(n);
  const double base = -std::log(schedule.total_beta);
  if (std::holds_alternative<Basel>(schedule.rule)) return base - log_basel_scale() + 2.0 * std::log(x);
  if (std::holds_alternative<KaufmannKoolen>(schedule.rule)) {
    const double l6 = std::log(6.0 * x);
    return base + std::log(kk_normalizer) + std::log(x) + 2.0 * std::log(l6);
  }
  return base - std::log(custom_weight(schedule, n));
}

AnytimeError::AnytimeError(std::uint64_t n, const std::string& what)
    : std::runtime_error("bound failed at n = " + std::to_string(n) + ": " + what), n_(n) {}

std::vector<Certificate> make_anytime(const FixedNBound& bound, const BetaSchedule& schedule, std::uint64_t horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  std::vector<Certificate> out;
  out.reserve(horizon);
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    double lib = 0.0;
    try {
      lib = log_inv_beta_at(schedule, n);
      out.push_back(bound(n, lib));
    } catch (const std::exception& e) {
      throw AnytimeError(n, e.what());
    }
    out.back().params["schedule_log_inv_beta"] = lib;
  }
  return out;
}

BoundContext seeger_anytime_substitution(const BoundContext& ctx) {
  BoundContext out = ctx;
  out.xi = ConfidenceConstant::anytime;
  return out;
}

}  // namespace pacbayes
