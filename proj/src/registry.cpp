#include "pacbayes/registry.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "pacbayes/bounded.hpp"

namespace pacbayes {

namespace {

struct Entry {
  BoundId id;
  std::string_view name;
  bool bounded;
  bool family;
  bool lambda;
  bool xi;
};

constexpr std::array<Entry, 18> entries{{
    {BoundId::mcallester, "mcallester", true, false, false, true},
    {BoundId::seeger_langford, "seeger-langford", true, false, false, true},
    {BoundId::catoni_fixed, "catoni-fixed", true, false, true, false},
    {BoundId::catoni_uniform, "catoni-uniform", true, false, false, true},
    {BoundId::fast_rate_strong, "fast-rate-strong", true, false, false, true},
    {BoundId::fast_rate_simple, "fast-rate-simple", true, false, false, true},
    {BoundId::mixed_rate, "mixed-rate", true, false, false, true},
    {BoundId::thiemann, "thiemann", true, false, false, true},
    {BoundId::rivasplata, "rivasplata", true, false, false, true},
    {BoundId::cgf_fixed_lambda, "cgf-fixed-lambda", false, true, true, false},
    {BoundId::chernoff, "chernoff", false, true, false, false},
    {BoundId::chernoff_menu, "chernoff-menu", false, true, false, false},
    {BoundId::chernoff_no_cutoff, "chernoff-no-cutoff", false, true, false, false},
    {BoundId::chernoff_linearized, "chernoff-linearized", false, true, false, false},
    {BoundId::chernoff_loglog, "chernoff-loglog", false, true, false, false},
    {BoundId::second_moment, "second-moment", false, false, false, false},
    {BoundId::martingale, "martingale", false, false, false, false},
    {BoundId::randomized_subsample, "randomized-subsample", false, false, false, false},
}};

const Entry& entry(BoundId id) {
  for (const auto& e : entries)
    if (e.id == id) return e;
  throw std::logic_error("unregistered bound");
}

const TailFamily& require_family(const BoundSpec& spec) {
  if (!spec.family) throw std::invalid_argument(std::string(to_string(spec.id)) + " requires a tail family");
  return *spec.family;
}

double require_lambda(const BoundSpec& spec) {
  if (std::isnan(spec.lambda)) throw std::invalid_argument(std::string(to_string(spec.id)) + " requires lambda");
  return spec.lambda;
}

const std::pair<double, double>& require_range(const BoundSpec& spec, const BoundInputs& in) {
  if (!in.range) throw std::invalid_argument(std::string(to_string(spec.id)) + " requires a bounded loss range");
  return *in.range;
}

Certificate evaluate_bounded(const BoundSpec& spec, BoundContext ctx) {
  ctx.xi = spec.xi;
  switch (spec.id) {
    case BoundId::mcallester: return mcallester(ctx);
    case BoundId::seeger_langford: return seeger_langford(ctx);
    case BoundId::catoni_fixed: return catoni_fixed(ctx, require_lambda(spec), spec.catoni_fixed_use_xi);
    case BoundId::catoni_uniform: return catoni_uniform(ctx);
    case BoundId::fast_rate_strong: return fast_rate_strong(ctx);
    case BoundId::fast_rate_simple: return fast_rate_simple(ctx);
    case BoundId::mixed_rate: return mixed_rate(ctx);
    case BoundId::thiemann: return thiemann(ctx);
    case BoundId::rivasplata: return rivasplata(ctx);
    default: throw std::logic_error("not a bounded-module bound");
  }
}

}  // namespace

const std::vector<BoundId>& all_bounds() {
  static const std::vector<BoundId> ids = [] {
    std::vector<BoundId> out;
    for (const auto& e : entries) out.push_back(e.id);
    return out;
  }();
  return ids;
}

const std::vector<BoundId>& bounded_bounds() {
  static const std::vector<BoundId> ids = [] {
    std::vector<BoundId> out;
    for (const auto& e : entries)
      if (e.bounded) out.push_back(e.id);
    return out;
  }();
  return ids;
}

std::string_view to_string(BoundId id) { return entry(id).name; }

std::optional<BoundId> parse_bound_id(std::string_view text) {
  for (const auto& e : entries)
    if (e.name == text) return e.id;
  return std::nullopt;
}

bool is_bounded_module(BoundId id) { return entry(id).bounded; }
bool needs_family(BoundId id) { return entry(id).family; }
bool needs_lambda(BoundId id) { return entry(id).lambda; }
bool accepts_xi(BoundId id) { return entry(id).xi; }

std::string describe(const BoundSpec& spec) {
  std::string out(to_string(spec.id));
  if (spec.family) out += "[" + family_name(*spec.family) + "]";
  if (needs_lambda(spec.id) && !std::isnan(spec.lambda)) out += "(lambda=" + std::to_string(spec.lambda) + ")";
  if (spec.xi == ConfidenceConstant::anytime && accepts_xi(spec.id)) out += "{anytime}";
  return out;
}

Certificate evaluate(const BoundSpec& spec, const BoundInputs& in) {
  const BoundContext& ctx = in.ctx;
  if (is_bounded_module(spec.id)) {
    const auto [a, b] = require_range(spec, in);
    if (!(a < b)) throw std::invalid_argument("loss range requires a < b");
    if (a == 0.0 && b == 1.0) return evaluate_bounded(spec, ctx);
    BoundContext unit = ctx;
    unit.emp_risk = (ctx.emp_risk - a) / (b - a);
    Certificate cert = evaluate_bounded(spec, unit);
    cert.value = a + (b - a) * cert.value;
    cert.params["range_a"] = a;
    cert.params["range_b"] = b;
    return cert;
  }
  switch (spec.id) {
    case BoundId::cgf_fixed_lambda: return cgf_fixed_lambda(ctx, require_family(spec), require_lambda(spec));
    case BoundId::chernoff: return chernoff_analogue(ctx, require_family(spec), in.esssup, spec.k_max);
    case BoundId::chernoff_menu: return chernoff_tail_menu(ctx, require_family(spec), in.esssup);
    case BoundId::chernoff_no_cutoff: return chernoff_no_cutoff(ctx, require_family(spec));
    case BoundId::chernoff_linearized: return chernoff_linearized(ctx, require_family(spec));
    case BoundId::chernoff_loglog: return chernoff_loglog(ctx, require_family(spec), in.esssup);
    case BoundId::second_moment:
      if (std::isnan(in.sigma2_n)) throw std::invalid_argument("second-moment requires sigma2_n");
      return second_moment_bound({ctx, in.sigma2_n}, in.esssup);
    case BoundId::martingale: {
      if (std::isnan(in.var_empirical) || std::isnan(in.var_predictable))
        throw std::invalid_argument("martingale requires var_empirical and var_predictable");
      return martingale_bound({ctx.n, ctx.log_inv_beta, ctx.kl, in.var_empirical, in.var_predictable}, in.esssup);
    }
    case BoundId::randomized_subsample: {
      const auto [a, b] = require_range(spec, in);
      return randomized_subsample_bound(ctx, a, b);
    }
    default: throw std::logic_error("unhandled bound");
  }
}

Certificate evaluate_risk(const BoundSpec& spec, const BoundInputs& in) {
  Certificate cert = evaluate(spec, in);
  if (spec.id == BoundId::martingale && cert.params.count("event") && cert.params.at("event") == 1.0) {
    cert.params["martingale_raw"] = cert.value;
    cert.value = in.ctx.emp_risk + cert.value / static_cast<double>(in.ctx.n);
  }
  return cert;
}

}  // namespace pacbayes
