#include "pacbayes/serialize.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pacbayes {

using nlohmann::json;

json number_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw std::invalid_argument("expected a number, got " + j.dump());
}

json to_json(const Certificate& c) {
  json params = json::object();
  for (const auto& [k, v] : c.params) params[k] = number_to_json(v);
  return {{"bound_id", c.bound_id}, {"value", number_to_json(c.value)}, {"informative", c.informative},
          {"beta", number_to_json(c.beta)}, {"n", c.n}, {"params", params}};
}

Certificate certificate_from_json(const json& j) {
  try {
    Certificate c;
    c.bound_id = j.at("bound_id").get<std::string>();
    c.value = number_from_json(j.at("value"));
    c.informative = j.at("informative").get<bool>();
    c.beta = number_from_json(j.at("beta"));
    c.n = j.at("n").get<std::uint64_t>();
    for (const auto& [k, v] : j.at("params").items()) c.params[k] = number_from_json(v);
    return c;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed certificate: ") + e.what());
  }
}

json to_json(const CoverageReport& r) {
  return {{"bound", r.bound},
          {"trials", r.trials},
          {"violations", r.violations},
          {"violation_rate", number_to_json(r.violation_rate)},
          {"mean_bound", number_to_json(r.mean_bound)},
          {"mean_pop_risk", number_to_json(r.mean_pop_risk)},
          {"mean_emp_risk", number_to_json(r.mean_emp_risk)},
          {"mean_kl_over_n", number_to_json(r.mean_kl_over_n)},
          {"mean_slack", number_to_json(r.mean_slack)},
          {"uninformative", r.uninformative},
          {"ci_lo", number_to_json(r.ci_lo)},
          {"ci_hi", number_to_json(r.ci_hi)},
          {"beta", number_to_json(r.beta)}};
}

CoverageReport coverage_report_from_json(const json& j) {
  try {
    CoverageReport r;
    r.bound = j.at("bound").get<std::string>();
    r.trials = j.at("trials").get<std::uint64_t>();
    r.violations = j.at("violations").get<std::uint64_t>();
    r.violation_rate = number_from_json(j.at("violation_rate"));
    r.mean_bound = number_from_json(j.at("mean_bound"));
    r.mean_pop_risk = number_from_json(j.at("mean_pop_risk"));
    r.mean_emp_risk = number_from_json(j.at("mean_emp_risk"));
    r.mean_kl_over_n = number_from_json(j.at("mean_kl_over_n"));
    r.mean_slack = number_from_json(j.at("mean_slack"));
    r.uninformative = j.at("uninformative").get<std::uint64_t>();
    r.ci_lo = number_from_json(j.at("ci_lo"));
    r.ci_hi = number_from_json(j.at("ci_hi"));
    r.beta = number_from_json(j.at("beta"));
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed coverage report: ") + e.what());
  }
}

json to_json(const TightnessRow& row) {
  return {{"bound", row.bound},
          {"certificate", number_to_json(row.certificate)},
          {"emp_risk", number_to_json(row.emp_risk)},
          {"dependency", number_to_json(row.dependency)},
          {"slack", number_to_json(row.slack)}};
}

json to_json(const PosteriorRule& rule) {
  if (const auto* g = std::get_if<Gibbs>(&rule))
    return {{"rule", "gibbs"}, {"lambda", g->lambda}, {"scale", g->scale == GibbsScale::n_scaled ? "n" : "unscaled"}};
  if (const auto* f = std::get_if<FixedPosterior>(&rule)) return {{"rule", "fixed"}, {"pmf", f->pmf}};
  return {{"rule", "erm"}, {"temperature", std::get<ErmSoftmax>(rule).temperature}};
}

PosteriorRule posterior_rule_from_json(const json& j) {
  try {
    const auto kind = j.at("rule").get<std::string>();
    if (kind == "gibbs") {
      Gibbs g;
      g.lambda = j.value("lambda", 1.0);
      const auto scale = j.value("scale", std::string("unscaled"));
      if (scale != "unscaled" && scale != "n") throw std::invalid_argument("posterior scale must be unscaled or n");
      g.scale = scale == "n" ? GibbsScale::n_scaled : GibbsScale::unscaled;
      if (!(g.lambda >= 0.0) || !std::isfinite(g.lambda)) throw std::invalid_argument("gibbs lambda must be >= 0");
      return g;
    }
    if (kind == "fixed") return FixedPosterior{j.at("pmf").get<std::vector<double>>()};
    if (kind == "erm") {
      const double t = j.value("temperature", 0.01);
      if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("erm temperature must be > 0");
      return ErmSoftmax{t};
    }
    throw std::invalid_argument("unknown posterior rule " + kind);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed posterior rule: ") + e.what());
  }
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  return out;
}

}  // namespace pacbayes
