#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "pacbayes/certificate.hpp"
#include "pacbayes/lab.hpp"

namespace pacbayes {

inline constexpr const char* schema_tag = "pacbayes/1";

// Finite doubles become JSON numbers (shortest round-trip form); inf, -inf
// and nan become the strings "inf", "-inf", "nan".
nlohmann::json number_to_json(double x);
// Throws std::invalid_argument on anything other than a number or those strings.
double number_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Certificate& cert);
Certificate certificate_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CoverageReport& report);
CoverageReport coverage_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TightnessRow& row);

// {"rule": "gibbs", "lambda": 1, "scale": "unscaled" | "n"}
// {"rule": "fixed", "pmf": [...]}, {"rule": "erm", "temperature": 0.01}
nlohmann::json to_json(const PosteriorRule& rule);
PosteriorRule posterior_rule_from_json(const nlohmann::json& j);

// Shortest decimal that parses back to x; "inf", "-inf", "nan" otherwise.
std::string format_number(double x);

// RFC 4180 quoting when the field holds a comma, quote or newline.
std::string csv_field(const std::string& text);
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace pacbayes
