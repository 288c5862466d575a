#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace pacbayes {

// Dominating functions psi for the cumulant generating function of -loss.

struct BoundedRange {
  double a = 0.0;
  double b = 1.0;
};

struct SubGaussian {
  double sigma2 = 1.0;
};

struct SubGamma {
  double sigma2 = 1.0;
  double c = 1.0;
};

struct SubExponential {
  double sigma2 = 1.0;
  double c = 1.0;
};

struct CustomCGF {
  std::function<double(double)> psi;
  double b_dom = 0.0;  // psi is defined on [0, b_dom)
  std::string label;
};

using TailFamily = std::variant<BoundedRange, SubGaussian, SubGamma, SubExponential, CustomCGF>;

std::string family_name(const TailFamily& family);

// Right end of the domain of psi; +inf for unbounded domains.
double domain_end(const TailFamily& family);

// Throws std::invalid_argument when the family parameters violate their invariants.
void validate(const TailFamily& family);

double psi(const TailFamily& family, double lambda);

// psi*^{-1}(y) = inf_{lambda in (0, b)} (y + psi(lambda)) / lambda.
// relaxed_subexp selects the linear-growth bound beyond the subexponential kink.
double psi_star_inverse(const TailFamily& family, double y, bool relaxed_subexp = false);

double psi_star_inverse_numeric(const std::function<double(double)>& psi_fn, double b_dom, double y);
double psi_star_inverse_numeric(const TailFamily& family, double y);

// Validates psi(0) = 0, psi'(0) = 0, monotonicity and convexity on a grid.
CustomCGF make_custom_cgf(std::function<double(double)> psi_fn, double b_dom, std::string label = "custom");

// Piecewise-linear interpolation through convex samples; the chord majorises
// the convex function it samples. b_dom is the last abscissa.
CustomCGF make_custom_cgf_table(std::vector<double> lambdas, std::vector<double> psis);

// Two-column CSV (lambda, psi); an optional non-numeric header line is skipped.
CustomCGF load_custom_cgf_csv(const std::string& path);

}  // namespace pacbayes
