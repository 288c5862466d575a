#include "pacbayes/tails.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pacbayes/specfun.hpp"

namespace pacbayes {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || std::isinf(v)) throw std::invalid_argument(std::string(name) + " must be positive and finite");
}

}  // namespace

std::string family_name(const TailFamily& family) {
  return std::visit(overloaded{[](const BoundedRange&) { return std::string("bounded"); },
                               [](const SubGaussian&) { return std::string("subgaussian"); },
                               [](const SubGamma&) { return std::string("subgamma"); },
                               [](const SubExponential&) { return std::string("subexponential"); },
                               [](const CustomCGF&) { return std::string("custom"); }},
                    family);
}

double domain_end(const TailFamily& family) {
  return std::visit(overloaded{[](const BoundedRange&) { return inf; }, [](const SubGaussian&) { return inf; },
                               [](const SubGamma& f) { return 1.0 / f.c; },
                               [](const SubExponential& f) { return 1.0 / f.c; },
                               [](const CustomCGF& f) { return f.b_dom; }},
                    family);
}

void validate(const TailFamily& family) {
  std::visit(overloaded{[](const BoundedRange& f) {
                          if (!std::isfinite(f.a) || !std::isfinite(f.b) || !(f.a <= f.b))
                            throw std::invalid_argument("bounded range requires finite a <= b");
                        },
                        [](const SubGaussian& f) { require_positive(f.sigma2, "sigma2"); },
                        [](const SubGamma& f) {
                          require_positive(f.sigma2, "sigma2");
                          require_positive(f.c, "c");
                        },
                        [](const SubExponential& f) {
                          require_positive(f.sigma2, "sigma2");
                          require_positive(f.c, "c");
                        },
                        [](const CustomCGF& f) {
                          if (!f.psi) throw std::invalid_argument("custom psi is empty");
                          if (!(f.b_dom > 0.0)) throw std::invalid_argument("custom b_dom must be positive");
                        }},
             family);
}

double psi(const TailFamily& family, double lambda) {
  if (!(lambda >= 0.0) || !(lambda < domain_end(family)))
    throw std::domain_error("lambda outside the domain of psi for family " + family_name(family));
  return std::visit(
      overloaded{[&](const BoundedRange& f) { return lambda * lambda * (f.b - f.a) * (f.b - f.a) / 8.0; },
                 [&](const SubGaussian& f) { return lambda * lambda * f.sigma2 / 2.0; },
                 [&](const SubGamma& f) { return lambda * lambda * f.sigma2 / (2.0 * (1.0 - f.c * lambda)); },
                 [&](const SubExponential& f) { return lambda * lambda * f.sigma2 / 2.0; },
                 [&](const CustomCGF& f) { return f.psi(lambda); }},
      family);
}

double psi_star_inverse(const TailFamily& family, double y, bool relaxed_subexp) {
  if (!(y >= 0.0)) throw std::invalid_argument("psi_star_inverse requires y >= 0");
  validate(family);
  return std::visit(overloaded{[&](const BoundedRange& f) { return (f.b - f.a) * std::sqrt(y / 2.0); },
                               [&](const SubGaussian& f) { return std::sqrt(2.0 * f.sigma2 * y); },
                               [&](const SubGamma& f) { return std::sqrt(2.0 * f.sigma2 * y) + f.c * y; },
                               [&](const SubExponential& f) {
                                 if (y <= f.sigma2 / (2.0 * f.c * f.c)) return std::sqrt(2.0 * f.sigma2 * y);
                                 const double kink = f.sigma2 / (2.0 * f.c);
                                 return f.c * y + (relaxed_subexp ? std::max(y, kink) : kink);
                               },
                               [&](const CustomCGF& f) { return psi_star_inverse_numeric(f.psi, f.b_dom, y); }},
                    family);
}

double psi_star_inverse_numeric(const std::function<double(double)>& psi_fn, double b_dom, double y) {
  if (!(y >= 0.0)) throw std::invalid_argument("psi_star_inverse requires y >= 0");
  if (!(b_dom > 0.0)) throw std::invalid_argument("domain end must be positive");
  if (y == 0.0) return 0.0;
  const bool bounded = std::isfinite(b_dom);
  const double lo = bounded ? b_dom * 1e-12 : 1e-10;
  const double hi = bounded ? b_dom * (1.0 - 1e-9) : 1e10;
  return minimize_scalar([&](double l) { return (y + psi_fn(l)) / l; }, lo, hi, 0.0).min;
}

double psi_star_inverse_numeric(const TailFamily& family, double y) {
  validate(family);
  return psi_star_inverse_numeric([&](double l) { return psi(family, l); }, domain_end(family), y);
}

CustomCGF make_custom_cgf(std::function<double(double)> psi_fn, double b_dom, std::string label) {
  if (!psi_fn) throw std::invalid_argument("custom psi is empty");
  if (!(b_dom > 0.0)) throw std::invalid_argument("custom b_dom must be positive");
  const double span = std::isfinite(b_dom) ? b_dom * (1.0 - 1e-9) : 10.0;
  if (std::abs(psi_fn(0.0)) > 1e-12) throw std::invalid_argument("custom psi must satisfy psi(0) = 0");
  constexpr int points = 64;
  std::vector<double> v(points + 1);
  for (int i = 0; i <= points; ++i) {
    v[i] = psi_fn(span * i / points);
    if (!std::isfinite(v[i])) throw std::invalid_argument("custom psi must be finite on its domain");
  }
  const double scale = std::max(1.0, std::abs(v[points]));
  for (int i = 1; i <= points; ++i)
    if (v[i] < v[i - 1] - 1e-12 * scale) throw std::invalid_argument("custom psi must be non-decreasing");
  for (int i = 1; i < points; ++i)
    if (v[i - 1] + v[i + 1] - 2.0 * v[i] < -1e-9 * scale) throw std::invalid_argument("custom psi must be convex");
  const double h = 1e-6 * std::min(1.0, span);
  const double mean_slope = v[points] / span;
  if (psi_fn(h) / h > 1e-3 * mean_slope + 1e-12) throw std::invalid_argument("custom psi must satisfy psi'(0) = 0");
  return CustomCGF{std::move(psi_fn), b_dom, std::move(label)};
}

CustomCGF make_custom_cgf_table(std::vector<double> lambdas, std::vector<double> psis) {
  if (lambdas.size() != psis.size() || lambdas.size() < 2)
    throw std::invalid_argument("psi table needs at least two (lambda, psi) rows");
  if (lambdas.front() != 0.0 || psis.front() != 0.0)
    throw std::invalid_argument("psi table must start at lambda = 0 with psi = 0");
  for (std::size_t i = 1; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > lambdas[i - 1]) || !std::isfinite(lambdas[i]))
      throw std::invalid_argument("psi table lambdas must be strictly increasing");
    if (!(psis[i] >= psis[i - 1]) || !std::isfinite(psis[i]))
      throw std::invalid_argument("psi table values must be non-decreasing");
  }
  for (std::size_t i = 1; i + 1 < lambdas.size(); ++i) {
    const double s0 = (psis[i] - psis[i - 1]) / (lambdas[i] - lambdas[i - 1]);
    const double s1 = (psis[i + 1] - psis[i]) / (lambdas[i + 1] - lambdas[i]);
    if (s1 < s0 * (1.0 - 1e-12)) throw std::invalid_argument("psi table must be convex");
  }
  const double b_dom = lambdas.back();
  auto fn = [xs = std::move(lambdas), ys = std::move(psis)](double l) {
    const auto it = std::upper_bound(xs.begin(), xs.end(), l);
    if (it == xs.end()) return ys.back();
    const auto j = static_cast<std::size_t>(it - xs.begin());
    const double t = (l - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return ys[j - 1] + t * (ys[j] - ys[j - 1]);
  };
  return CustomCGF{std::move(fn), b_dom, "table"};
}

CustomCGF load_custom_cgf_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open psi table " + path);
  std::vector<double> xs, ys;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x, y;
    if (!(row >> x >> y)) {
      if (first) {
        first = false;
        continue;
      }
      throw std::invalid_argument("malformed psi table row: " + line);
    }
    first = false;
    xs.push_back(x);
    ys.push_back(y);
  }
  return make_custom_cgf_table(std::move(xs), std::move(ys));
}

}  // namespace pacbayes
