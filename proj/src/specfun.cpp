#include "pacbayes/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace pacbayes {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double eps = std::numeric_limits<double>::epsilon();

void require_probability(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument(std::string(name) + " must lie in [0,1], got " + std::to_string(v));
}

}  // namespace

double binary_kl(double p, double q) {
  require_probability(p, "p");
  require_probability(q, "q");
  double d = 0.0;
  if (p > 0.0) {
    if (q == 0.0) return inf;
    d += p * std::log(p / q);
  }
  if (p < 1.0) {
    if (q == 1.0) return inf;
    d += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  }
  return std::max(d, 0.0);
}

double kl_inverse_upper(double p_hat, double c) {
  require_probability(p_hat, "p_hat");
  if (!(c >= 0.0)) throw std::invalid_argument("kl budget must be non-negative");
  if (c == 0.0 || p_hat == 1.0) return p_hat;
  if (std::isinf(c)) return 1.0;
  // invariant: d(p_hat||lo) <= c < d(p_hat||hi) or hi == 1
  double lo = p_hat;
  double hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (binary_kl(p_hat, mid) > c)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double lambert_w_m1(double x) {
  const double branch = -std::exp(-1.0);
  if (!(x < 0.0)) throw std::domain_error("lambert_w_m1 requires x < 0");
  if (x <= branch) {
    if (x >= branch * (1.0 + 8.0 * eps)) return -1.0;
    throw std::domain_error("lambert_w_m1 requires x >= -1/e");
  }
  // x = -exp(-1 - u) with u > 0
  const double u = -1.0 - std::log(-x);
  double w = -1.0 - std::sqrt(2.0 * u) - (5.0 / 6.0) * u;
  const double target = std::log(-x);
  // Halley steps on g(w) = w + ln(-w) - ln(-x), which shares its root with w e^w - x
  for (int it = 0; it < 50; ++it) {
    const double g = w + std::log(-w) - target;
    const double g1 = 1.0 + 1.0 / w;
    const double g2 = -1.0 / (w * w);
    const double denom = 2.0 * g1 * g1 - g * g2;
    if (denom == 0.0) break;
    double next = w - 2.0 * g * g1 / denom;
    if (next > -1.0) next = 0.5 * (w - 1.0);
    const double step = std::abs(next - w);
    w = next;
    if (step <= 4.0 * eps * std::abs(w)) break;
  }
  return w;
}

XiValue xi_maurer(std::uint64_t n, XiMode mode) {
  return {std::exp(log_xi_maurer(n, mode)),
          mode == XiMode::exact && n > xi_exact_max_n};
}

double log_xi_maurer(std::uint64_t n, XiMode mode) {
  if (n < 1) throw std::invalid_argument("xi_maurer requires n >= 1");
  const double nd = static_cast<double>(n);
  if (mode == XiMode::bound || n > xi_exact_max_n) {
    if (n == 1) return std::log(2.0);
    return std::log(std::min(2.0 * std::sqrt(nd), 2.0 + std::sqrt(2.0 * nd)));
  }
  // log-sum-exp of C(n,k) (k/n)^k ((n-k)/n)^(n-k)
  std::vector<double> terms(n + 1);
  const double lg_n = std::lgamma(nd + 1.0);
  for (std::uint64_t k = 0; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    const double md = nd - kd;
    double t = lg_n - std::lgamma(kd + 1.0) - std::lgamma(md + 1.0);
    if (k > 0) t += kd * std::log(kd / nd);
    if (k < n) t += md * std::log(md / nd);
    terms[k] = t;
  }
  const double peak = *std::max_element(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += std::exp(t - peak);
  return peak + std::log(s);
}

double exp_envelope(double x, double a) {
  if (!(x >= 0.0)) throw std::invalid_argument("exp_envelope requires x >= 0");
  if (!(a > 0.0)) throw std::invalid_argument("exp_envelope requires a > 0");
  const double ea = std::exp(-a);
  return ea * x + 1.0 - ea * (1.0 + a);
}

ScalarMin minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                          double tol, std::size_t grid_points) {
  if (!(lo < hi)) throw std::invalid_argument("minimize_scalar requires lo < hi");
  if (grid_points < 3) throw std::invalid_argument("minimize_scalar requires at least 3 grid points");
  const bool log_space = lo > 0.0;
  const double tlo = log_space ? std::log(lo) : lo;
  const double thi = log_space ? std::log(hi) : hi;
  auto to_x = [&](double t) { return log_space ? std::exp(t) : t; };
  auto eval = [&](double x) {
    const double v = f(x);
    return std::isfinite(v) ? v : inf;
  };

  std::vector<double> ts(grid_points);
  std::size_t bad = 0;
  std::size_t best_i = 0;
  ScalarMin best{lo, inf};
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double t = tlo + (thi - tlo) * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    ts[i] = t;
    const double x = i == 0 ? lo : (i + 1 == grid_points ? hi : to_x(t));
    const double v = eval(x);
    if (v == inf) ++bad;
    if (v < best.min) {
      best = {x, v};
      best_i = i;
    }
  }
  if (2 * bad > grid_points)
    throw NumericalError("objective is non-finite on more than half of the search grid");

  auto consider = [&](double x, double v) {
    if (v < best.min || (v == best.min && x < best.argmin)) best = {x, v};
  };

  double a = ts[best_i == 0 ? 0 : best_i - 1];
  double b = ts[std::min(best_i + 1, grid_points - 1)];
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = eval(to_x(c));
  double fd = eval(to_x(d));
  consider(to_x(c), fc);
  consider(to_x(d), fd);
  for (int it = 0; it < 200; ++it) {
    if (std::abs(to_x(b) - to_x(a)) <= tol) break;
    if (b - a <= 4.0 * eps * std::max({1.0, std::abs(a), std::abs(b)})) break;
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = eval(to_x(c));
      consider(to_x(c), fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = eval(to_x(d));
      consider(to_x(d), fd);
    }
  }
  return best;
}

}  // namespace pacbayes
