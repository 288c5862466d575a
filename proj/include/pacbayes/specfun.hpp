#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>

namespace pacbayes {

// Raised when a computation cannot produce a finite answer for valid input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class XiMode { bound, exact };

struct XiValue {
  double value;
  // true when exact mode was requested beyond xi_exact_max_n
  bool fell_back;
};

inline constexpr std::uint64_t xi_exact_max_n = 10000;

// d(p||q) in nats; +inf when q is 0 or 1 and differs from p.
double binary_kl(double p, double q);

// Upper end of the bisection bracket: the double just above the largest q in
// [p_hat, 1] with d(p_hat||q) <= c, or 1. Never below the exact inverse.
double kl_inverse_upper(double p_hat, double c);

// Lower real branch of the Lambert W function on [-1/e, 0).
double lambert_w_m1(double x);

XiValue xi_maurer(std::uint64_t n, XiMode mode = XiMode::bound);
double log_xi_maurer(std::uint64_t n, XiMode mode = XiMode::bound);

// Tangent-line majorant of 1 - exp(-x) touching at x = a.
double exp_envelope(double x, double a);

struct ScalarMin {
  double argmin;
  double min;
};

// Grid scan (log-spaced when lo > 0) followed by golden-section refinement
// of the best bracket. Ties keep the smallest abscissa.
ScalarMin minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                          double tol, std::size_t grid_points = 256);

}  // namespace pacbayes
