#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace pacbayes {

// Constant multiplying 1/beta inside the confidence logarithm of the
// KL-inversion family of bounds.
enum class ConfidenceConstant {
  maurer_bound,  // min(2 sqrt n, 2 + sqrt(2n))
  maurer_exact,  // binomial-sum definition
  anytime,       // sqrt(pi (n + 1)), valid uniformly over n
};

struct BoundContext {
  std::uint64_t n = 1;
  double log_inv_beta = 0.0;  // ln(1/beta), beta in (0,1)
  double kl = 0.0;            // nats
  double emp_risk = 0.0;
  ConfidenceConstant xi = ConfidenceConstant::maurer_bound;

  static BoundContext with_beta(std::uint64_t n, double beta, double kl, double emp_risk);
  double beta() const;
};

// Throws std::invalid_argument on n = 0, beta outside (0,1), negative or NaN kl,
// or a non-finite empirical risk; unit_range additionally requires emp_risk in [0,1].
void validate(const BoundContext& ctx, bool unit_range);

double log_xi(const BoundContext& ctx);
// (kl + ln(xi/beta)) / n
double budget_xi(const BoundContext& ctx);
// (kl + ln(1/beta)) / n
double budget_plain(const BoundContext& ctx);

struct Certificate {
  double value = 0.0;
  std::string bound_id;
  std::map<std::string, double> params;
  bool informative = true;
  double beta = 0.0;
  std::uint64_t n = 0;

  bool operator==(const Certificate&) const = default;
};

}  // namespace pacbayes
