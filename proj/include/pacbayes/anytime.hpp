#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "pacbayes/certificate.hpp"

namespace pacbayes {

// beta_n = 6 beta / (pi^2 n^2); sums to beta exactly.
struct Basel {};
// beta_n = beta / (Z n ln^2(6n)) with Z = kk_normalizer.
struct KaufmannKoolen {};
// beta_n = weights[n-1] * beta; weights are non-negative and sum to at most 1.
struct CustomWeights {
  std::vector<double> weights;
};

using ScheduleRule = std::variant<Basel, KaufmannKoolen, CustomWeights>;

// Upper bound on sum_{n>=1} 1/(n ln^2(6n)). The sum to N = 1e7 plus the
// integral tail 1/ln(6N) gives 0.7602276228860605, rounded up here.
inline constexpr double kk_normalizer = 0.76022762289;

struct BetaSchedule {
  ScheduleRule rule;
  double total_beta = 0.05;

  // Validates total_beta in (0,1) and, for custom rules, the weight table.
  BetaSchedule(ScheduleRule rule, double total_beta);
};

double beta_at(const BetaSchedule& schedule, std::uint64_t n);
// ln(1/beta_n), evaluated without forming beta_n.
double log_inv_beta_at(const BetaSchedule& schedule, std::uint64_t n);

class AnytimeError : public std::runtime_error {
 public:
  AnytimeError(std::uint64_t n, const std::string& what);
  std::uint64_t n() const { return n_; }

 private:
  std::uint64_t n_;
};

using FixedNBound = std::function<Certificate(std::uint64_t n, double log_inv_beta)>;

// Certificates for n = 1..horizon, jointly valid at level total_beta.
// Errors from the bound are rethrown as AnytimeError carrying n.
std::vector<Certificate> make_anytime(const FixedNBound& bound, const BetaSchedule& schedule, std::uint64_t horizon);

// Same context with the confidence constant replaced by sqrt(pi (n+1)).
BoundContext seeger_anytime_substitution(const BoundContext& ctx);

}  // namespace pacbayes
