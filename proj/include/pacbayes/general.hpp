#pragma once

#include <cstdint>
#include <limits>

#include "pacbayes/certificate.hpp"
#include "pacbayes/tails.hpp"

namespace pacbayes {

// Fallback value of the certificate when a cut-off event fails.
struct EssSupInfo {
  double value = std::numeric_limits<double>::infinity();
  bool known = false;
};

struct SecondMomentContext {
  BoundContext ctx;
  double sigma2_n = 1.0;  // includes the +1 per sample, so >= 1
};

struct MartingaleContext {
  std::uint64_t n = 1;
  double log_inv_beta = 0.0;
  double kl = 0.0;
  double var_empirical = 0.0;    // E[M]_n
  double var_predictable = 0.0;  // E<M>_n
};

// Bounds below do not clamp: losses need not lie in [0,1]. Each records the
// argument handed to psi*^{-1} as params["budget"] where one exists.

Certificate cgf_fixed_lambda(const BoundContext& ctx, const TailFamily& family, double lambda);

// Confidence logarithms; each budget is (dependence part + log term) / n.
// ln(e k_max / beta)
double chernoff_log_term(const BoundContext& ctx, std::uint64_t k_max);
// ln(e pi^2 (kl+1)^2 / (6 beta))
double no_cutoff_log_term(const BoundContext& ctx);
// ln(10 e pi^2 / beta)
double linearized_log_term(const BoundContext& ctx);
// ln((2 + ln n) / beta)
double loglog_log_term(const BoundContext& ctx);

// (kl + ln(e k_max / beta)) / n
double chernoff_budget(const BoundContext& ctx, std::uint64_t k_max);
// (kl + ln(e pi^2 (kl+1)^2 / (6 beta))) / n
double no_cutoff_budget(const BoundContext& ctx);
// (1.1 kl + ln(10 e pi^2 / beta)) / n
double linearized_budget(const BoundContext& ctx);
// (e max(kl,1) + ln((2 + ln n) / beta)) / n
double loglog_budget(const BoundContext& ctx);

// k_max = 0 selects the default k_max = n.
Certificate chernoff_analogue(const BoundContext& ctx, const TailFamily& family, const EssSupInfo& esssup = {},
                              std::uint64_t k_max = 0);

// Per-family conventions: bounded uses k_max = 2n and a budget over 2n with no
// fallback branch; subexponential splits on whether the budget stays below the kink of
// psi*^{-1}. Custom families are rejected.
Certificate chernoff_tail_menu(const BoundContext& ctx, const TailFamily& family, const EssSupInfo& esssup = {});

Certificate chernoff_no_cutoff(const BoundContext& ctx, const TailFamily& family);
Certificate chernoff_linearized(const BoundContext& ctx, const TailFamily& family);
Certificate chernoff_loglog(const BoundContext& ctx, const TailFamily& family, const EssSupInfo& esssup = {});

// ln(2 e n (n+1)^2 ln(e n))
double log_xi_prime(std::uint64_t n);

Certificate second_moment_bound(const SecondMomentContext& smc, const EssSupInfo& esssup = {});
// Bounds |E M_n| directly, without normalisation by n.
Certificate martingale_bound(const MartingaleContext& mc, const EssSupInfo& esssup = {});
Certificate randomized_subsample_bound(const BoundContext& ctx, double a, double b);

// Cut-off presets for parametric models: ceil(ln(d n)) and ceil(ln(d p n)), at least 1.
std::uint64_t k_max_log_dn(double d, std::uint64_t n);
std::uint64_t k_max_log_dpn(double d, double p, std::uint64_t n);

}  // namespace pacbayes
