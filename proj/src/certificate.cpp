#include "pacbayes/certificate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pacbayes/specfun.hpp"

namespace pacbayes {

BoundContext BoundContext::with_beta(std::uint64_t n, double beta, double kl, double emp_risk) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0,1)");
  BoundContext ctx;
  ctx.n = n;
  ctx.log_inv_beta = -std::log(beta);
  ctx.kl = kl;
  ctx.emp_risk = emp_risk;
  return ctx;
}

double BoundContext::beta() const { return std::exp(-log_inv_beta); }

void validate(const BoundContext& ctx, bool unit_range) {
  if (ctx.n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(ctx.log_inv_beta > 0.0) || std::isinf(ctx.log_inv_beta))
    throw std::invalid_argument("beta must lie in (0,1)");
  if (!(ctx.kl >= 0.0)) throw std::invalid_argument("kl must be >= 0");
  if (!std::isfinite(ctx.emp_risk)) throw std::invalid_argument("emp_risk must be finite");
  if (unit_range && !(ctx.emp_risk >= 0.0 && ctx.emp_risk <= 1.0))
    throw std::invalid_argument("emp_risk must lie in [0,1]");
}

double log_xi(const BoundContext& ctx) {
  switch (ctx.xi) {
    case ConfidenceConstant::maurer_bound:
      return log_xi_maurer(ctx.n, XiMode::bound);
    case ConfidenceConstant::maurer_exact:
      return log_xi_maurer(ctx.n, XiMode::exact);
    case ConfidenceConstant::anytime:
      return 0.5 * std::log(std::numbers::pi * (static_cast<double>(ctx.n) + 1.0));
  }
  throw std::logic_error("unknown confidence constant");
}

double budget_xi(const BoundContext& ctx) {
  return (ctx.kl + log_xi(ctx) + ctx.log_inv_beta) / static_cast<double>(ctx.n);
}

double budget_plain(const BoundContext& ctx) {
  return (ctx.kl + ctx.log_inv_beta) / static_cast<double>(ctx.n);
}

}  // namespace pacbayes
