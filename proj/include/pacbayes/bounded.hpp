#pragma once

#include <utility>
#include <vector>

#include "pacbayes/certificate.hpp"

namespace pacbayes {

// Bounds for losses with range [0,1]. Values are clamped to [0,1]; the raw
// value is kept in params["unclamped"].

Certificate mcallester(const BoundContext& ctx);
Certificate seeger_langford(const BoundContext& ctx);
// use_xi replaces ln(1/beta) by ln(xi/beta) in the budget.
Certificate catoni_fixed(const BoundContext& ctx, double lambda, bool use_xi = false);
Certificate catoni_uniform(const BoundContext& ctx);
Certificate fast_rate_strong(const BoundContext& ctx);
Certificate fast_rate_simple(const BoundContext& ctx);
Certificate mixed_rate(const BoundContext& ctx);
Certificate thiemann(const BoundContext& ctx);
Certificate rivasplata(const BoundContext& ctx);

// 1 - c (1 - ln c); zero at c = 1.
double kappa(double c);

// c g ln(g/(g-1)) r + c g budget + kappa(c) g, with the r term dropped at r = 0
// and the g -> infinity limit taken when g is infinite.
double fast_rate_objective(double r_hat, double budget, double c, double gamma);

inline constexpr double gamma_realizable = 1.0 + 1e-8;

// Minimizer in gamma of fast_rate_objective. Returns gamma_realizable when
// r_hat = 0 and +inf when the linear part vanishes (budget = 0, c = 1).
double optimal_gamma(double r_hat, double budget, double c);
// Two-term closed-form approximation of the same minimizer.
double optimal_gamma_approx(double r_hat, double budget, double c);

// Two-argument forms, independent of n and beta.
double f_fast_rate(double r, double c);
double f_mixed_rate(double r, double c);
double f_thiemann(double r, double c);
double thiemann_objective(double r, double c, double lambda);

struct DominanceReport {
  std::size_t points = 0;
  std::size_t violations = 0;
  double max_violation_fast = 0.0;   // max of f_fr - f_th
  double max_violation_mixed = 0.0;  // max of f_mr - f_th
  std::vector<std::pair<double, double>> violating;
};

DominanceReport dominance_check(const std::vector<std::pair<double, double>>& grid,
                                double slack = 1e-12);

}  // namespace pacbayes
