#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pacbayes/certificate.hpp"
#include "pacbayes/general.hpp"
#include "pacbayes/tails.hpp"

namespace pacbayes {

enum class BoundId {
  mcallester,
  seeger_langford,
  catoni_fixed,
  catoni_uniform,
  fast_rate_strong,
  fast_rate_simple,
  mixed_rate,
  thiemann,
  rivasplata,
  cgf_fixed_lambda,
  chernoff,
  chernoff_menu,
  chernoff_no_cutoff,
  chernoff_linearized,
  chernoff_loglog,
  second_moment,
  martingale,
  randomized_subsample,
};

const std::vector<BoundId>& all_bounds();
// Bounds of the [0,1] module; on other ranges they are evaluated after an affine rescale.
const std::vector<BoundId>& bounded_bounds();
std::string_view to_string(BoundId id);
std::optional<BoundId> parse_bound_id(std::string_view text);

bool is_bounded_module(BoundId id);
bool needs_family(BoundId id);
bool needs_lambda(BoundId id);
// Bounds whose confidence term carries xi and so accept the sqrt(pi(n+1)) substitution.
bool accepts_xi(BoundId id);

struct BoundSpec {
  BoundSpec() = default;
  explicit BoundSpec(BoundId bound) : id(bound) {}

  BoundId id = BoundId::seeger_langford;
  double lambda = std::numeric_limits<double>::quiet_NaN();
  std::optional<TailFamily> family;
  std::uint64_t k_max = 0;  // 0 selects n
  ConfidenceConstant xi = ConfidenceConstant::maurer_bound;
  bool catoni_fixed_use_xi = false;
};

std::string describe(const BoundSpec& spec);

struct BoundInputs {
  BoundContext ctx;  // emp_risk in loss units
  std::optional<std::pair<double, double>> range = std::pair{0.0, 1.0};
  EssSupInfo esssup;
  double sigma2_n = std::numeric_limits<double>::quiet_NaN();
  double var_empirical = std::numeric_limits<double>::quiet_NaN();
  double var_predictable = std::numeric_limits<double>::quiet_NaN();
};

// Evaluates spec on inputs. Throws std::invalid_argument when a required
// input (family, lambda, range, second moments) is missing.
Certificate evaluate(const BoundSpec& spec, const BoundInputs& inputs);

// As evaluate, but the martingale entry is turned into a risk certificate
// emp_risk + |E M_n| / n, with the raw value kept in params["martingale_raw"].
Certificate evaluate_risk(const BoundSpec& spec, const BoundInputs& inputs);

}  // namespace pacbayes
