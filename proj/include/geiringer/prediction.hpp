#pragma once

// Closed-form limiting frequency of a schema under recombination, and a payoff
// evaluator built on the same transition structure.

#include "geiringer/core.hpp"
#include "geiringer/rational.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace geiringer {

struct Prediction {
  Rational value;
  Rational first_factor{1};
  std::vector<Rational> step_factors;
  Rational last_factor{1};
  /// The input population is homologous, so the value is exact at every inflation.
  bool homologous_exact = false;
  /// Some factor had a vanishing numerator and the value was forced to 0.
  bool zero_by_convention = false;
};

/// Limit over m of the limiting frequency of `schema` along the chain started at the
/// m-fold inflation of `pop`. `pop` must not be inflated.
Prediction predict_schema_frequency(const Population& pop, const Schema& schema);

using PayoffMap = std::map<std::string, Rational>;

/// Lines "TERMINAL = RATIONAL"; blank lines and '#' comments are skipped.
PayoffMap parse_payoffs(std::string_view text);
PayoffMap load_payoffs(const std::string& path);

/// Expected terminal payoff of a limiting rollout that opens with `action`.
///
/// Class i moves to class j with probability Order(i|j)/D_i and is absorbed at each
/// following terminal with probability 1/D_i, D_i = sum_j Order(i|j) + i|sigma. The start
/// class is drawn proportionally to Order(action|i). Solved exactly.
Rational predict_action_value(const Population& pop, const std::string& action,
                              const PayoffMap& payoffs);

}  // namespace geiringer
