#pragma once

// Rollouts, populations and Holland-Poli schemata.
//
// A state is a pair (class, letter): states sharing a class are interchangeable under
// recombination. Letters and terminal labels may carry a copy index, which is how an
// inflated population stays an ordinary Population.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace geiringer {

using ClassId = std::uint32_t;

/// Copy index 0 means "not inflated".
struct Letter {
  std::string base;
  std::uint32_t copy = 0;

  auto operator<=>(const Letter&) const = default;
  bool operator==(const Letter&) const = default;
};

struct StateLabel {
  ClassId cls = 0;
  Letter letter;

  auto operator<=>(const StateLabel&) const = default;
  bool operator==(const StateLabel&) const = default;
};

struct TerminalLabel {
  std::string name;
  std::uint32_t copy = 0;

  auto operator<=>(const TerminalLabel&) const = default;
  bool operator==(const TerminalLabel&) const = default;
};

struct Rollout {
  std::string action;
  std::vector<StateLabel> states;
  TerminalLabel terminal;

  std::size_t height() const noexcept { return states.size(); }

  auto operator<=>(const Rollout&) const = default;
  bool operator==(const Rollout&) const = default;
};

namespace detail {
struct TrustedTag {
  explicit TrustedTag() = default;
};
}  // namespace detail

/// Ordered sequence of rollouts with globally distinct states and terminal labels.
/// Immutable once built; the public constructor validates every invariant.
class Population {
 public:
  explicit Population(std::vector<Rollout> rollouts);

  /// Skips validation. Only for transformations that provably preserve the invariants.
  Population(detail::TrustedTag, std::vector<Rollout> rollouts) : rollouts_(std::move(rollouts)) {}

  std::size_t size() const noexcept { return rollouts_.size(); }
  const Rollout& operator[](std::size_t i) const { return rollouts_[i]; }
  const std::vector<Rollout>& rollouts() const noexcept { return rollouts_; }
  auto begin() const noexcept { return rollouts_.begin(); }
  auto end() const noexcept { return rollouts_.end(); }

  /// True when some letter or terminal carries a copy index.
  bool is_inflated() const;

  bool operator==(const Population&) const = default;

 private:
  std::vector<Rollout> rollouts_;
};

/// Holland-Poli schema: `#`, or (action, class sequence, tail) where the tail is `#`
/// or a terminal base name.
class Schema {
 public:
  struct Pattern {
    std::string action;
    std::vector<ClassId> classes;
    std::optional<std::string> terminal;  // nullopt: tail is `#`

    bool operator==(const Pattern&) const = default;
  };

  Schema() = default;  // root schema `#`
  explicit Schema(Pattern pattern);

  static Schema root() { return Schema{}; }
  static Schema open(std::string action, std::vector<ClassId> classes);
  static Schema closed(std::string action, std::vector<ClassId> classes, std::string terminal);

  bool is_root() const noexcept { return !pattern_.has_value(); }
  const Pattern& pattern() const { return *pattern_; }

  /// Number of class entries; 0 for the root.
  std::size_t height() const noexcept { return pattern_ ? pattern_->classes.size() : 0; }

  bool operator==(const Schema&) const = default;

 private:
  std::optional<Pattern> pattern_;
};

// Parsing and printing -------------------------------------------------------

Population parse_population(std::string_view text);
Population load_population(const std::string& path);
Schema parse_schema(std::string_view text);

std::string to_string(const Letter& letter);
std::string to_string(const StateLabel& state);
std::string to_string(const TerminalLabel& terminal);
std::string to_string(const Rollout& rollout);
/// One rollout per line; this is also the canonical encoding of a population.
std::string to_string(const Population& population);
std::string to_string(const Schema& schema);

std::ostream& operator<<(std::ostream& os, const Population& population);
std::ostream& operator<<(std::ostream& os, const Schema& schema);

// Queries --------------------------------------------------------------------

bool matches(const Rollout& rollout, const Schema& schema);

/// True iff h >= g in the schema partial order, i.e. S_h contains S_g by construction.
bool schema_leq(const Schema& g, const Schema& h);

struct PopulationMetrics {
  std::vector<std::size_t> heights;
  std::size_t total_states = 0;
  bool homologous = false;

  /// H_i for 1-based rollout index i.
  std::size_t height(std::size_t i) const { return heights.at(i - 1); }
};

PopulationMetrics population_metrics(const Population& population);

}  // namespace geiringer
