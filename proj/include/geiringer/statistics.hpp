#pragma once

// Downward sets, adjacency counts and inflation of populations.

#include "geiringer/core.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>

namespace geiringer {

/// alpha-down, i-down and i-down-sigma of a population.
///
/// Terminal successors are kept as full labels (copy index included) so that
/// down_sigma(i) counts adjacencies; terminal_names() drops the copy index.
struct DownwardReport {
  std::size_t b = 0;
  std::map<std::string, std::set<ClassId>> action_down;
  std::map<ClassId, std::set<ClassId>> class_down;
  std::map<ClassId, std::set<TerminalLabel>> terminal_down;

  std::set<ClassId> classes() const;

  /// Class successors of i (empty when i is absent).
  const std::set<ClassId>& successors(ClassId i) const;
  /// Base names of the terminals following class i.
  std::set<std::string> terminal_names(ClassId i) const;
  std::size_t down_sigma(ClassId i) const;

  bool operator==(const DownwardReport&) const = default;
};

class OrderTable {
 public:
  using Count = std::uint64_t;

  Count action(const std::string& a, ClassId j) const;
  Count cls(ClassId i, ClassId j) const;
  /// Sum over j of Order(i down j).
  Count row_total(ClassId i) const;

  const std::map<std::pair<std::string, ClassId>, Count>& action_entries() const { return action_; }
  const std::map<std::pair<ClassId, ClassId>, Count>& class_entries() const { return class_; }

  void add_action(const std::string& a, ClassId j, Count n = 1) { action_[{a, j}] += n; }
  void add_class(ClassId i, ClassId j, Count n = 1) { class_[{i, j}] += n; }

  bool operator==(const OrderTable&) const = default;

 private:
  std::map<std::pair<std::string, ClassId>, Count> action_;
  std::map<std::pair<ClassId, ClassId>, Count> class_;
};

DownwardReport downward(const Population& pop);
OrderTable order_table(const Population& pop);

/// m copies of every rollout, placed consecutively, with letters and terminals carrying
/// copy index k = 1..m. Throws InvalidArgument for m < 1 or an already inflated input.
Population inflate(const Population& pop, std::uint32_t m);

}  // namespace geiringer
