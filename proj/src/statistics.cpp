#include "geiringer/statistics.hpp"

#include "geiringer/errors.hpp"

namespace geiringer {

std::set<ClassId> DownwardReport::classes() const {
  std::set<ClassId> out;
  for (const auto& [i, _] : class_down) out.insert(i);
  for (const auto& [i, _] : terminal_down) out.insert(i);
  return out;
}

const std::set<ClassId>& DownwardReport::successors(ClassId i) const {
  static const std::set<ClassId> empty;
  const auto it = class_down.find(i);
  return it == class_down.end() ? empty : it->second;
}

std::set<std::string> DownwardReport::terminal_names(ClassId i) const {
  std::set<std::string> out;
  if (const auto it = terminal_down.find(i); it != terminal_down.end())
    for (const auto& t : it->second) out.insert(t.name);
  return out;
}

std::size_t DownwardReport::down_sigma(ClassId i) const {
  const auto it = terminal_down.find(i);
  return it == terminal_down.end() ? 0 : it->second.size();
}

OrderTable::Count OrderTable::action(const std::string& a, ClassId j) const {
  const auto it = action_.find({a, j});
  return it == action_.end() ? 0 : it->second;
}

OrderTable::Count OrderTable::cls(ClassId i, ClassId j) const {
  const auto it = class_.find({i, j});
  return it == class_.end() ? 0 : it->second;
}

OrderTable::Count OrderTable::row_total(ClassId i) const {
  Count total = 0;
  for (auto it = class_.lower_bound({i, 0}); it != class_.end() && it->first.first == i; ++it)
    total += it->second;
  return total;
}

DownwardReport downward(const Population& pop) {
  DownwardReport d;
  d.b = pop.size();
  for (const auto& r : pop) {
    d.action_down[r.action].insert(r.states.front().cls);
    for (std::size_t k = 0; k + 1 < r.states.size(); ++k)
      d.class_down[r.states[k].cls].insert(r.states[k + 1].cls);
    d.terminal_down[r.states.back().cls].insert(r.terminal);
  }
  return d;
}

OrderTable order_table(const Population& pop) {
  OrderTable t;
  for (const auto& r : pop) {
    t.add_action(r.action, r.states.front().cls);
    for (std::size_t k = 0; k + 1 < r.states.size(); ++k)
      t.add_class(r.states[k].cls, r.states[k + 1].cls);
  }
  return t;
}

Population inflate(const Population& pop, std::uint32_t m) {
  if (m < 1) throw InvalidArgument("inflation factor must be >= 1");
  if (pop.is_inflated()) throw InvalidArgument("population is already inflated");
  std::vector<Rollout> out;
  out.reserve(pop.size() * m);
  for (const auto& r : pop)
    for (std::uint32_t k = 1; k <= m; ++k) {
      Rollout copy = r;
      for (auto& s : copy.states) s.letter.copy = k;
      copy.terminal.copy = k;
      out.push_back(std::move(copy));
    }
  return Population(detail::TrustedTag{}, std::move(out));
}

}  // namespace geiringer
