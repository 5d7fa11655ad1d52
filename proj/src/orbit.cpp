#include "geiringer/orbit.hpp"

#include "geiringer/errors.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace geiringer {

std::optional<std::size_t> OrbitIndex::index_of(const Population& pop) const {
  const auto key = options_.quotient_letters ? to_string(canonicalize_letters(pop)) : to_string(pop);
  const auto it = lookup_.find(key);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

Population canonicalize_letters(const Population& pop) {
  std::map<ClassId, std::vector<Letter>> sorted;
  for (const auto& r : pop)
    for (const auto& s : r.states) sorted[s.cls].push_back(s.letter);
  for (auto& [_, letters] : sorted) std::ranges::sort(letters);

  std::map<ClassId, std::size_t> next;
  auto rollouts = pop.rollouts();
  for (auto& r : rollouts)
    for (auto& s : r.states) s.letter = sorted[s.cls][next[s.cls]++];
  return Population(detail::TrustedTag{}, std::move(rollouts));
}

OrbitIndex enumerate_orbit(const Population& pop, const OrbitOptions& options) {
  if (options.cap < 1) throw InvalidArgument("orbit cap must be >= 1");

  OrbitIndex orbit;
  orbit.options_ = options;
  orbit.generators_ = enumerate_generators(pop, options.include_transpositions);
  const bool quotient = options.quotient_letters;
  if (quotient)
    std::erase_if(orbit.generators_, [](const RecombOp& op) { return std::holds_alternative<SingleSwap>(op); });

  auto normal = [&](Population p) { return quotient ? canonicalize_letters(p) : p; };

  std::vector<std::pair<std::string, Population>> layer;
  {
    auto start = normal(pop);
    auto key = to_string(start);
    layer.emplace_back(std::move(key), std::move(start));
  }
  while (!layer.empty()) {
    std::ranges::sort(layer, {}, &std::pair<std::string, Population>::first);
    for (auto& [key, p] : layer) {
      orbit.lookup_.emplace(key, orbit.members_.size());
      orbit.members_.push_back(p);
    }
    ++orbit.layers_;

    std::map<std::string, Population> next;
    for (const auto& [_, p] : layer)
      for (const auto& op : orbit.generators_) {
        auto q = normal(apply_op(p, op));
        auto key = to_string(q);
        if (orbit.lookup_.contains(key) || next.contains(key)) continue;
        next.emplace(std::move(key), std::move(q));
        if (orbit.members_.size() + next.size() > options.cap)
          throw CapExceeded(options.cap, next.size());
      }
    layer.assign(std::make_move_iterator(next.begin()), std::make_move_iterator(next.end()));
  }

  orbit.full_size_ = BigInt(orbit.members_.size());
  if (quotient) {
    std::map<ClassId, unsigned> letters;
    for (const auto& r : pop)
      for (const auto& s : r.states) ++letters[s.cls];
    for (const auto& [_, n] : letters)
      for (unsigned k = 2; k <= n; ++k) orbit.full_size_ *= k;
  }
  return orbit;
}

OrbitFrequency orbit_frequency(const OrbitIndex& orbit, const Schema& schema) {
  std::size_t total = 0;
  std::size_t first = 0;
  for (const auto& p : orbit.members()) {
    total += count_matching(p, schema);
    if (matches(p[0], schema)) ++first;
  }
  const Rational n(static_cast<long>(orbit.size()));
  OrbitFrequency out;
  out.value = Rational(static_cast<long>(total)) / (Rational(static_cast<long>(orbit.b())) * n);
  if (orbit.options().include_transpositions) out.first_individual = Rational(static_cast<long>(first)) / n;
  return out;
}

Rational exact_limit_frequency(const OrbitIndex& orbit, const Schema& schema) {
  const auto f = orbit_frequency(orbit, schema);
  if (f.first_individual && *f.first_individual != f.value)
    throw NumericalError("orbit frequency " + to_string(f.value) + " differs from first-rollout fraction " +
                         to_string(*f.first_individual));
  return f.value;
}

markov::StochasticMatrix<Rational> orbit_transition_matrix(const OrbitIndex& orbit,
                                                           const MixingDistribution& mu) {
  if (orbit.options().quotient_letters)
    throw InvalidArgument("transition matrix needs a full orbit, not a letter quotient");
  const auto n = static_cast<Eigen::Index>(orbit.size());
  RationalMatrix p = RationalMatrix::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x)
    for (std::size_t k = 0; k < mu.size(); ++k) {
      const auto& member = orbit[static_cast<std::size_t>(x)];
      if (const auto* t = std::get_if<Transpose>(&mu.op(k)); t && t->j > member.size())
        throw InvalidArgument("mixing distribution does not match the orbit");
      const auto y = orbit.index_of(apply_op(member, mu.op(k)));
      if (!y) throw InvalidArgument("mixing distribution leaves the orbit: " + to_string(mu.op(k)));
      p(x, static_cast<Eigen::Index>(*y)) += mu.weights()[k];
    }
  return markov::StochasticMatrix<Rational>(std::move(p));
}

}  // namespace geiringer
