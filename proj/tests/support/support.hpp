#pragma once

#include "geiringer/core.hpp"
#include "geiringer/recombination.hpp"

#include <random>
#include <set>
#include <string>

namespace support {

inline geiringer::Population fixture(const std::string& name) {
  return geiringer::load_population(std::string(GEIRINGER_FIXTURES_DIR) + "/" + name);
}

inline std::string fixture_path(const std::string& name) {
  return std::string(GEIRINGER_FIXTURES_DIR) + "/" + name;
}

/// Small random population: 1-5 rollouts, classes 1-4, letters a-f, heights 1-4.
inline geiringer::Population random_population(std::mt19937_64& rng) {
  using namespace geiringer;
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const char* actions[] = {"alpha", "beta", "gamma"};
  std::set<StateLabel> used;
  std::vector<Rollout> rollouts;
  const int b = pick(1, 5);
  for (int r = 0; r < b; ++r) {
    Rollout ro;
    ro.action = actions[pick(0, 2)];
    const int h = pick(1, 4);
    for (int k = 0; k < h; ++k) {
      for (int attempt = 0; attempt < 50; ++attempt) {
        StateLabel s{static_cast<ClassId>(pick(1, 4)), Letter{std::string(1, static_cast<char>('a' + pick(0, 5))), 0}};
        if (used.insert(s).second) {
          ro.states.push_back(s);
          break;
        }
      }
    }
    if (ro.states.empty()) break;
    ro.terminal = TerminalLabel{"f" + std::to_string(r + 1), 0};
    rollouts.push_back(std::move(ro));
  }
  return Population(std::move(rollouts));
}

inline geiringer::RecombOp random_generator(const geiringer::Population& pop, std::mt19937_64& rng) {
  const auto gens = geiringer::enumerate_generators(pop, true);
  return gens[std::uniform_int_distribution<std::size_t>(0, gens.size() - 1)(rng)];
}

}  // namespace support
