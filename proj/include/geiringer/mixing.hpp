#pragma once

// The recombination Markov chain on populations and empirical frequency estimates.

#include "geiringer/core.hpp"
#include "geiringer/rational.hpp"
#include "geiringer/recombination.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace geiringer {

/// Number of rollouts of `pop` fitting `schema`.
std::size_t count_matching(const Population& pop, const Schema& schema);

/// Number of entries of `xs` equal to any member of `set`, counting multiplicity.
template <class T>
std::size_t count_matching(std::span<const T> xs, std::span<const T> set) {
  std::size_t n = 0;
  for (const auto& x : xs)
    for (const auto& s : set)
      if (x == s) {
        ++n;
        break;
      }
  return n;
}

/// Finite law over recombination ops with positive rational weights summing to 1.
class MixingDistribution {
 public:
  MixingDistribution(std::vector<RecombOp> ops, std::vector<Rational> weights);

  /// Scales positive weights to sum 1.
  static MixingDistribution normalized(std::vector<RecombOp> ops, std::vector<Rational> weights);

  std::size_t size() const noexcept { return ops_.size(); }
  const std::vector<RecombOp>& ops() const noexcept { return ops_; }
  const std::vector<Rational>& weights() const noexcept { return weights_; }
  const RecombOp& op(std::size_t k) const { return ops_[k]; }

  /// Index of the op selected by u in [0, 1).
  std::size_t sample_index(double u) const;

  /// Every op acts on some state (or rollout pair) of `pop`.
  bool realizable_on(const Population& pop) const;
  /// Support is exactly enumerate_generators(pop, include_transpositions).
  bool covers(const Population& pop, bool include_transpositions) const;

 private:
  std::vector<RecombOp> ops_;
  std::vector<Rational> weights_;
  std::vector<double> cumulative_;
};

MixingDistribution uniform_mixing(const Population& pop, bool include_transpositions);

/// Full generator support with the identity weighted `identity_weight` times heavier than
/// every other generator.
MixingDistribution lazy_mixing(const Population& pop, bool include_transpositions,
                               const Rational& identity_weight);

/// 64-bit Mersenne twister seeded from (seed, stream) through splitmix64.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  StreamRng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

struct ChainOptions {
  std::size_t steps = 100000;  // populations counted per replica
  std::size_t replicas = 1;
  std::uint64_t seed = 0xC0FFEE;
  std::size_t burn_in = 0;      // transitions discarded before counting
  std::size_t trace_every = 0;  // 0 disables the trace
  std::size_t threads = 0;      // 0: hardware concurrency
};

struct SchemaEstimate {
  Schema schema;
  double phi = 0;
  double std_error = 0;
  std::uint64_t total_count = 0;
  std::vector<double> per_replica;
};

struct TracePoint {
  std::size_t step;       // populations counted so far
  std::size_t schema_id;  // index into the schema list
  double phi;             // running estimate averaged over replicas
};

struct FrequencyReport {
  std::size_t b = 0;
  ChainOptions options;
  std::vector<SchemaEstimate> estimates;
  std::vector<TracePoint> trace;
};

/// X_0 = pop, X_{n+1} = theta_n(X_n) with theta_n drawn from mu. Phi(h) counts X_0..X_{t-1}.
FrequencyReport run_chain(const Population& pop, const MixingDistribution& mu,
                          std::span<const Schema> schemata, const ChainOptions& options);

/// Populations X_0..X_{n-1} preceding the transition being chosen.
using History = std::span<const Population>;
/// Picks the distribution for X_n -> X_{n+1} from the history X_0..X_{n-1}. Called once per
/// transition in order, so implementations may keep incremental state.
using Schedule = std::function<std::size_t(History)>;
/// One fresh schedule per replica.
using ScheduleFactory = std::function<Schedule(std::size_t replica)>;

FrequencyReport run_nonhomogeneous(const Population& pop,
                                   std::span<const MixingDistribution> distributions,
                                   const ScheduleFactory& schedule,
                                   std::span<const Schema> schemata, const ChainOptions& options);

/// Index = parity of the number of history entries equal to X_0.
ScheduleFactory parity_schedule();
/// Index = n mod k.
ScheduleFactory alternating_schedule(std::size_t k);

/// Walks one trajectory of `steps` populations (X_0 first) and hands each to `observer`.
void sample_trajectory(const Population& pop, const MixingDistribution& mu, std::size_t steps,
                       StreamRng& rng, const std::function<void(const Population&)>& observer);

}  // namespace geiringer
