#include "geiringer/mixing.hpp"

#include "geiringer/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <set>
#include <thread>

namespace geiringer {

std::size_t count_matching(const Population& pop, const Schema& schema) {
  return static_cast<std::size_t>(
      std::ranges::count_if(pop, [&](const Rollout& r) { return matches(r, schema); }));
}

// MixingDistribution -----------------------------------------------------------

MixingDistribution::MixingDistribution(std::vector<RecombOp> ops, std::vector<Rational> weights)
    : ops_(std::move(ops)), weights_(std::move(weights)) {
  if (ops_.empty()) throw InvalidArgument("mixing distribution needs at least one op");
  if (ops_.size() != weights_.size()) throw InvalidArgument("ops and weights differ in length");
  if (std::set<RecombOp>(ops_.begin(), ops_.end()).size() != ops_.size())
    throw InvalidArgument("mixing distribution lists an op twice");
  Rational total = 0;
  for (const auto& w : weights_) {
    if (w <= 0) throw InvalidArgument("mixing weights must be positive");
    total += w;
  }
  if (total != 1) throw InvalidArgument("mixing weights sum to " + to_string(total) + ", not 1");

  Rational running = 0;
  cumulative_.reserve(weights_.size());
  for (const auto& w : weights_) {
    running += w;
    cumulative_.push_back(to_double(running));
  }
  cumulative_.back() = 1.0;
}

MixingDistribution MixingDistribution::normalized(std::vector<RecombOp> ops,
                                                  std::vector<Rational> weights) {
  Rational total = 0;
  for (const auto& w : weights) total += w;
  if (total <= 0) throw InvalidArgument("mixing weights must be positive");
  for (auto& w : weights) w /= total;
  return MixingDistribution(std::move(ops), std::move(weights));
}

std::size_t MixingDistribution::sample_index(double u) const {
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return std::min(static_cast<std::size_t>(it - cumulative_.begin()), ops_.size() - 1);
}

bool MixingDistribution::realizable_on(const Population& pop) const {
  const auto gens = enumerate_generators(pop, true);
  const std::set<RecombOp> allowed(gens.begin(), gens.end());
  return std::ranges::all_of(ops_, [&](const RecombOp& op) { return allowed.contains(op); });
}

bool MixingDistribution::covers(const Population& pop, bool include_transpositions) const {
  const auto gens = enumerate_generators(pop, include_transpositions);
  return std::set<RecombOp>(gens.begin(), gens.end()) ==
         std::set<RecombOp>(ops_.begin(), ops_.end());
}

MixingDistribution uniform_mixing(const Population& pop, bool include_transpositions) {
  auto ops = enumerate_generators(pop, include_transpositions);
  const Rational w(1, static_cast<long>(ops.size()));
  std::vector<Rational> weights(ops.size(), w);
  return MixingDistribution(std::move(ops), std::move(weights));
}

MixingDistribution lazy_mixing(const Population& pop, bool include_transpositions,
                               const Rational& identity_weight) {
  auto ops = enumerate_generators(pop, include_transpositions);
  std::vector<Rational> weights(ops.size(), Rational(1));
  weights.front() = identity_weight;  // enumerate_generators lists Identity first
  return MixingDistribution::normalized(std::move(ops), std::move(weights));
}

// RNG ------------------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

StreamRng::StreamRng(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(splitmix64(seed) ^ splitmix64(~stream))) {}

// Chain driver ---------------------------------------------------------------

namespace {

struct ReplicaResult {
  std::vector<std::uint64_t> counts;
  std::vector<std::vector<std::uint64_t>> trace;  // per trace point, per schema
};

using Chooser = std::function<const MixingDistribution&(History)>;

ReplicaResult walk(const Population& start, std::span<const Schema> schemata,
                   const ChainOptions& opt, StreamRng& rng, const Chooser& choose,
                   bool keep_history) {
  ReplicaResult res;
  res.counts.assign(schemata.size(), 0);
  std::vector<Population> history;
  Population x = start;

  auto step = [&] {
    const auto& mu = choose(history);
    if (keep_history) history.push_back(x);
    x = apply_op(x, mu.op(mu.sample_index(rng.uniform())));
  };

  for (std::size_t n = 0; n < opt.burn_in; ++n) step();
  for (std::size_t t = 0; t < opt.steps; ++t) {
    for (std::size_t s = 0; s < schemata.size(); ++s) res.counts[s] += count_matching(x, schemata[s]);
    if (opt.trace_every && (t + 1) % opt.trace_every == 0) res.trace.push_back(res.counts);
    if (t + 1 < opt.steps) step();
  }
  return res;
}

void validate(const ChainOptions& opt) {
  if (opt.steps < 1) throw InvalidArgument("steps must be >= 1");
  if (opt.replicas < 1) throw InvalidArgument("replicas must be >= 1");
}

FrequencyReport run_replicas(const Population& pop, std::span<const Schema> schemata,
                             const ChainOptions& opt,
                             const std::function<ReplicaResult(std::size_t)>& replica) {
  std::vector<ReplicaResult> results(opt.replicas);
  std::vector<std::exception_ptr> errors(opt.replicas);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (auto r = next++; r < opt.replicas; r = next++) {
      try {
        results[r] = replica(r);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  auto threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, opt.replicas);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  FrequencyReport rep;
  rep.b = pop.size();
  rep.options = opt;
  const double per_replica_total = static_cast<double>(pop.size()) * static_cast<double>(opt.steps);
  const auto R = static_cast<double>(opt.replicas);
  for (std::size_t s = 0; s < schemata.size(); ++s) {
    SchemaEstimate est{schemata[s], 0, 0, 0, {}};
    for (const auto& res : results) {
      est.total_count += res.counts[s];
      est.per_replica.push_back(static_cast<double>(res.counts[s]) / per_replica_total);
    }
    est.phi = static_cast<double>(est.total_count) / (per_replica_total * R);
    if (opt.replicas > 1) {
      double ss = 0;
      for (double v : est.per_replica) ss += (v - est.phi) * (v - est.phi);
      est.std_error = std::sqrt(ss / (R - 1)) / std::sqrt(R);
    }
    rep.estimates.push_back(std::move(est));
  }

  if (opt.trace_every) {
    const auto points = results.front().trace.size();
    for (std::size_t p = 0; p < points; ++p) {
      const auto t = (p + 1) * opt.trace_every;
      for (std::size_t s = 0; s < schemata.size(); ++s) {
        std::uint64_t total = 0;
        for (const auto& res : results) total += res.trace[p][s];
        rep.trace.push_back({t, s,
                             static_cast<double>(total) /
                                 (static_cast<double>(pop.size()) * static_cast<double>(t) * R)});
      }
    }
  }
  return rep;
}

}  // namespace

FrequencyReport run_chain(const Population& pop, const MixingDistribution& mu,
                          std::span<const Schema> schemata, const ChainOptions& options) {
  validate(options);
  if (!mu.realizable_on(pop))
    throw InvalidArgument("mixing distribution has ops that do not act on this population");
  const Chooser choose = [&](History) -> const MixingDistribution& { return mu; };
  return run_replicas(pop, schemata, options, [&](std::size_t r) {
    StreamRng rng(options.seed, r);
    return walk(pop, schemata, options, rng, choose, false);
  });
}

FrequencyReport run_nonhomogeneous(const Population& pop,
                                   std::span<const MixingDistribution> distributions,
                                   const ScheduleFactory& schedule,
                                   std::span<const Schema> schemata, const ChainOptions& options) {
  validate(options);
  if (distributions.empty()) throw InvalidArgument("at least one mixing distribution is required");
  for (const auto& mu : distributions)
    if (!mu.realizable_on(pop))
      throw InvalidArgument("mixing distribution has ops that do not act on this population");
  return run_replicas(pop, schemata, options, [&](std::size_t r) {
    StreamRng rng(options.seed, r);
    auto rule = schedule(r);
    const Chooser choose = [&](History h) -> const MixingDistribution& {
      const auto k = rule(h);
      if (k >= distributions.size())
        throw InvalidArgument("schedule chose distribution " + std::to_string(k) + " of " +
                              std::to_string(distributions.size()));
      return distributions[k];
    };
    return walk(pop, schemata, options, rng, choose, true);
  });
}

ScheduleFactory parity_schedule() {
  return [](std::size_t) -> Schedule {
    return [seen = std::size_t{0}, hits = std::size_t{0}](History h) mutable {
      for (; seen < h.size(); ++seen)
        if (h[seen] == h.front()) ++hits;
      return hits % 2;
    };
  };
}

ScheduleFactory alternating_schedule(std::size_t k) {
  if (k < 1) throw InvalidArgument("alternating schedule needs k >= 1");
  return [k](std::size_t) -> Schedule { return [k](History h) { return h.size() % k; }; };
}

void sample_trajectory(const Population& pop, const MixingDistribution& mu, std::size_t steps,
                       StreamRng& rng, const std::function<void(const Population&)>& observer) {
  Population x = pop;
  for (std::size_t t = 0; t < steps; ++t) {
    observer(x);
    if (t + 1 < steps) x = apply_op(x, mu.op(mu.sample_index(rng.uniform())));
  }
}

}  // namespace geiringer
