#pragma once

// Exact enumeration of the orbit [P] of a population under the generator set.
//
// Quotient mode stores one representative per letter relabeling: inside each class the
// letters are renamed, in reading order, to the class's sorted letter set. nu ops act on
// the orbit as exactly these relabelings and relabeling acts freely, so every
// representative stands for prod_i n_i! populations and uniform frequencies are unchanged.

#include "geiringer/core.hpp"
#include "geiringer/markov.hpp"
#include "geiringer/mixing.hpp"
#include "geiringer/rational.hpp"
#include "geiringer/recombination.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace geiringer {

struct OrbitOptions {
  bool include_transpositions = true;
  std::size_t cap = 200000;
  bool quotient_letters = false;
};

class OrbitIndex {
 public:
  /// Members in BFS layer order, sorted by canonical encoding inside each layer.
  const std::vector<Population>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  const Population& operator[](std::size_t k) const { return members_[k]; }

  std::optional<std::size_t> index_of(const Population& pop) const;

  const std::vector<RecombOp>& generators() const noexcept { return generators_; }
  const OrbitOptions& options() const noexcept { return options_; }
  std::size_t b() const noexcept { return members_.front().size(); }
  std::size_t layers() const noexcept { return layers_; }

  /// Size of the full orbit; equals size() unless letters are quotiented.
  const BigInt& full_size() const noexcept { return full_size_; }

 private:
  friend OrbitIndex enumerate_orbit(const Population&, const OrbitOptions&);

  std::vector<Population> members_;
  std::unordered_map<std::string, std::size_t> lookup_;
  std::vector<RecombOp> generators_;
  OrbitOptions options_;
  BigInt full_size_;
  std::size_t layers_ = 0;
};

/// Throws CapExceeded once more than options.cap members are discovered.
OrbitIndex enumerate_orbit(const Population& pop, const OrbitOptions& options = {});

/// Letter relabeling used by quotient mode.
Population canonicalize_letters(const Population& pop);

struct OrbitFrequency {
  Rational value;  // sum of matches over the orbit / (b * |orbit|)
  /// Fraction of members whose first rollout fits; computed when transpositions are on.
  std::optional<Rational> first_individual;
};

OrbitFrequency orbit_frequency(const OrbitIndex& orbit, const Schema& schema);

/// Uniform-orbit frequency; with transpositions also checks it equals the first-rollout
/// fraction and throws NumericalError otherwise.
Rational exact_limit_frequency(const OrbitIndex& orbit, const Schema& schema);

/// p_{X->Y} = sum of mu over ops sending X to Y. Full (non-quotient) orbits only.
markov::StochasticMatrix<Rational> orbit_transition_matrix(const OrbitIndex& orbit,
                                                           const MixingDistribution& mu);

}  // namespace geiringer
