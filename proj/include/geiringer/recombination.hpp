#pragma once

// Crossover operators on populations of rollouts.
//
//   chi(i,x,y)  one-point non-homologous crossover: when (i,x) and (i,y) sit in two
//               different rollouts, the tails from those states onward (terminals
//               included) are exchanged.
//   nu(i,x,y)   single position swap: (i,x) and (i,y) trade places, across two
//               rollouts or inside one.
//   swap(i,j)   transposition of rollouts i and j (1-based).
//
// Every operator is an involution; an operator whose states are absent (or, for chi,
// lie in a single rollout) fixes the population.

#include "geiringer/core.hpp"

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace geiringer {

struct Identity {
  bool operator==(const Identity&) const = default;
  auto operator<=>(const Identity&) const = default;
};

/// Shared shape of chi and nu. Letters are stored canonically with x < y.
struct LetterPairOp {
  ClassId cls = 0;
  Letter x;
  Letter y;

  bool operator==(const LetterPairOp&) const = default;
  auto operator<=>(const LetterPairOp&) const = default;
};

struct OnePoint : LetterPairOp {};
struct SingleSwap : LetterPairOp {};

struct Transpose {
  std::size_t i = 0;  // 1-based, i < j
  std::size_t j = 0;

  bool operator==(const Transpose&) const = default;
  auto operator<=>(const Transpose&) const = default;
};

using RecombOp = std::variant<Identity, OnePoint, SingleSwap, Transpose>;

/// Applied left to right: the first element acts first.
using TransformationSequence = std::vector<RecombOp>;

OnePoint one_point(ClassId cls, Letter x, Letter y);
SingleSwap single_swap(ClassId cls, Letter x, Letter y);
Transpose transpose(std::size_t i, std::size_t j);

Population apply_one_point(const Population& pop, ClassId cls, const Letter& x, const Letter& y);
Population apply_single_swap(const Population& pop, ClassId cls, const Letter& x, const Letter& y);
/// Throws InvalidArgument unless 1 <= i < j <= b.
Population apply_transposition(const Population& pop, std::size_t i, std::size_t j);

Population apply_op(const Population& pop, const RecombOp& op);
Population apply_sequence(const Population& pop, std::span<const RecombOp> seq);

/// Identity, then chi and nu for every class and unordered letter pair present in the
/// population (classes ascending, pairs lexicographic), then every transposition when
/// requested.
std::vector<RecombOp> enumerate_generators(const Population& pop, bool include_transpositions);

/// Textual form: "chi(1,c,d)", "nu(6,a.2,b.1)", "swap(1,2)", "id".
std::string to_string(const RecombOp& op);
RecombOp parse_op(std::string_view text);
/// Comma-separated list of ops; empty text gives the empty sequence.
TransformationSequence parse_sequence(std::string_view text);

}  // namespace geiringer
