#include "geiringer/recombination.hpp"

#include "geiringer/errors.hpp"
#include "text_cursor.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

namespace geiringer {

namespace {

struct Position {
  std::size_t rollout;
  std::size_t index;
};

std::optional<Position> locate(const Population& pop, ClassId cls, const Letter& letter) {
  for (std::size_t r = 0; r < pop.size(); ++r) {
    const auto& states = pop[r].states;
    for (std::size_t k = 0; k < states.size(); ++k)
      if (states[k].cls == cls && states[k].letter == letter) return Position{r, k};
  }
  return std::nullopt;
}

template <class Op>
Op make_pair_op(ClassId cls, Letter x, Letter y) {
  if (cls == 0) throw InvalidArgument("equivalence class must be >= 1");
  if (x == y) throw InvalidArgument("crossover letters must differ");
  if (y < x) std::swap(x, y);
  Op op;
  op.cls = cls;
  op.x = std::move(x);
  op.y = std::move(y);
  return op;
}

bool is_letter_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::islower(u) || std::isdigit(u) || c == '_';
}

Letter parse_letter(detail::TextCursor& cur) {
  Letter l;
  l.base = cur.word(is_letter_char, "letter");
  if (cur.accept('.')) {
    l.copy = cur.unsigned_integer("copy index");
    if (l.copy == 0) cur.fail("copy index must be >= 1");
  }
  return l;
}

RecombOp parse_op_at(detail::TextCursor& cur) {
  const auto name = cur.word([](char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; },
                             "operator name");
  if (name == "id") return Identity{};
  cur.expect('(');
  RecombOp op;
  try {
    if (name == "chi" || name == "nu") {
      const auto cls = cur.unsigned_integer("equivalence class");
      cur.expect(',');
      auto x = parse_letter(cur);
      cur.expect(',');
      auto y = parse_letter(cur);
      op = name == "chi" ? RecombOp(one_point(cls, std::move(x), std::move(y)))
                         : RecombOp(single_swap(cls, std::move(x), std::move(y)));
    } else if (name == "swap") {
      const auto i = cur.unsigned_integer("rollout index");
      cur.expect(',');
      const auto j = cur.unsigned_integer("rollout index");
      op = transpose(i, j);
    } else {
      cur.fail("unknown operator '" + name + "'");
    }
  } catch (const InvalidArgument& e) {
    cur.fail(e.what());
  }
  cur.expect(')');
  return op;
}

}  // namespace

OnePoint one_point(ClassId cls, Letter x, Letter y) {
  return make_pair_op<OnePoint>(cls, std::move(x), std::move(y));
}

SingleSwap single_swap(ClassId cls, Letter x, Letter y) {
  return make_pair_op<SingleSwap>(cls, std::move(x), std::move(y));
}

Transpose transpose(std::size_t i, std::size_t j) {
  if (i < 1 || j <= i) throw InvalidArgument("transposition needs 1 <= i < j");
  return Transpose{i, j};
}

Population apply_one_point(const Population& pop, ClassId cls, const Letter& x, const Letter& y) {
  const auto px = locate(pop, cls, x);
  const auto py = locate(pop, cls, y);
  if (!px || !py || px->rollout == py->rollout) return pop;

  auto rollouts = pop.rollouts();
  const auto& r1 = pop[px->rollout];
  const auto& r2 = pop[py->rollout];
  auto& t1 = rollouts[px->rollout];
  auto& t2 = rollouts[py->rollout];

  t1.states.assign(r1.states.begin(), r1.states.begin() + static_cast<std::ptrdiff_t>(px->index));
  t1.states.insert(t1.states.end(), r2.states.begin() + static_cast<std::ptrdiff_t>(py->index),
                   r2.states.end());
  t1.terminal = r2.terminal;

  t2.states.assign(r2.states.begin(), r2.states.begin() + static_cast<std::ptrdiff_t>(py->index));
  t2.states.insert(t2.states.end(), r1.states.begin() + static_cast<std::ptrdiff_t>(px->index),
                   r1.states.end());
  t2.terminal = r1.terminal;

  return Population(detail::TrustedTag{}, std::move(rollouts));
}

Population apply_single_swap(const Population& pop, ClassId cls, const Letter& x, const Letter& y) {
  const auto px = locate(pop, cls, x);
  const auto py = locate(pop, cls, y);
  if (!px || !py) return pop;
  auto rollouts = pop.rollouts();
  std::swap(rollouts[px->rollout].states[px->index], rollouts[py->rollout].states[py->index]);
  return Population(detail::TrustedTag{}, std::move(rollouts));
}

Population apply_transposition(const Population& pop, std::size_t i, std::size_t j) {
  if (i < 1 || j <= i || j > pop.size())
    throw InvalidArgument("transposition (" + std::to_string(i) + "," + std::to_string(j) +
                          ") out of range for population of size " + std::to_string(pop.size()));
  auto rollouts = pop.rollouts();
  std::swap(rollouts[i - 1], rollouts[j - 1]);
  return Population(detail::TrustedTag{}, std::move(rollouts));
}

Population apply_op(const Population& pop, const RecombOp& op) {
  struct Visitor {
    const Population& pop;
    Population operator()(const Identity&) const { return pop; }
    Population operator()(const OnePoint& o) const { return apply_one_point(pop, o.cls, o.x, o.y); }
    Population operator()(const SingleSwap& o) const { return apply_single_swap(pop, o.cls, o.x, o.y); }
    Population operator()(const Transpose& o) const { return apply_transposition(pop, o.i, o.j); }
  };
  return std::visit(Visitor{pop}, op);
}

Population apply_sequence(const Population& pop, std::span<const RecombOp> seq) {
  Population current = pop;
  for (const auto& op : seq) current = apply_op(current, op);
  return current;
}

std::vector<RecombOp> enumerate_generators(const Population& pop, bool include_transpositions) {
  std::map<ClassId, std::set<Letter>> letters;
  for (const auto& r : pop)
    for (const auto& s : r.states) letters[s.cls].insert(s.letter);

  std::vector<RecombOp> ops{Identity{}};
  for (const auto& [cls, set] : letters) {
    const std::vector<Letter> sorted(set.begin(), set.end());
    for (std::size_t a = 0; a < sorted.size(); ++a)
      for (std::size_t b = a + 1; b < sorted.size(); ++b) {
        ops.emplace_back(one_point(cls, sorted[a], sorted[b]));
        ops.emplace_back(single_swap(cls, sorted[a], sorted[b]));
      }
  }
  if (include_transpositions)
    for (std::size_t i = 1; i <= pop.size(); ++i)
      for (std::size_t j = i + 1; j <= pop.size(); ++j) ops.emplace_back(Transpose{i, j});
  return ops;
}

std::string to_string(const RecombOp& op) {
  struct Visitor {
    std::string operator()(const Identity&) const { return "id"; }
    std::string operator()(const OnePoint& o) const { return pair("chi", o); }
    std::string operator()(const SingleSwap& o) const { return pair("nu", o); }
    std::string operator()(const Transpose& o) const {
      return "swap(" + std::to_string(o.i) + "," + std::to_string(o.j) + ")";
    }
    static std::string pair(const char* name, const LetterPairOp& o) {
      return std::string(name) + "(" + std::to_string(o.cls) + "," + to_string(o.x) + "," +
             to_string(o.y) + ")";
    }
  };
  return std::visit(Visitor{}, op);
}

RecombOp parse_op(std::string_view text) {
  detail::TextCursor cur(text, 1);
  auto op = parse_op_at(cur);
  cur.expect_end();
  return op;
}

TransformationSequence parse_sequence(std::string_view text) {
  detail::TextCursor cur(text, 1);
  TransformationSequence seq;
  if (cur.at_end()) return seq;
  do {
    seq.push_back(parse_op_at(cur));
  } while (cur.accept(','));
  cur.expect_end();
  return seq;
}

}  // namespace geiringer
