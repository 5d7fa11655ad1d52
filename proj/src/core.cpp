#include "geiringer/core.hpp"

#include "geiringer/errors.hpp"
#include "text_cursor.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace geiringer {

namespace {

bool is_action_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || u >= 0x80;
}
bool is_letter_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::islower(u) || std::isdigit(u) || c == '_';
}
bool is_name_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_';
}

std::uint32_t parse_copy_suffix(detail::TextCursor& cur) {
  if (!cur.accept('.')) return 0;
  const auto copy = cur.unsigned_integer("copy index");
  if (copy == 0) cur.fail("copy index must be >= 1");
  return copy;
}

StateLabel parse_state(detail::TextCursor& cur) {
  StateLabel state;
  state.cls = cur.unsigned_integer("equivalence class");
  if (state.cls == 0) cur.fail("equivalence class must be >= 1");
  cur.expect('/');
  state.letter.base = cur.word(is_letter_char, "letter");
  state.letter.copy = parse_copy_suffix(cur);
  return state;
}

Rollout parse_rollout(detail::TextCursor& cur) {
  Rollout r;
  r.action = cur.word(is_action_char, "action");
  cur.expect(':');
  if (cur.peek_is("->")) cur.fail("empty rollout: at least one state is required");
  r.states.push_back(parse_state(cur));
  while (cur.accept(',')) r.states.push_back(parse_state(cur));
  cur.expect("->");
  r.terminal.name = cur.word(is_name_char, "terminal label");
  r.terminal.copy = parse_copy_suffix(cur);
  cur.expect_end();
  return r;
}

}  // namespace

// Population -----------------------------------------------------------------

Population::Population(std::vector<Rollout> rollouts) : rollouts_(std::move(rollouts)) {
  if (rollouts_.empty()) throw ValidationError("population must contain at least one rollout");
  std::set<StateLabel> states;
  std::set<TerminalLabel> terminals;
  for (const auto& r : rollouts_) {
    if (r.action.empty()) throw ValidationError("rollout with empty action");
    if (r.states.empty()) throw ValidationError("empty rollout: at least one state is required");
    if (r.terminal.name.empty()) throw ValidationError("empty terminal label");
    for (const auto& s : r.states) {
      if (s.cls == 0) throw ValidationError("equivalence class must be >= 1");
      if (s.letter.base.empty()) throw ValidationError("empty letter");
      if (!states.insert(s).second)
        throw ValidationError("duplicate state label " + to_string(s));
    }
    if (!terminals.insert(r.terminal).second)
      throw ValidationError("duplicate terminal label " + to_string(r.terminal));
  }
}

bool Population::is_inflated() const {
  return std::ranges::any_of(rollouts_, [](const Rollout& r) {
    return r.terminal.copy != 0 ||
           std::ranges::any_of(r.states, [](const StateLabel& s) { return s.letter.copy != 0; });
  });
}

// Schema ---------------------------------------------------------------------

Schema::Schema(Pattern pattern) : pattern_(std::move(pattern)) {
  if (pattern_->action.empty()) throw ValidationError("schema action must be non-empty");
  if (pattern_->classes.empty()) throw ValidationError("schema needs at least one class entry");
  for (auto c : pattern_->classes)
    if (c == 0) throw ValidationError("schema class entries must be >= 1");
  if (pattern_->terminal && pattern_->terminal->empty())
    throw ValidationError("schema terminal name must be non-empty");
}

Schema Schema::open(std::string action, std::vector<ClassId> classes) {
  return Schema(Pattern{std::move(action), std::move(classes), std::nullopt});
}

Schema Schema::closed(std::string action, std::vector<ClassId> classes, std::string terminal) {
  return Schema(Pattern{std::move(action), std::move(classes), std::move(terminal)});
}

// Parsing --------------------------------------------------------------------

Population parse_population(std::string_view text) {
  std::vector<Rollout> rollouts;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    ++line_no;
    detail::TextCursor cur(line, line_no);
    cur.skip_space();
    if (!cur.at_end() && !cur.peek_is("#")) rollouts.push_back(parse_rollout(cur));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return Population(std::move(rollouts));
}

Population load_population(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open population file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_population(buf.str());
}

Schema parse_schema(std::string_view text) {
  detail::TextCursor cur(text, 1);
  cur.skip_space();
  if (cur.accept('#')) {
    cur.expect_end();
    return Schema::root();
  }
  Schema::Pattern p;
  p.action = cur.word(is_action_char, "action");
  cur.expect(':');
  if (cur.peek_is("->")) cur.fail("schema needs at least one class entry");
  do {
    const auto c = cur.unsigned_integer("equivalence class");
    if (c == 0) cur.fail("equivalence class must be >= 1");
    p.classes.push_back(c);
  } while (cur.accept(','));
  cur.expect("->");
  if (!cur.accept('#')) p.terminal = cur.word(is_name_char, "terminal label");
  cur.expect_end();
  return Schema(std::move(p));
}

// Printing -------------------------------------------------------------------

std::string to_string(const Letter& letter) {
  return letter.copy ? letter.base + "." + std::to_string(letter.copy) : letter.base;
}

std::string to_string(const StateLabel& state) {
  return std::to_string(state.cls) + "/" + to_string(state.letter);
}

std::string to_string(const TerminalLabel& terminal) {
  return terminal.copy ? terminal.name + "." + std::to_string(terminal.copy) : terminal.name;
}

std::string to_string(const Rollout& rollout) {
  std::string out = rollout.action + ": ";
  for (std::size_t i = 0; i < rollout.states.size(); ++i) {
    if (i) out += ", ";
    out += to_string(rollout.states[i]);
  }
  out += " -> " + to_string(rollout.terminal);
  return out;
}

std::string to_string(const Population& population) {
  std::string out;
  for (const auto& r : population) {
    out += to_string(r);
    out += '\n';
  }
  return out;
}

std::string to_string(const Schema& schema) {
  if (schema.is_root()) return "#";
  const auto& p = schema.pattern();
  std::string out = p.action + ": ";
  for (std::size_t i = 0; i < p.classes.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(p.classes[i]);
  }
  out += " -> " + p.terminal.value_or("#");
  return out;
}

std::ostream& operator<<(std::ostream& os, const Population& population) {
  return os << to_string(population);
}

std::ostream& operator<<(std::ostream& os, const Schema& schema) { return os << to_string(schema); }

// Queries --------------------------------------------------------------------

bool matches(const Rollout& rollout, const Schema& schema) {
  if (schema.is_root()) return true;
  const auto& p = schema.pattern();
  if (rollout.action != p.action || rollout.states.size() < p.classes.size()) return false;
  for (std::size_t i = 0; i < p.classes.size(); ++i)
    if (rollout.states[i].cls != p.classes[i]) return false;
  if (!p.terminal) return true;
  // copy indices on the terminal are ignored
  return rollout.states.size() == p.classes.size() && rollout.terminal.name == *p.terminal;
}

bool schema_leq(const Schema& g, const Schema& h) {
  if (g == h) return true;
  if (h.is_root()) return true;
  if (g.is_root()) return false;
  const auto& hp = h.pattern();
  const auto& gp = g.pattern();
  if (hp.terminal) return false;
  if (gp.action != hp.action || gp.classes.size() < hp.classes.size()) return false;
  if (!std::equal(hp.classes.begin(), hp.classes.end(), gp.classes.begin())) return false;
  return gp.terminal.has_value() || gp.classes.size() > hp.classes.size();
}

PopulationMetrics population_metrics(const Population& population) {
  PopulationMetrics m;
  std::map<ClassId, std::set<std::size_t>> positions;
  for (const auto& r : population) {
    m.heights.push_back(r.height());
    m.total_states += r.height();
    for (std::size_t i = 0; i < r.states.size(); ++i) positions[r.states[i].cls].insert(i);
  }
  m.homologous = std::ranges::all_of(positions, [](const auto& kv) { return kv.second.size() == 1; });
  return m;
}

}  // namespace geiringer
