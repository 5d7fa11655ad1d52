#include "geiringer/prediction.hpp"

#include "geiringer/eigen_rational.hpp"
#include "geiringer/errors.hpp"
#include "geiringer/statistics.hpp"

#include <fstream>
#include <sstream>

namespace geiringer {

namespace {

Rational out_degree(const OrderTable& order, const DownwardReport& down, ClassId i) {
  return Rational(order.row_total(i) + down.down_sigma(i));
}

}  // namespace

Prediction predict_schema_frequency(const Population& pop, const Schema& schema) {
  if (pop.is_inflated())
    throw InvalidArgument("prediction is defined on the base population, not an inflation");
  Prediction p;
  p.homologous_exact = population_metrics(pop).homologous;
  if (schema.is_root()) {
    p.value = 1;
    return p;
  }

  const auto& pat = schema.pattern();
  const auto down = downward(pop);
  const auto order = order_table(pop);
  const auto& cls = pat.classes;

  const auto first = order.action(pat.action, cls.front());
  p.first_factor = Rational(first) / Rational(pop.size());
  p.zero_by_convention = first == 0;

  for (std::size_t q = 1; q < cls.size(); ++q) {
    const auto num = order.cls(cls[q - 1], cls[q]);
    if (num == 0) {
      p.step_factors.push_back(0);
      p.zero_by_convention = true;
    } else {
      p.step_factors.push_back(Rational(num) / out_degree(order, down, cls[q - 1]));
    }
  }

  if (pat.terminal) {
    const auto last = cls.back();
    p.last_factor = down.terminal_names(last).contains(*pat.terminal)
                        ? Rational(1) / out_degree(order, down, last)
                        : Rational(0);
  }

  if (p.zero_by_convention) {
    p.value = 0;
  } else {
    p.value = p.first_factor * p.last_factor;
    for (const auto& f : p.step_factors) p.value *= f;
  }
  return p;
}

PayoffMap parse_payoffs(std::string_view text) {
  PayoffMap out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first != std::string_view::npos && line[first] != '#') {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError("expected 'TERMINAL = RATIONAL'", line_no, 1);
      auto trim = [](std::string_view s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string_view::npos ? std::string_view{} : s.substr(a, b - a + 1);
      };
      const auto name = trim(line.substr(0, eq));
      if (name.empty()) throw ParseError("expected terminal name", line_no, 1);
      try {
        if (!out.emplace(std::string(name), parse_rational(trim(line.substr(eq + 1)))).second)
          throw ParseError("duplicate payoff for " + std::string(name), line_no, 1);
      } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), line_no, eq + 2);
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

PayoffMap load_payoffs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open payoff file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_payoffs(buf.str());
}

Rational predict_action_value(const Population& pop, const std::string& action,
                              const PayoffMap& payoffs) {
  const auto down = downward(pop);
  const auto order = order_table(pop);
  if (!down.action_down.contains(action))
    throw InvalidArgument("action '" + action + "' opens no rollout");

  const auto classes = down.classes();
  std::map<ClassId, Eigen::Index> index;
  for (auto c : classes) index.emplace(c, static_cast<Eigen::Index>(index.size()));
  const auto n = static_cast<Eigen::Index>(classes.size());

  RationalMatrix a = RationalMatrix::Identity(n, n);
  RationalVector r = RationalVector::Zero(n);
  for (auto i : classes) {
    const auto row = index.at(i);
    const auto d = out_degree(order, down, i);
    for (auto j : down.successors(i)) a(row, index.at(j)) -= Rational(order.cls(i, j)) / d;
    if (const auto it = down.terminal_down.find(i); it != down.terminal_down.end())
      for (const auto& t : it->second) {
        const auto pay = payoffs.find(t.name);
        if (pay == payoffs.end()) throw InvalidArgument("no payoff for terminal " + t.name);
        r(row) += pay->second / d;
      }
  }

  const auto lu = a.fullPivLu();
  if (!lu.isInvertible()) throw NumericalError("absorbing system is singular");
  const RationalVector v = lu.solve(r);

  Rational total = 0;
  Rational value = 0;
  for (auto i : down.action_down.at(action)) {
    const Rational w(order.action(action, i));
    total += w;
    value += w * v(index.at(i));
  }
  return value / total;
}

}  // namespace geiringer
