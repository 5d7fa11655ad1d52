#include "geiringer/cli.hpp"

#include "geiringer/core.hpp"
#include "geiringer/errors.hpp"
#include "geiringer/markov.hpp"
#include "geiringer/matrix_io.hpp"
#include "geiringer/mixing.hpp"
#include "geiringer/orbit.hpp"
#include "geiringer/prediction.hpp"
#include "geiringer/statistics.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>

namespace geiringer::cli {

namespace {

using Json = nlohmann::ordered_json;

std::uint64_t parse_seed(const std::string& text) {
  std::size_t used = 0;
  std::uint64_t value = 0;
  try {
    value = std::stoull(text, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw InvalidArgument("invalid seed '" + text + "'");
  return value;
}

std::string seed_text(std::uint64_t seed) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%llX", static_cast<unsigned long long>(seed));
  return buf;
}

Json scalar_json(const Rational& r) { return to_string(r); }
Json scalar_json(double d) { return d; }

Json schema_list(const std::vector<Schema>& schemata) {
  Json out = Json::array();
  for (const auto& h : schemata) out.push_back(to_string(h));
  return out;
}

// Options -----------------------------------------------------------------------

struct PopulationOptions {
  std::string population;
  std::uint32_t inflate = 0;  // 0: use the file as is
  bool transpositions = true;
};

struct Options {
  PopulationOptions pop;
  std::vector<std::string> schemata;
  std::string seed;
  std::string format = "json";

  std::string action;
  std::string payoffs;

  std::size_t steps = 100000;
  std::size_t replicas = 1;
  std::size_t burn_in = 0;
  std::size_t trace_every = 0;
  std::string schedule = "none";
  std::string lazy_weight = "2";

  std::size_t cap = 200000;
  bool quotient = false;
  std::uint32_t max_inflation = 2;

  std::vector<std::string> matrices;
  std::string partition;
  std::string set;
  std::string rare;
  bool exact = false;
  std::size_t k_max = 10;
  std::size_t start = 0;
  std::string matrix_schedule = "alternating";
};

void add_population(CLI::App* cmd, Options& o, bool inflate, bool transpositions) {
  cmd->add_option("population", o.pop.population, "Population file")->required()->check(CLI::ExistingFile);
  if (inflate)
    cmd->add_option("--inflate", o.pop.inflate, "Inflate the population by this factor")->check(CLI::PositiveNumber);
  if (transpositions)
    cmd->add_flag("--include-transpositions,!--no-include-transpositions", o.pop.transpositions,
                  "Add rollout transpositions to the generator set (default on)");
}

void add_schemata(CLI::App* cmd, Options& o) {
  cmd->add_option("--schema", o.schemata, "Schema, e.g. \"alpha: 1, 2 -> #\" (repeatable)")->required();
}

void add_format(CLI::App* cmd, Options& o) {
  cmd->add_option("--out", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
}

Population load(const PopulationOptions& p) {
  auto pop = load_population(p.population);
  return p.inflate ? inflate(pop, p.inflate) : pop;
}

std::vector<Schema> load_schemata(const Options& o) {
  std::vector<Schema> out;
  for (const auto& s : o.schemata) out.push_back(parse_schema(s));
  return out;
}

Json population_config(const std::string& command, const Options& o) {
  Json c;
  c["command"] = command;
  c["population"] = o.pop.population;
  c["inflate"] = o.pop.inflate ? o.pop.inflate : 1;
  c["include_transpositions"] = o.pop.transpositions;
  return c;
}

// Population commands -------------------------------------------------------------

Json metrics_json(const Population& pop) {
  const auto m = population_metrics(pop);
  Json j;
  j["b"] = pop.size();
  j["heights"] = m.heights;
  j["total"] = m.total_states;
  j["homologous"] = m.homologous;
  return j;
}

int cmd_validate(const Options& o, std::ostream& out) {
  const auto pop = load(o.pop);
  Json j;
  j["config"] = population_config("validate", o);
  j["valid"] = true;
  j.update(metrics_json(pop));
  j["inflated"] = pop.is_inflated();
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_stats(const Options& o, std::ostream& out) {
  const auto pop = load(o.pop);
  const auto d = downward(pop);
  const auto t = order_table(pop);
  Json j;
  j["config"] = population_config("stats", o);
  j.update(metrics_json(pop));

  Json actions = Json::object();
  for (const auto& [a, set] : d.action_down) actions[a] = set;
  Json classes = Json::object();
  Json sigma = Json::object();
  for (auto i : d.classes()) {
    Json succ = Json::array();
    for (auto c : d.successors(i)) succ.push_back(c);
    for (const auto& f : d.terminal_names(i)) succ.push_back(f);
    classes[std::to_string(i)] = succ;
    sigma[std::to_string(i)] = d.down_sigma(i);
  }
  j["down"] = {{"actions", actions}, {"classes", classes}};
  j["down_sigma"] = sigma;

  Json order_actions = Json::object();
  for (const auto& [k, v] : t.action_entries()) order_actions[k.first][std::to_string(k.second)] = v;
  Json order_classes = Json::object();
  for (const auto& [k, v] : t.class_entries()) order_classes[std::to_string(k.first)][std::to_string(k.second)] = v;
  j["order"] = {{"actions", order_actions}, {"classes", order_classes}};
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_predict(const Options& o, std::ostream& out) {
  const auto pop = load(o.pop);
  const auto schemata = load_schemata(o);
  Json j;
  j["config"] = {{"command", "predict"}, {"population", o.pop.population}, {"schemata", schema_list(schemata)}};
  Json rows = Json::array();
  for (const auto& h : schemata) {
    const auto p = predict_schema_frequency(pop, h);
    Json steps = Json::array();
    for (const auto& f : p.step_factors) steps.push_back(to_string(f));
    rows.push_back({{"schema", to_string(h)},
                    {"value", to_string(p.value)},
                    {"decimal", to_double(p.value)},
                    {"first_factor", to_string(p.first_factor)},
                    {"step_factors", steps},
                    {"last_factor", to_string(p.last_factor)},
                    {"homologous_exact", p.homologous_exact},
                    {"zero_by_convention", p.zero_by_convention}});
  }
  j["predictions"] = rows;
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  const auto pop = load(o.pop);
  const auto pay = load_payoffs(o.payoffs);
  const auto v = predict_action_value(pop, o.action, pay);
  Json j;
  j["config"] = {{"command", "evaluate"}, {"population", o.pop.population}, {"action", o.action},
                 {"payoffs", o.payoffs}};
  j["value"] = to_string(v);
  j["decimal"] = to_double(v);
  j["start_distribution"] = "proportional to Order(action, class)";
  out << j.dump(2) << '\n';
  return kOk;
}

ChainOptions chain_options(const Options& o, std::uint64_t seed) {
  ChainOptions c;
  c.steps = o.steps;
  c.replicas = o.replicas;
  c.seed = seed;
  c.burn_in = o.burn_in;
  c.trace_every = o.trace_every;
  return c;
}

int cmd_mix(const Options& o, std::uint64_t seed, std::ostream& out) {
  const auto pop = load(o.pop);
  const auto schemata = load_schemata(o);
  const auto opt = chain_options(o, seed);

  FrequencyReport rep;
  if (o.schedule == "none") {
    rep = run_chain(pop, uniform_mixing(pop, o.pop.transpositions), schemata, opt);
  } else {
    const std::vector<MixingDistribution> mus{
        uniform_mixing(pop, o.pop.transpositions),
        lazy_mixing(pop, o.pop.transpositions, parse_rational(o.lazy_weight))};
    const auto factory = o.schedule == "parity" ? parity_schedule() : alternating_schedule(2);
    rep = run_nonhomogeneous(pop, mus, factory, schemata, opt);
  }

  if (o.format == "csv") {
    out << "step,schema_id,phi\n";
    if (rep.trace.empty())
      for (std::size_t s = 0; s < rep.estimates.size(); ++s)
        out << opt.steps << ',' << s << ',' << Json(rep.estimates[s].phi).dump() << '\n';
    for (const auto& t : rep.trace) out << t.step << ',' << t.schema_id << ',' << Json(t.phi).dump() << '\n';
    return kOk;
  }

  Json j;
  auto config = population_config("mix", o);
  config["schemata"] = schema_list(schemata);
  config["steps"] = opt.steps;
  config["replicas"] = opt.replicas;
  config["seed"] = seed_text(seed);
  config["burn_in"] = opt.burn_in;
  config["trace_every"] = opt.trace_every;
  config["schedule"] = o.schedule;
  if (o.schedule != "none") config["lazy_weight"] = o.lazy_weight;
  j["config"] = config;
  j["b"] = rep.b;
  Json est = Json::array();
  for (const auto& e : rep.estimates)
    est.push_back({{"schema", to_string(e.schema)},
                   {"phi", e.phi},
                   {"std_error", e.std_error},
                   {"count", e.total_count},
                   {"per_replica", e.per_replica}});
  j["estimates"] = est;
  if (!rep.trace.empty()) {
    Json trace = Json::array();
    for (const auto& t : rep.trace) trace.push_back({{"step", t.step}, {"schema_id", t.schema_id}, {"phi", t.phi}});
    j["trace"] = trace;
  }
  out << j.dump(2) << '\n';
  return kOk;
}

Json big_json(const BigInt& n) {
  if (n <= BigInt(std::numeric_limits<std::int64_t>::max())) return n.convert_to<std::int64_t>();
  return n.str();
}

int cmd_orbit(const Options& o, std::ostream& out) {
  const auto pop = load(o.pop);
  const auto schemata = load_schemata(o);
  OrbitOptions oo;
  oo.include_transpositions = o.pop.transpositions;
  oo.cap = o.cap;
  oo.quotient_letters = o.quotient;
  const auto orbit = enumerate_orbit(pop, oo);

  Json j;
  auto config = population_config("orbit", o);
  config["schemata"] = schema_list(schemata);
  config["cap"] = o.cap;
  config["quotient_letters"] = o.quotient;
  j["config"] = config;
  j["orbit_size"] = big_json(orbit.full_size());
  j["representatives"] = orbit.size();
  j["layers"] = orbit.layers();
  j["generators"] = orbit.generators().size();
  Json rows = Json::array();
  for (const auto& h : schemata) {
    const auto f = exact_limit_frequency(orbit, h);
    rows.push_back({{"schema", to_string(h)}, {"frequency", to_string(f)}, {"decimal", to_double(f)}});
  }
  j["frequencies"] = rows;
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_compare(const Options& o, std::uint64_t seed, std::ostream& out) {
  if (o.pop.inflate) throw InvalidArgument("compare inflates by itself; use --max-inflation");
  const auto base = load(o.pop);
  const auto schemata = load_schemata(o);
  const auto opt = chain_options(o, seed);

  struct Cell {
    std::uint32_t m;
    std::optional<BigInt> orbit_size;
    std::vector<Rational> exact;
    std::vector<SchemaEstimate> chain;
  };
  std::vector<Cell> cells;
  for (std::uint32_t m = 1; m <= o.max_inflation; ++m) {
    const auto pm = m == 1 ? base : inflate(base, m);
    Cell cell{m, std::nullopt, {}, {}};
    try {
      OrbitOptions oo;
      oo.include_transpositions = o.pop.transpositions;
      oo.cap = o.cap;
      oo.quotient_letters = o.quotient;
      const auto orbit = enumerate_orbit(pm, oo);
      cell.orbit_size = orbit.full_size();
      for (const auto& h : schemata) cell.exact.push_back(exact_limit_frequency(orbit, h));
    } catch (const CapExceeded&) {
    }
    cell.chain = run_chain(pm, uniform_mixing(pm, o.pop.transpositions), schemata, opt).estimates;
    cells.push_back(std::move(cell));
  }

  std::vector<Prediction> predictions;
  for (const auto& h : schemata) predictions.push_back(predict_schema_frequency(base, h));

  if (o.format == "csv") {
    out << "schema,m,prediction,exact,phi,std_error\n";
    for (std::size_t s = 0; s < schemata.size(); ++s)
      for (const auto& c : cells)
        out << '"' << to_string(schemata[s]) << "\"," << c.m << ',' << to_string(predictions[s].value) << ','
            << (c.orbit_size ? to_string(c.exact[s]) : "") << ',' << Json(c.chain[s].phi).dump() << ','
            << Json(c.chain[s].std_error).dump() << '\n';
    return kOk;
  }

  Json j;
  auto config = population_config("compare", o);
  config.erase("inflate");
  config["schemata"] = schema_list(schemata);
  config["max_inflation"] = o.max_inflation;
  config["cap"] = o.cap;
  config["quotient_letters"] = o.quotient;
  config["steps"] = opt.steps;
  config["replicas"] = opt.replicas;
  config["seed"] = seed_text(seed);
  config["burn_in"] = opt.burn_in;
  j["config"] = config;
  j["b"] = base.size();
  Json rows = Json::array();
  for (std::size_t s = 0; s < schemata.size(); ++s) {
    const auto& p = predictions[s];
    Json by_m = Json::array();
    for (const auto& c : cells) {
      Json e{{"m", c.m}};
      if (c.orbit_size) {
        e["orbit_size"] = big_json(*c.orbit_size);
        e["exact"] = to_string(c.exact[s]);
        e["exact_decimal"] = to_double(c.exact[s]);
        e["exact_minus_prediction"] = to_string(c.exact[s] - p.value);
      } else {
        e["orbit_size"] = nullptr;
        e["exact"] = nullptr;
        e["note"] = "orbit exceeds cap";
      }
      e["phi"] = c.chain[s].phi;
      e["std_error"] = c.chain[s].std_error;
      by_m.push_back(e);
    }
    rows.push_back({{"schema", to_string(schemata[s])},
                    {"prediction", to_string(p.value)},
                    {"prediction_decimal", to_double(p.value)},
                    {"homologous_exact", p.homologous_exact},
                    {"by_inflation", by_m}});
  }
  j["rows"] = rows;
  out << j.dump(2) << '\n';
  return kOk;
}

// Analysis commands ---------------------------------------------------------------

template <class S>
markov::StochasticMatrix<S> load_matrix(const std::string& path) {
  const auto m = load_matrix_csv(path);
  if constexpr (std::is_same_v<S, Rational>) {
    return markov::StochasticMatrix<Rational>(m);
  } else {
    return markov::StochasticMatrix<double>(m.unaryExpr([](const Rational& r) { return to_double(r); }).eval());
  }
}

template <class S>
Json vector_json(const markov::RowVector<S>& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(scalar_json(v(i)));
  return out;
}

template <class S>
Json matrix_json(const markov::Matrix<S>& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vector_json<S>(m.row(i)));
  return out;
}

Json analyze_config(const std::string& sub, const Options& o) {
  Json c;
  c["command"] = "analyze " + sub;
  c["matrices"] = o.matrices;
  c["mode"] = o.exact ? "rational" : "float";
  return c;
}

std::vector<Eigen::Index> state_set(const std::string& text, Eigen::Index n, const char* what) {
  auto out = parse_index_list(text);
  for (auto x : out)
    if (x >= n) throw InvalidArgument(std::string(what) + " mentions state " + std::to_string(x) + " of " + std::to_string(n));
  std::ranges::sort(out);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

template <class S>
int analyze_stationary(const Options& o, std::ostream& out) {
  const auto m = load_matrix<S>(o.matrices.front());
  const auto r = markov::stationary_distribution(m);
  Json j;
  j["config"] = analyze_config("stationary", o);
  j["pi"] = vector_json<S>(r.pi);
  j["unique"] = r.unique;
  j["closed_classes"] = r.closed_classes;
  j["residual"] = scalar_json(r.residual);
  out << j.dump(2) << '\n';
  return kOk;
}

template <class S>
int analyze_lump(const Options& o, std::ostream& out) {
  const auto m = load_matrix<S>(o.matrices.front());
  const auto part = load_partition(o.partition);
  const auto pi = markov::stationary_distribution(m).pi;
  const auto q = markov::lump_quotient(m, pi, part);
  const auto block_pi = markov::block_sums(pi, part);
  Json j;
  auto config = analyze_config("lump", o);
  config["partition"] = o.partition;
  j["config"] = config;
  j["pi"] = vector_json<S>(pi);
  j["quotient"] = matrix_json<S>(q.matrix());
  j["block_pi"] = vector_json<S>(block_pi);
  j["block_pi_residual"] = scalar_json(markov::l1_distance<S>(q.apply(block_pi), block_pi));
  out << j.dump(2) << '\n';
  return kOk;
}

template <class S>
int analyze_ratio(const Options& o, std::ostream& out) {
  const auto m = load_matrix<S>(o.matrices.front());
  const auto pi = markov::stationary_distribution(m).pi;
  const auto a = state_set(o.set, m.size(), "--set");
  const auto ac = markov::detail::complement(m.size(), a);
  const auto ratio = markov::two_block_ratio(m, pi, a);
  Json j;
  auto config = analyze_config("ratio", o);
  config["set"] = a;
  if (!o.rare.empty()) config["rare"] = o.rare;
  j["config"] = config;
  j["p_A_to_Ac"] = scalar_json(markov::generalized_transition<S>(m, pi, a, ac));
  j["p_Ac_to_A"] = scalar_json(markov::generalized_transition<S>(m, pi, ac, a));
  j["ratio"] = scalar_json(ratio);
  if (!o.rare.empty()) {
    const auto u = state_set(o.rare, m.size(), "--rare");
    const auto t = markov::transition_bounds(m, a, u);
    const S eps = markov::rare_fraction<S>(pi, a, u);
    const S delta = markov::rare_fraction<S>(pi, ac, u);
    const auto iv = markov::ratio_bounds(t, eps, delta);
    j["bounds"] = {{"epsilon", scalar_json(eps)},
                   {"delta", scalar_json(delta)},
                   {"lambda1", scalar_json(t.lambda1)},
                   {"kappa1", scalar_json(t.kappa1)},
                   {"lambda2", scalar_json(t.lambda2)},
                   {"kappa2", scalar_json(t.kappa2)},
                   {"lower", scalar_json(iv.lo)},
                   {"upper", scalar_json(iv.hi)},
                   {"contains_ratio", iv.contains(ratio)}};
  }
  out << j.dump(2) << '\n';
  return kOk;
}

template <class S>
int analyze_contraction(const Options& o, std::ostream& out) {
  const auto m = load_matrix<S>(o.matrices.front());
  Json j;
  j["config"] = analyze_config("contraction", o);
  j["n"] = m.size();
  j["min_entry"] = scalar_json(S(m.matrix().minCoeff()));
  j["rate"] = scalar_json(markov::contraction_rate_bound(m));
  out << j.dump(2) << '\n';
  return kOk;
}

template <class S>
std::vector<markov::StochasticMatrix<S>> load_family(const Options& o) {
  std::vector<markov::StochasticMatrix<S>> family;
  for (const auto& path : o.matrices) family.push_back(load_matrix<S>(path));
  return family;
}

template <class S>
int analyze_reachable(const Options& o, std::ostream& out) {
  const auto family = load_family<S>(o);
  const auto k = markov::common_reachable_index<S>(family, o.k_max);
  Json j;
  auto config = analyze_config("reachable-index", o);
  config["k_max"] = o.k_max;
  j["config"] = config;
  if (k) {
    j["index"] = *k;
    const S beta = markov::min_composition_entry<S>(family, *k);
    const S alpha = std::max<S>(S(0), S(1 - S(family.front().size()) * beta));
    j["min_entry"] = scalar_json(beta);
    j["alpha"] = scalar_json(alpha);
  } else {
    j["index"] = nullptr;
  }
  out << j.dump(2) << '\n';
  return kOk;
}

int analyze_schedule(const Options& o, std::uint64_t seed, std::ostream& out) {
  using markov::RowVector;
  const auto family = load_family<double>(o);
  const auto n = family.front().size();
  if (static_cast<Eigen::Index>(o.start) >= n) throw InvalidArgument("--start is not a state of the chain");
  const auto pi = markov::stationary_distribution(family.front()).pi;
  RowVector<double> x0 = RowVector<double>::Zero(n);
  x0(static_cast<Eigen::Index>(o.start)) = 1;

  StreamRng rng(seed, 0);
  markov::MatrixSchedule<double> schedule;
  const auto f = family.size();
  if (o.matrix_schedule == "alternating") {
    schedule = [f](std::size_t t, std::span<const RowVector<double>>) {
      std::vector<double> w(f, 0.0);
      w[t % f] = 1;
      return w;
    };
  } else if (o.matrix_schedule == "random") {
    schedule = [f, &rng](std::size_t, std::span<const RowVector<double>>) {
      std::vector<double> w(f);
      double total = 0;
      for (auto& v : w) total += (v = rng.uniform() + 1e-9);
      for (auto& v : w) v /= total;
      return w;
    };
  } else {
    // adversary: the member that keeps the next distribution farthest from pi
    schedule = [&family, &pi, f](std::size_t, std::span<const RowVector<double>> h) {
      std::size_t best = 0;
      double worst = -1;
      for (std::size_t k = 0; k < f; ++k) {
        const double d = markov::l1_distance<double>(family[k].apply(h.back()), pi);
        if (d > worst) worst = d, best = k;
      }
      std::vector<double> w(f, 0.0);
      w[best] = 1;
      return w;
    };
  }
  const auto dist = markov::run_matrix_schedule<double>(family, pi, schedule, x0, o.steps);
  const auto k = markov::common_reachable_index<double>(family, o.k_max);
  std::optional<double> alpha;
  if (k) alpha = std::max(0.0, 1.0 - static_cast<double>(n) * markov::min_composition_entry<double>(family, *k));
  auto bound = [&](std::size_t t) -> Json {
    if (!alpha) return nullptr;
    return std::pow(*alpha, static_cast<double>(t / *k)) * dist.front();
  };

  if (o.format == "csv") {
    out << "step,distance,bound\n";
    for (std::size_t t = 0; t < dist.size(); ++t) out << t << ',' << Json(dist[t]).dump() << ',' << bound(t).dump() << '\n';
    return kOk;
  }
  Json j;
  auto config = analyze_config("schedule", o);
  config["mode"] = "float";
  config["schedule"] = o.matrix_schedule;
  config["steps"] = o.steps;
  config["start"] = o.start;
  config["k_max"] = o.k_max;
  config["seed"] = seed_text(seed);
  j["config"] = config;
  j["pi"] = vector_json<double>(pi);
  j["reachable_index"] = k ? Json(*k) : Json(nullptr);
  j["alpha"] = alpha ? Json(*alpha) : Json(nullptr);
  Json rows = Json::array();
  for (std::size_t t = 0; t < dist.size(); ++t) rows.push_back({{"step", t}, {"distance", dist[t]}, {"bound", bound(t)}});
  j["distances"] = rows;
  out << j.dump(2) << '\n';
  return kOk;
}

template <template <class> class F>
int dispatch_exact(const Options& o, std::ostream& out) {
  return o.exact ? F<Rational>::run(o, out) : F<double>::run(o, out);
}

#define GEIRINGER_ANALYZER(name, fn) \
  template <class S>                 \
  struct name {                      \
    static int run(const Options& o, std::ostream& out) { return fn<S>(o, out); } \
  };
GEIRINGER_ANALYZER(Stationary, analyze_stationary)
GEIRINGER_ANALYZER(Lump, analyze_lump)
GEIRINGER_ANALYZER(Ratio, analyze_ratio)
GEIRINGER_ANALYZER(Contraction, analyze_contraction)
GEIRINGER_ANALYZER(Reachable, analyze_reachable)
#undef GEIRINGER_ANALYZER

}  // namespace

std::uint64_t default_seed() {
  if (const char* env = std::getenv("GEIRINGER_SEED"); env && *env) return parse_seed(env);
  return 0xC0FFEE;
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Recombination limits for populations of rollouts", "geiringer"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "geiringer 1.0");
  Options o;

  auto* validate = app.add_subcommand("validate", "Parse and validate a population file");
  add_population(validate, o, true, false);

  auto* stats = app.add_subcommand("stats", "Downward sets, order counts and heights");
  add_population(stats, o, true, false);

  auto* predict = app.add_subcommand("predict", "Closed-form limiting frequency of schemata");
  add_population(predict, o, false, false);
  add_schemata(predict, o);

  auto* evaluate = app.add_subcommand("evaluate", "Expected terminal payoff of an action in the limit");
  add_population(evaluate, o, false, false);
  evaluate->add_option("--action", o.action, "Action to evaluate")->required();
  evaluate->add_option("--payoffs", o.payoffs, "File of 'TERMINAL = RATIONAL' lines")->required()->check(CLI::ExistingFile);

  auto add_chain = [&](CLI::App* cmd) {
    cmd->add_option("--steps", o.steps, "Populations counted per replica")->check(CLI::PositiveNumber);
    cmd->add_option("--replicas", o.replicas, "Independent replicas")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "RNG seed (decimal or 0x hex; default $GEIRINGER_SEED or 0xC0FFEE)");
    cmd->add_option("--burn-in", o.burn_in, "Transitions discarded before counting");
  };

  auto* mix = app.add_subcommand("mix", "Simulate the recombination chain and estimate frequencies");
  add_population(mix, o, true, true);
  add_schemata(mix, o);
  add_chain(mix);
  mix->add_option("--trace-every", o.trace_every, "Record running estimates every K steps");
  mix->add_option("--schedule", o.schedule, "Switch between uniform and lazy mixing")
      ->check(CLI::IsMember({"none", "parity", "alternating"}));
  mix->add_option("--lazy-weight", o.lazy_weight, "Identity weight of the lazy distribution, relative to 1");
  add_format(mix, o);

  auto* orbit = app.add_subcommand("orbit", "Enumerate the orbit and compute exact frequencies");
  add_population(orbit, o, true, true);
  add_schemata(orbit, o);
  orbit->add_option("--cap", o.cap, "Maximum orbit size")->check(CLI::PositiveNumber);
  orbit->add_flag("--quotient-letters,!--no-quotient-letters", o.quotient,
                  "Enumerate one representative per letter relabeling");

  auto* compare = app.add_subcommand("compare", "Prediction, exact orbit values and chain estimates side by side");
  add_population(compare, o, false, true);
  add_schemata(compare, o);
  add_chain(compare);
  compare->add_option("--max-inflation", o.max_inflation, "Largest inflation factor M")->check(CLI::PositiveNumber);
  compare->add_option("--cap", o.cap, "Maximum orbit size")->check(CLI::PositiveNumber);
  compare->add_flag("--quotient-letters,!--no-quotient-letters", o.quotient,
                    "Enumerate one representative per letter relabeling (default on)");
  add_format(compare, o);

  auto* analyze = app.add_subcommand("analyze", "Markov chain analysis on CSV matrices");
  analyze->require_subcommand(1);
  auto add_matrix = [&](CLI::App* cmd, bool many) {
    auto* opt = cmd->add_option("--matrix", o.matrices, many ? "Matrix CSV (repeatable)" : "Matrix CSV")
                    ->required()
                    ->check(CLI::ExistingFile);
    if (!many) opt->expected(1);
  };
  auto add_exact = [&](CLI::App* cmd) { cmd->add_flag("--exact", o.exact, "Exact rational arithmetic"); };
  auto* a_stat = analyze->add_subcommand("stationary", "Stationary distribution");
  add_matrix(a_stat, false);
  add_exact(a_stat);
  auto* a_lump = analyze->add_subcommand("lump", "Lumping quotient");
  add_matrix(a_lump, false);
  add_exact(a_lump);
  a_lump->add_option("--partition", o.partition, "Block id per state, one per line")->required()->check(CLI::ExistingFile);
  auto* a_ratio = analyze->add_subcommand("ratio", "Two-block transition ratio");
  add_matrix(a_ratio, false);
  add_exact(a_ratio);
  a_ratio->add_option("--set", o.set, "States of block A, e.g. \"0,2\"")->required();
  a_ratio->add_option("--rare", o.rare, "Rare set U for the ratio bounds");
  auto* a_con = analyze->add_subcommand("contraction", "Contraction rate bound");
  add_matrix(a_con, false);
  add_exact(a_con);
  auto* a_reach = analyze->add_subcommand("reachable-index", "Common reachable index of a family");
  add_matrix(a_reach, true);
  add_exact(a_reach);
  a_reach->add_option("--k-max", o.k_max, "Largest index tried")->check(CLI::PositiveNumber);
  auto* a_sched = analyze->add_subcommand("schedule", "Distance to stationarity under a matrix schedule");
  add_matrix(a_sched, true);
  a_sched->add_option("--steps", o.steps, "Steps")->check(CLI::PositiveNumber);
  a_sched->add_option("--schedule", o.matrix_schedule, "Schedule")
      ->check(CLI::IsMember({"alternating", "random", "adversarial"}));
  a_sched->add_option("--start", o.start, "Initial state (point mass)");
  a_sched->add_option("--k-max", o.k_max, "Largest reachable index tried")->check(CLI::PositiveNumber);
  a_sched->add_option("--seed", o.seed, "RNG seed for the random schedule");
  add_format(a_sched, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    if (std::find(args.begin(), args.end(), "compare") != args.end()) o.quotient = true;
    if (std::find(args.begin(), args.end(), "schedule") != args.end()) o.steps = 50;
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }

  try {
    const auto seed = o.seed.empty() ? default_seed() : parse_seed(o.seed);
    if (validate->parsed()) return cmd_validate(o, out);
    if (stats->parsed()) return cmd_stats(o, out);
    if (predict->parsed()) return cmd_predict(o, out);
    if (evaluate->parsed()) return cmd_evaluate(o, out);
    if (mix->parsed()) return cmd_mix(o, seed, out);
    if (orbit->parsed()) return cmd_orbit(o, out);
    if (compare->parsed()) return cmd_compare(o, seed, out);
    if (a_stat->parsed()) return dispatch_exact<Stationary>(o, out);
    if (a_lump->parsed()) return dispatch_exact<Lump>(o, out);
    if (a_ratio->parsed()) return dispatch_exact<Ratio>(o, out);
    if (a_con->parsed()) return dispatch_exact<Contraction>(o, out);
    if (a_reach->parsed()) return dispatch_exact<Reachable>(o, out);
    if (a_sched->parsed()) return analyze_schedule(o, seed, out);
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kCapExceeded;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}

}  // namespace geiringer::cli
