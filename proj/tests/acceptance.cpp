// Acceptance run: one line per criterion, non-zero exit if any fails.

#include "geiringer/cli.hpp"
#include "geiringer/core.hpp"
#include "geiringer/markov.hpp"
#include "geiringer/mixing.hpp"
#include "geiringer/orbit.hpp"
#include "geiringer/prediction.hpp"
#include "geiringer/recombination.hpp"
#include "geiringer/statistics.hpp"
#include "support/random_chain.hpp"
#include "support/support.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>

using namespace geiringer;
namespace mk = geiringer::markov;
using Json = nlohmann::json;
using support::fixture;

namespace {

// Tolerances and budgets -----------------------------------------------------------

constexpr double kChainTol = 0.01;          // |phi - exact| for 1e5-step chains
constexpr double kSumTol = 1e-12;           // row/column sums of transition matrices
constexpr double kUniformTol = 1e-9;        // L1 distance of power iterate to uniform
constexpr double kLumpTol = 1e-12;          // block pi stationary for the quotient (float)
constexpr double kRatioTol = 1e-9;          // two-block ratio identity (float)
constexpr double kContractionSlack = 1e-12; // contraction and schedule bounds
constexpr std::size_t kChainSteps = 100000;
constexpr std::size_t kOrbitCap = 200000;
constexpr std::size_t kLargeOrbitCap = 1000000;  // p1 at m = 3 has 216000 letter classes

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string str(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Schema schema(const char* text) { return parse_schema(text); }

// 1 -----------------------------------------------------------------------------

Outcome ac_stats() {
  std::ostringstream out, err;
  Outcome o;
  const int code = cli::run_command({"stats", support::fixture_path("p7.pop")}, out, err);
  o.require(code == 0, "stats exited with " + std::to_string(code) + ": " + err.str());
  if (!o.pass) return o;
  const auto j = Json::parse(out.str());

  const auto expected_down = Json::parse(R"({
    "actions": {"alpha": [1], "beta": [2], "gamma": [4], "pi": [3], "xi": [2, 3]},
    "classes": {"1": [2, 3, 4, 5], "2": [1, 4, 6, 7, "f6"], "3": [1, 2, 6, 7], "4": [2, 6, "f5"],
                "5": [6, "f3", "f4"], "6": [3, 5, "f2", "f7"], "7": [5, "f1"]}})");
  const auto expected_sigma = Json::parse(R"({"1": 0, "2": 1, "3": 0, "4": 1, "5": 2, "6": 2, "7": 1})");
  const auto expected_order = Json::parse(R"({
    "actions": {"alpha": {"1": 2}, "beta": {"2": 1}, "gamma": {"4": 1}, "pi": {"3": 1}, "xi": {"2": 1, "3": 1}},
    "classes": {"1": {"2": 1, "3": 1, "4": 1, "5": 1}, "2": {"1": 1, "4": 1, "6": 1, "7": 1},
                "3": {"1": 1, "2": 1, "6": 1, "7": 1}, "4": {"2": 1, "6": 1}, "5": {"6": 1},
                "6": {"3": 1, "5": 1}, "7": {"5": 1}}})");

  o.require(j["heights"] == Json::array({5, 4, 3, 5, 3, 1, 4}), "heights " + j["heights"].dump());
  o.require(j["down"] == expected_down, "down sets " + j["down"].dump());
  o.require(j["down_sigma"] == expected_sigma, "down_sigma " + j["down_sigma"].dump());
  int sigma_total = 0;
  for (const auto& [k, v] : j["down_sigma"].items()) sigma_total += v.get<int>();
  o.require(sigma_total == 7, "sum of down_sigma is " + std::to_string(sigma_total));
  o.require(j["order"] == expected_order, "order table " + j["order"].dump());
  o.detail = o.pass ? "sum down_sigma = 7, 19 nonzero Order entries" : o.detail;
  return o;
}

// 2 -----------------------------------------------------------------------------

Outcome ac_crossover() {
  const auto p7 = fixture("p7.pop");
  const auto q7 = fixture("q7.pop");
  const auto chi_expected = parse_population(
      "alpha: 1/a, 5/a, 6/a, 3/d, 7/a -> f1\n"
      "beta:  2/a, 1/b, 3/c, 6/d -> f2\n"
      "gamma: 4/a, 6/b, 5/b -> f3\n"
      "alpha: 1/d, 2/e, 6/c -> f7\n"
      "xi:    3/a, 2/c, 4/c -> f5\n"
      "xi:    2/d -> f6\n"
      "pi:    3/b, 1/c, 4/b, 2/b, 7/b, 5/c -> f4\n");
  const auto nu_expected = parse_population(
      "alpha: 1/a, 5/a, 6/a, 3/d, 7/a -> f1\n"
      "beta:  2/a, 1/b, 3/c, 6/d -> f2\n"
      "gamma: 4/a, 6/b, 5/b -> f3\n"
      "alpha: 1/d, 4/b, 2/b, 7/b, 5/c -> f4\n"
      "xi:    3/a, 2/c, 4/c -> f5\n"
      "xi:    2/d -> f6\n"
      "pi:    3/b, 1/c, 2/e, 6/c -> f7\n");
  const auto nu_q7_expected = parse_population(
      "alpha: 1/b, 3/c, 6/d -> f2\n"
      "beta:  2/b, 7/b, 5/c -> f4\n"
      "gamma: 4/a, 6/a, 5/a, 6/b, 3/d, 7/a -> f1\n"
      "alpha: 1/d, 2/c, 4/c -> f5\n"
      "xi:    3/a, 2/e, 6/c -> f7\n"
      "xi:    2/d -> f6\n"
      "pi:    3/b, 1/c, 4/b, 2/a, 1/a, 5/b -> f3\n");

  Outcome o;
  o.require(apply_op(p7, parse_op("chi(1,c,d)")) == chi_expected, "chi(1,c,d) on p7");
  o.require(apply_op(p7, parse_op("nu(1,c,d)")) == nu_expected, "nu(1,c,d) on p7");
  o.require(apply_op(q7, parse_op("chi(6,a,b)")) == q7, "chi(6,a,b) does not fix q7");
  o.require(apply_op(q7, parse_op("nu(6,a,b)")) == nu_q7_expected, "nu(6,a,b) on q7");
  const auto seq = parse_sequence("chi(1,c,d), chi(2,c,e), chi(5,a,b), chi(1,a,b), chi(2,a,b)");
  o.require(seq.size() == 5 && apply_sequence(p7, seq) == q7, "5-op sequence does not map p7 to q7");
  if (o.pass) o.detail = "4 single ops and the 5-op sequence match";
  return o;
}

// 3 -----------------------------------------------------------------------------

Outcome ac_involution() {
  constexpr int kTrials = 2000;
  std::mt19937_64 rng(0xAC03);
  Outcome o;
  int checked = 0;
  for (int t = 0; t < kTrials && o.pass; ++t) {
    const auto pop = support::random_population(rng);
    const auto op = support::random_generator(pop, rng);
    const auto image = apply_op(pop, op);
    const auto where = " (trial " + std::to_string(t) + ", " + to_string(op) + ")";
    o.require(apply_op(image, op) == pop, "not an involution" + where);
    o.require(downward(image) == downward(pop), "downward sets changed" + where);
    o.require(order_table(image) == order_table(pop), "order table changed" + where);
    o.require(population_metrics(image).total_states == population_metrics(pop).total_states,
              "total states changed" + where);
    try {
      o.require(parse_population(to_string(image)) == image, "image does not round-trip" + where);
    } catch (const Error& e) {
      o.require(false, std::string("image is not a valid population: ") + e.what() + where);
    }
    ++checked;
  }
  if (o.pass) o.detail = std::to_string(checked) + " pairs, 0 failures";
  return o;
}

// 4 -----------------------------------------------------------------------------

Outcome ac_homologous_oracle() {
  const auto p0 = fixture("p0.pop");
  const auto h = schema("alpha: 1 -> f1");
  Outcome o;
  const auto orbit = enumerate_orbit(p0, {.include_transpositions = true, .cap = kOrbitCap});
  o.require(orbit.size() == 8, "orbit size " + std::to_string(orbit.size()));
  const auto exact = exact_limit_frequency(orbit, h);
  o.require(exact == Rational(1, 4), "exact frequency " + to_string(exact));
  const auto pred = predict_schema_frequency(p0, h).value;
  o.require(pred == Rational(1, 4), "prediction " + to_string(pred));

  ChainOptions opt;
  opt.steps = kChainSteps;
  opt.replicas = 8;
  const std::vector<Schema> hs{h};
  const auto rep = run_chain(p0, uniform_mixing(p0, true), hs, opt);
  const double phi = rep.estimates[0].phi;
  o.require(std::abs(phi - 0.25) <= kChainTol, "chain phi " + str(phi));
  if (o.pass) o.detail = "orbit 8, exact 1/4, prediction 1/4, phi " + str(phi);
  return o;
}

// 5 -----------------------------------------------------------------------------

Outcome ac_homologous_inflation() {
  const auto p0 = fixture("p0.pop");
  const auto h = schema("alpha: 1 -> f1");
  const auto pred = predict_schema_frequency(p0, h).value;
  Outcome o;
  std::string sizes;
  for (std::uint32_t m = 1; m <= 3 && o.pass; ++m) {
    const auto pm = m == 1 ? p0 : inflate(p0, m);
    const auto orbit = enumerate_orbit(pm, {.include_transpositions = true, .cap = kOrbitCap, .quotient_letters = true});
    const auto exact = exact_limit_frequency(orbit, h);
    o.require(exact == pred, "m=" + std::to_string(m) + ": exact " + to_string(exact) + " vs " + to_string(pred));
    sizes += (sizes.empty() ? "" : ", ") + std::string("m=") + std::to_string(m) + " |orbit| " + orbit.full_size().str();
  }
  if (o.pass) o.detail = "all equal " + to_string(pred) + "; " + sizes;
  return o;
}

// 6 -----------------------------------------------------------------------------

Outcome ac_height_one() {
  const auto p1 = fixture("p1.pop");
  const auto h = schema("alpha: 1 -> #");
  const Rational formula(static_cast<long>(order_table(p1).action("alpha", 1)), static_cast<long>(p1.size()));
  Outcome o;
  o.require(formula == Rational(1, 2), "Order(alpha,1)/b = " + to_string(formula));
  for (std::uint32_t m = 1; m <= 2 && o.pass; ++m) {
    const auto pm = m == 1 ? p1 : inflate(p1, m);
    const auto orbit = enumerate_orbit(pm, {.include_transpositions = true, .cap = kOrbitCap, .quotient_letters = m > 1});
    const auto exact = exact_limit_frequency(orbit, h);
    o.require(exact == formula, "m=" + std::to_string(m) + ": exact " + to_string(exact));
  }
  if (o.pass) o.detail = "m=1,2 exact 1/2";
  return o;
}

// 7 -----------------------------------------------------------------------------

Outcome ac_convergence_in_m() {
  const auto p1 = fixture("p1.pop");
  const auto h = schema("alpha: 1, 2 -> f1");
  const auto pred = predict_schema_frequency(p1, h).value;
  std::vector<Rational> err;
  std::string values;
  for (std::uint32_t m = 1; m <= 3; ++m) {
    const auto pm = m == 1 ? p1 : inflate(p1, m);
    const auto orbit =
        enumerate_orbit(pm, {.include_transpositions = true, .cap = kLargeOrbitCap, .quotient_letters = true});
    const auto exact = exact_limit_frequency(orbit, h);
    err.push_back(abs(exact - pred));
    values += (values.empty() ? "" : ", ") + to_string(exact);
  }
  Outcome o;
  o.require(err[1] <= err[0] && err[2] <= err[1], "errors not monotone");
  o.require(err[2] < err[0], "m=3 error not below m=1 error");
  o.detail = "prediction " + to_string(pred) + "; exact " + values + "; errors " + to_string(err[0]) + ", " +
             to_string(err[1]) + ", " + to_string(err[2]) + (o.pass ? "" : " (" + o.detail + ")");
  return o;
}

// 8 -----------------------------------------------------------------------------

Outcome ac_doubly_stochastic() {
  Outcome o;
  double worst_sum = 0, worst_dist = 0;
  for (const char* name : {"p0.pop", "p1.pop"})
    for (bool tr : {true, false}) {
      const auto pop = fixture(name);
      const auto orbit = enumerate_orbit(pop, {.include_transpositions = tr, .cap = kOrbitCap});
      const auto exact = orbit_transition_matrix(orbit, uniform_mixing(pop, tr));
      const auto p = exact.to_float();
      const auto n = p.size();
      for (Eigen::Index k = 0; k < n; ++k) {
        worst_sum = std::max(worst_sum, std::abs(p.matrix().row(k).sum() - 1.0));
        worst_sum = std::max(worst_sum, std::abs(p.matrix().col(k).sum() - 1.0));
      }
      mk::RowVector<double> x0 = mk::RowVector<double>::Zero(n);
      x0(static_cast<Eigen::Index>(*orbit.index_of(pop))) = 1;
      const auto it = mk::power_iterate<double>(p, x0, 1e-15, 1000000);
      const mk::RowVector<double> uniform = mk::RowVector<double>::Constant(n, 1.0 / static_cast<double>(n));
      worst_dist = std::max(worst_dist, mk::l1_distance<double>(it.x, uniform));
    }
  o.require(worst_sum <= kSumTol, "row/column sum off by " + str(worst_sum));
  o.require(worst_dist <= kUniformTol, "power iterate is " + str(worst_dist) + " from uniform");
  o.detail = "max |sum-1| " + str(worst_sum) + ", max L1 to uniform " + str(worst_dist) +
             (o.pass ? "" : " (" + o.detail + ")");
  return o;
}

// 9 -----------------------------------------------------------------------------

Outcome ac_nonhomogeneous() {
  const auto p0 = fixture("p0.pop");
  const std::vector<Schema> hs{schema("alpha: 1 -> f1")};
  const std::vector<MixingDistribution> mus{uniform_mixing(p0, true), lazy_mixing(p0, true, Rational(2))};
  ChainOptions opt;
  opt.steps = kChainSteps;
  Outcome o;
  std::string detail;
  for (const auto& [label, factory] : {std::pair{"parity", parity_schedule()}, std::pair{"alternating", alternating_schedule(2)}}) {
    const double phi = run_nonhomogeneous(p0, mus, factory, hs, opt).estimates[0].phi;
    o.require(std::abs(phi - 0.25) <= kChainTol, std::string(label) + " schedule phi " + str(phi));
    detail += (detail.empty() ? "" : ", ") + std::string(label) + " phi " + str(phi);
  }
  o.detail = detail + (o.pass ? "" : " (" + o.detail + ")");
  return o;
}

// 10 ----------------------------------------------------------------------------

template <class S>
S to_scalar(const Rational& r) {
  if constexpr (std::is_same_v<S, Rational>) return r;
  else return to_double(r);
}

Outcome ac_lumping() {
  constexpr int kChains = 150;
  constexpr Eigen::Index n = 6;
  std::mt19937_64 rng(0xAC10);
  Outcome o;
  double worst_float = 0, worst_ratio = 0;
  for (int c = 0; c < kChains && o.pass; ++c) {
    const auto exact = support::random_rational_chain(rng, n);
    const auto k = std::uniform_int_distribution<std::size_t>(1, n)(rng);
    const auto part = support::random_partition(rng, n, k);
    const auto where = " (chain " + std::to_string(c) + ")";

    // exact arithmetic
    const auto pi = mk::stationary_distribution(exact).pi;
    const auto q = mk::lump_quotient(exact, pi, part);
    const auto block = mk::block_sums(pi, part);
    o.require(q.apply(block) == block, "rational quotient does not fix block pi" + where);

    // floating point on an independent random chain
    const auto m = support::random_chain(rng, n);
    const auto fpi = mk::stationary_distribution(m).pi;
    const auto fq = mk::lump_quotient(m, fpi, part);
    const auto fblock = mk::block_sums(fpi, part);
    worst_float = std::max(worst_float, mk::l1_distance<double>(fq.apply(fblock), fblock));

    // two blocks: quotient entries are the generalized transitions, and the ratio identity holds
    std::vector<Eigen::Index> a;
    for (Eigen::Index x = 0; x < n; ++x)
      if (rng() & 1) a.push_back(x);
    if (a.empty()) a.push_back(0);
    if (static_cast<Eigen::Index>(a.size()) == n) a.pop_back();
    const auto ac = mk::detail::complement(n, a);
    const auto two = mk::BlockPartition::two_block(n, a);
    const auto q2 = mk::lump_quotient(exact, pi, two);
    o.require(q2(0, 1) == mk::generalized_transition<Rational>(exact, pi, a, ac) &&
                  q2(1, 0) == mk::generalized_transition<Rational>(exact, pi, ac, a),
              "two-block quotient disagrees with generalized transitions" + where);
    Rational pa = 0;
    for (auto x : a) pa += pi(x);
    o.require(mk::two_block_ratio(exact, pi, a) == pa / (1 - pa), "exact ratio identity fails" + where);

    const auto fr = mk::two_block_ratio(m, fpi, a);
    double fpa = 0;
    for (auto x : a) fpa += fpi(x);
    worst_ratio = std::max(worst_ratio, std::abs(fr - fpa / (1 - fpa)));
  }
  o.require(worst_float <= kLumpTol, "float block pi residual " + str(worst_float));
  o.require(worst_ratio <= kRatioTol, "float ratio identity off by " + str(worst_ratio));
  o.detail = std::to_string(kChains) + " chains x 2 modes; float residual " + str(worst_float) + ", ratio error " +
             str(worst_ratio) + (o.pass ? "" : " (" + o.detail + ")");
  return o;
}

// 11 ----------------------------------------------------------------------------

mk::StochasticMatrix<double> permutation_mixture(std::mt19937_64& rng, Eigen::Index n, int terms) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::vector<double> w(static_cast<std::size_t>(terms));
  double total = 0;
  for (auto& v : w) total += (v = std::uniform_real_distribution<double>(0.1, 1.0)(rng));
  for (int t = 0; t < terms; ++t) {
    std::iota(perm.begin(), perm.end(), 0);
    if (t > 0) std::shuffle(perm.begin(), perm.end(), rng);  // first term is the identity
    for (Eigen::Index x = 0; x < n; ++x) p(x, perm[static_cast<std::size_t>(x)]) += w[static_cast<std::size_t>(t)] / total;
  }
  return mk::StochasticMatrix<double>(p);
}

struct ScheduleResult {
  bool ok = true;
  double worst_margin = -1;
};

ScheduleResult check_schedule(const std::vector<mk::StochasticMatrix<double>>& family, std::size_t k,
                              std::mt19937_64& rng, std::size_t steps) {
  const auto n = family.front().size();
  const double alpha = std::max(0.0, 1.0 - static_cast<double>(n) * mk::min_composition_entry<double>(family, k));
  const mk::RowVector<double> pi = mk::RowVector<double>::Constant(n, 1.0 / static_cast<double>(n));
  const auto f = family.size();

  std::vector<mk::MatrixSchedule<double>> schedules;
  schedules.emplace_back([f](std::size_t t, std::span<const mk::RowVector<double>>) {
    std::vector<double> w(f, 0.0);
    w[t % f] = 1;
    return w;
  });
  schedules.emplace_back([f, &rng](std::size_t, std::span<const mk::RowVector<double>>) {
    std::vector<double> w(f);
    double total = 0;
    for (auto& v : w) total += (v = std::uniform_real_distribution<double>(0.0, 1.0)(rng));
    for (auto& v : w) v /= total;
    return w;
  });
  schedules.emplace_back([&family, &pi, f](std::size_t, std::span<const mk::RowVector<double>> h) {
    std::size_t best = 0;
    double worst = -1;
    for (std::size_t j = 0; j < f; ++j) {
      const double d = mk::l1_distance<double>(family[j].apply(h.back()), pi);
      if (d > worst) worst = d, best = j;
    }
    std::vector<double> w(f, 0.0);
    w[best] = 1;
    return w;
  });

  ScheduleResult r;
  for (const auto& schedule : schedules)
    for (Eigen::Index start = 0; start < n; ++start) {
      mk::RowVector<double> x0 = mk::RowVector<double>::Zero(n);
      x0(start) = 1;
      const auto d = mk::run_matrix_schedule<double>(family, pi, schedule, x0, steps);
      for (std::size_t t = 0; t < d.size(); ++t) {
        const double bound = std::pow(alpha, static_cast<double>(t / k)) * d[0];
        r.worst_margin = std::max(r.worst_margin, d[t] - bound);
        if (d[t] > bound + kContractionSlack) r.ok = false;
      }
    }
  return r;
}

Outcome ac_contraction() {
  constexpr int kMatrices = 120;
  constexpr int kPairs = 1000;
  constexpr Eigen::Index n = 5;
  std::mt19937_64 rng(0xAC11);
  Outcome o;
  double worst_ratio_margin = -1;
  for (int c = 0; c < kMatrices; ++c) {
    const auto m = support::random_chain(rng, n);
    const double rate = mk::contraction_rate_bound(m);
    for (int p = 0; p < kPairs; ++p) {
      const auto u = support::random_distribution(rng, n);
      const auto v = support::random_distribution(rng, n);
      const double before = mk::l1_distance<double>(u, v);
      if (before == 0) continue;
      const double ratio = mk::l1_distance<double>(m.apply(u), m.apply(v)) / before;
      worst_ratio_margin = std::max(worst_ratio_margin, ratio - rate);
    }
  }
  o.require(worst_ratio_margin <= kContractionSlack, "contraction ratio exceeds 1 - n beta by " + str(worst_ratio_margin));

  // Lazy cycle and its reverse: common reachable index n - 1.
  int families = 0;
  double worst_schedule_margin = -1;
  {
    constexpr Eigen::Index c = 4;
    Eigen::MatrixXd cyc = Eigen::MatrixXd::Zero(c, c);
    for (Eigen::Index x = 0; x < c; ++x) cyc(x, (x + 1) % c) = 1;
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(c, c);
    const std::vector family{mk::StochasticMatrix<double>((id + cyc) / 2),
                             mk::StochasticMatrix<double>((id + cyc.transpose()) / 2)};
    const auto k = mk::common_reachable_index<double>(family, 10);
    o.require(k.has_value(), "lazy cycle family has no reachable index");
    if (k) {
      const auto r = check_schedule(family, *k, rng, 60);
      o.require(r.ok, "schedule bound fails on the lazy cycle family");
      worst_schedule_margin = std::max(worst_schedule_margin, r.worst_margin);
      ++families;
    }
  }
  // Random Birkhoff families (sparse mixtures of permutations, all with uniform pi); families
  // without a common reachable index up to 6 are redrawn.
  constexpr int kBirkhoffFamilies = 30;
  for (int attempt = 0, found = 0; found < kBirkhoffFamilies && attempt < 20 * kBirkhoffFamilies && o.pass;
       ++attempt) {
    const Eigen::Index size = std::uniform_int_distribution<Eigen::Index>(3, 6)(rng);
    std::vector<mk::StochasticMatrix<double>> family;
    const int members = std::uniform_int_distribution<int>(2, 3)(rng);
    for (int j = 0; j < members; ++j) family.push_back(permutation_mixture(rng, size, 3));
    const auto k = mk::common_reachable_index<double>(family, 6);
    if (!k) continue;
    const auto r = check_schedule(family, *k, rng, 40);
    o.require(r.ok, "schedule bound fails on Birkhoff family " + std::to_string(found));
    worst_schedule_margin = std::max(worst_schedule_margin, r.worst_margin);
    ++found;
    ++families;
  }
  o.require(families == 1 + kBirkhoffFamilies, "only " + std::to_string(families) + " families had a reachable index");
  o.detail = std::to_string(kMatrices) + " matrices x " + std::to_string(kPairs) + " pairs, worst margin " +
             str(worst_ratio_margin) + "; " + std::to_string(families) + " families x 3 schedules, worst margin " +
             str(worst_schedule_margin) + (o.pass ? "" : " (" + o.detail + ")");
  return o;
}

// 12 ----------------------------------------------------------------------------

/// 6 states, A = {0,1,2}, B = {3,4,5}, rare set U = {2,5} entered with small probability.
mk::StochasticMatrix<Rational> rare_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> w(1, 20);
  RationalMatrix p(6, 6);
  for (Eigen::Index x = 0; x < 6; ++x) {
    Rational total = 0;
    for (Eigen::Index y = 0; y < 6; ++y) {
      Rational v = w(rng);
      if ((y == 2 || y == 5) && x != y) v /= 50;
      total += (p(x, y) = v);
    }
    p.row(x) /= total;
  }
  return mk::StochasticMatrix<Rational>(p);
}

Outcome ac_markov_and_ratio() {
  Outcome o;
  // Markov inequality on rollout heights along mixing trajectories.
  std::vector<double> heights;
  for (const char* name : {"p7.pop", "p1.pop"}) {
    const auto pop = fixture(name);
    StreamRng rng(0xAC12, 0);
    sample_trajectory(pop, uniform_mixing(pop, true), 20000, rng, [&](const Population& x) {
      for (const auto& r : x) heights.push_back(static_cast<double>(r.height()));
    });
  }
  for (double lambda : {1.0, 1.25, 1.5, 2.0, 3.0, 5.0}) {
    const auto chk = mk::markov_inequality_check(heights, lambda);
    o.require(chk.holds, "Markov inequality fails at lambda " + str(lambda));
  }

  // Ratio bounds on constructed instances, exact and in floating point.
  constexpr int kInstances = 200;
  std::mt19937_64 rng(0xAC12);
  const std::vector<Eigen::Index> a{0, 1, 2}, b{3, 4, 5}, u{2, 5};
  int contained = 0;
  for (int i = 0; i < kInstances && o.pass; ++i) {
    const auto m = rare_instance(rng);
    const auto pi = mk::stationary_distribution(m).pi;
    const auto t = mk::transition_bounds(m, a, u);
    const Rational eps = mk::rare_fraction<Rational>(pi, a, u);
    const Rational delta = mk::rare_fraction<Rational>(pi, b, u);
    const Rational ratio = (pi(0) + pi(1) + pi(2)) / (pi(3) + pi(4) + pi(5));
    const auto where = " (instance " + std::to_string(i) + ")";
    o.require(mk::ratio_bounds(t, eps, delta).contains(ratio), "exact ratio outside bounds" + where);
    // looser rare-set estimates must still bracket the ratio
    const Rational slack(1, 20);
    o.require(mk::ratio_bounds(t, Rational(eps + slack), Rational(delta + slack)).contains(ratio),
              "ratio outside bounds with over-estimated eps, delta" + where);

    const auto fm = m.to_float();
    const auto fpi = mk::stationary_distribution(fm).pi;
    const auto ft = mk::transition_bounds(fm, a, u);
    const auto fiv = mk::ratio_bounds(ft, mk::rare_fraction<double>(fpi, a, u), mk::rare_fraction<double>(fpi, b, u));
    const double fr = to_double(ratio);
    o.require(fiv.lo <= fr + kRatioTol && fr <= fiv.hi + kRatioTol, "float ratio outside bounds" + where);
    if (o.pass) ++contained;
  }
  o.detail = std::to_string(heights.size()) + " height samples, 6 lambdas; " + std::to_string(contained) + "/" +
             std::to_string(kInstances) + " instances inside bounds" + (o.pass ? "" : " (" + o.detail + ")");
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "example statistics via stats", 1, ac_stats},
      {2, "example crossovers and sequence", 1, ac_crossover},
      {3, "involution and invariance properties", 30, ac_involution},
      {4, "homologous oracle agreement (p0)", 30, ac_homologous_oracle},
      {5, "homologous exactness for m = 1..3", 120, ac_homologous_inflation},
      {6, "height-one exactness (p1, m = 1,2)", 120, ac_height_one},
      {7, "non-homologous convergence in m (p1)", 300, ac_convergence_in_m},
      {8, "doubly-stochastic orbit chains", 60, ac_doubly_stochastic},
      {9, "non-homogeneous schedules (p0)", 60, ac_nonhomogeneous},
      {10, "lumping suite", 60, ac_lumping},
      {11, "contraction suite", 120, ac_contraction},
      {12, "Markov inequality and ratio bounds", 60, ac_markov_and_ratio},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.pass && secs > c.budget_seconds) {
      o.pass = false;
      o.detail += " (over time budget of " + str(c.budget_seconds) + " s)";
    }
    failures += o.pass ? 0 : 1;
    std::printf("[%s] AC-%d %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
  return failures == 0 ? 0 : 1;
}
