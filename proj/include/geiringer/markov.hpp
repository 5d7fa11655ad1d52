#pragma once

// Finite Markov chain instruments: stationary vectors, lumping quotients, generalized
// transition probabilities, ratio and contraction bounds, and matrix schedules.
//
// Distributions are row vectors and evolve as x <- x * P. Every routine is templated on
// the scalar: double (tolerance based) or Rational (exact).

#include "geiringer/eigen_rational.hpp"
#include "geiringer/errors.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace geiringer::markov {

using Index = Eigen::Index;

template <class S>
using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using RowVector = Eigen::Matrix<S, 1, Eigen::Dynamic>;

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double row_sum_tol() { return 1e-12; }
  static double stationary_tol() { return 1e-9; }
  static const char* mode() { return "float"; }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static Rational row_sum_tol() { return 0; }
  static Rational stationary_tol() { return 0; }
  static const char* mode() { return "rational"; }
};

template <class S>
S abs_value(const S& x) {
  return x < 0 ? S(-x) : x;
}

template <class S>
S l1_norm(const RowVector<S>& v) {
  S total = 0;
  for (Index i = 0; i < v.size(); ++i) total += abs_value<S>(v(i));
  return total;
}

template <class S>
S l1_distance(const RowVector<S>& a, const RowVector<S>& b) {
  return l1_norm<S>(RowVector<S>(a - b));
}

inline double to_double(double x) { return x; }
using geiringer::to_double;

/// Square, non-negative, rows summing to 1 (exactly for Rational, within 1e-12 otherwise).
template <class S>
class StochasticMatrix {
 public:
  using Scalar = S;

  explicit StochasticMatrix(Matrix<S> p) : p_(std::move(p)) {
    if (p_.rows() != p_.cols() || p_.rows() == 0)
      throw InvalidArgument("transition matrix must be square and non-empty");
    for (Index x = 0; x < p_.rows(); ++x) {
      S total = 0;
      for (Index y = 0; y < p_.cols(); ++y) {
        if (p_(x, y) < 0) throw InvalidArgument("transition matrix has a negative entry");
        total += p_(x, y);
      }
      if (abs_value<S>(S(total - 1)) > ScalarTraits<S>::row_sum_tol())
        throw InvalidArgument("row " + std::to_string(x) + " of transition matrix does not sum to 1");
    }
  }

  Index size() const noexcept { return p_.rows(); }
  const Matrix<S>& matrix() const noexcept { return p_; }
  const S& operator()(Index x, Index y) const { return p_(x, y); }

  RowVector<S> apply(const RowVector<S>& dist) const { return dist * p_; }

  /// Step by this matrix, then by `next`.
  StochasticMatrix then(const StochasticMatrix& next) const {
    return StochasticMatrix(p_ * next.p_, Trusted{});
  }

  StochasticMatrix<double> to_float() const {
    return StochasticMatrix<double>(
        p_.unaryExpr([](const S& v) { return to_double(v); }).eval());
  }

 private:
  struct Trusted {};
  StochasticMatrix(Matrix<S> p, Trusted) : p_(std::move(p)) {}

  Matrix<S> p_;
};

/// Assignment of states to blocks 0..k-1; every block non-empty.
class BlockPartition {
 public:
  explicit BlockPartition(std::vector<std::size_t> block_of) : block_of_(std::move(block_of)) {
    if (block_of_.empty()) throw InvalidArgument("partition must cover at least one state");
    blocks_ = *std::max_element(block_of_.begin(), block_of_.end()) + 1;
    std::vector<bool> used(blocks_, false);
    for (auto b : block_of_) used[b] = true;
    if (std::find(used.begin(), used.end(), false) != used.end())
      throw InvalidArgument("partition block ids must be 0..k-1 with no empty block");
  }

  static BlockPartition singletons(std::size_t n) {
    std::vector<std::size_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = i;
    return BlockPartition(std::move(ids));
  }
  static BlockPartition one_block(std::size_t n) { return BlockPartition(std::vector<std::size_t>(n, 0)); }
  /// Block 0 = A, block 1 = complement. Both must be non-empty.
  static BlockPartition two_block(std::size_t n, std::span<const Index> a) {
    std::vector<std::size_t> ids(n, 1);
    for (auto x : a) ids.at(static_cast<std::size_t>(x)) = 0;
    return BlockPartition(std::move(ids));
  }

  std::size_t size() const noexcept { return block_of_.size(); }
  std::size_t block_count() const noexcept { return blocks_; }
  std::size_t block_of(std::size_t x) const { return block_of_.at(x); }
  const std::vector<std::size_t>& assignment() const noexcept { return block_of_; }

  std::vector<Index> members(std::size_t block) const {
    std::vector<Index> out;
    for (std::size_t x = 0; x < block_of_.size(); ++x)
      if (block_of_[x] == block) out.push_back(static_cast<Index>(x));
    return out;
  }

 private:
  std::vector<std::size_t> block_of_;
  std::size_t blocks_ = 0;
};

// Stationary distributions ----------------------------------------------------

template <class S>
struct StationaryResult {
  RowVector<S> pi;
  /// Exactly one closed communicating class, so pi is the only stationary vector.
  bool unique = false;
  std::size_t closed_classes = 0;
  S residual = 0;
};

namespace detail {

/// reach[x][y]: y reachable from x in zero or more steps.
template <class S>
std::vector<std::vector<bool>> reachability(const Matrix<S>& p) {
  const auto n = static_cast<std::size_t>(p.rows());
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> stack{s};
    reach[s][s] = true;
    while (!stack.empty()) {
      const auto x = stack.back();
      stack.pop_back();
      for (std::size_t y = 0; y < n; ++y)
        if (!reach[s][y] && p(static_cast<Index>(x), static_cast<Index>(y)) > 0) {
          reach[s][y] = true;
          stack.push_back(y);
        }
    }
  }
  return reach;
}

/// Closed communicating classes ordered by their smallest member.
inline std::vector<std::vector<Index>> closed_classes(const std::vector<std::vector<bool>>& reach) {
  const auto n = reach.size();
  std::vector<std::vector<Index>> out;
  std::vector<bool> seen(n, false);
  for (std::size_t x = 0; x < n; ++x) {
    if (seen[x]) continue;
    std::vector<Index> cls;
    bool closed = true;
    for (std::size_t y = 0; y < n; ++y) {
      if (reach[x][y] && reach[y][x]) {
        cls.push_back(static_cast<Index>(y));
        seen[y] = true;
      } else if (reach[x][y]) {
        closed = false;
      }
    }
    if (closed) out.push_back(std::move(cls));
  }
  return out;
}

template <class S>
S sum_over(const RowVector<S>& v, std::span<const Index> set) {
  S total = 0;
  for (auto x : set) total += v(x);
  return total;
}

template <class S>
void require_stationary(const StochasticMatrix<S>& m, const RowVector<S>& pi) {
  if (pi.size() != m.size()) throw InvalidArgument("distribution size does not match matrix");
  if (l1_distance<S>(m.apply(pi), pi) > ScalarTraits<S>::stationary_tol())
    throw InvalidArgument("distribution is not stationary for the matrix");
}

inline std::vector<Index> complement(Index n, std::span<const Index> a) {
  std::vector<bool> in(static_cast<std::size_t>(n), false);
  for (auto x : a) in.at(static_cast<std::size_t>(x)) = true;
  std::vector<Index> out;
  for (Index x = 0; x < n; ++x)
    if (!in[static_cast<std::size_t>(x)]) out.push_back(x);
  return out;
}

}  // namespace detail

/// Solves pi P = pi on the first closed class; pi is zero elsewhere.
template <class S>
StationaryResult<S> stationary_distribution(const StochasticMatrix<S>& m) {
  const auto reach = detail::reachability<S>(m.matrix());
  const auto closed = detail::closed_classes(reach);
  const auto& cls = closed.front();  // a finite chain always has one
  const auto c = static_cast<Index>(cls.size());

  Matrix<S> a(c, c);
  for (Index i = 0; i < c; ++i)
    for (Index j = 0; j < c; ++j) a(i, j) = m(cls[j], cls[i]) - (i == j ? S(1) : S(0));
  for (Index j = 0; j < c; ++j) a(c - 1, j) = 1;
  Eigen::Matrix<S, Eigen::Dynamic, 1> rhs = Eigen::Matrix<S, Eigen::Dynamic, 1>::Zero(c);
  rhs(c - 1) = 1;
  const Eigen::Matrix<S, Eigen::Dynamic, 1> sol = a.fullPivLu().solve(rhs);

  StationaryResult<S> out;
  out.pi = RowVector<S>::Zero(m.size());
  for (Index i = 0; i < c; ++i) out.pi(cls[i]) = sol(i);
  out.closed_classes = closed.size();
  out.unique = closed.size() == 1;
  out.residual = l1_distance<S>(m.apply(out.pi), out.pi);
  const S tol = ScalarTraits<S>::exact ? S(0) : S(1e-12);
  if (out.residual > tol) throw NumericalError("stationary solve residual above tolerance");
  return out;
}

template <class S>
struct PowerIteration {
  RowVector<S> x;
  std::size_t iterations = 0;
  S last_change = 0;
  bool converged = false;
};

/// Iterates x <- x P until successive iterates differ by at most `tol` in L1.
template <class S>
PowerIteration<S> power_iterate(const StochasticMatrix<S>& m, RowVector<S> x0, const S& tol,
                                std::size_t max_iterations) {
  PowerIteration<S> out;
  out.x = std::move(x0);
  for (out.iterations = 0; out.iterations < max_iterations;) {
    RowVector<S> next = m.apply(out.x);
    out.last_change = l1_distance<S>(next, out.x);
    out.x = std::move(next);
    ++out.iterations;
    if (out.last_change <= tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

// Lumping ----------------------------------------------------------------------

template <class S>
RowVector<S> block_sums(const RowVector<S>& pi, const BlockPartition& part) {
  RowVector<S> out = RowVector<S>::Zero(static_cast<Index>(part.block_count()));
  for (std::size_t x = 0; x < part.size(); ++x)
    out(static_cast<Index>(part.block_of(x))) += pi(static_cast<Index>(x));
  return out;
}

/// Quotient chain on blocks weighted by the stationary vector pi (which must be positive).
template <class S>
StochasticMatrix<S> lump_quotient(const StochasticMatrix<S>& m, const RowVector<S>& pi,
                                  const BlockPartition& part) {
  if (part.size() != static_cast<std::size_t>(m.size()))
    throw InvalidArgument("partition size does not match matrix");
  for (Index x = 0; x < pi.size(); ++x)
    if (!(pi(x) > 0)) throw InvalidArgument("stationary distribution has a zero entry");
  detail::require_stationary(m, pi);

  const auto k = static_cast<Index>(part.block_count());
  Matrix<S> q = Matrix<S>::Zero(k, k);
  for (Index x = 0; x < m.size(); ++x) {
    const auto u = static_cast<Index>(part.block_of(static_cast<std::size_t>(x)));
    for (Index y = 0; y < m.size(); ++y)
      q(u, static_cast<Index>(part.block_of(static_cast<std::size_t>(y)))) += pi(x) * m(x, y);
  }
  const auto mass = block_sums(pi, part);
  for (Index u = 0; u < k; ++u) q.row(u) /= mass(u);
  if constexpr (!ScalarTraits<S>::exact) {
    for (Index u = 0; u < k; ++u) q.row(u) /= q.row(u).sum();  // rounding only
  }
  return StochasticMatrix<S>(std::move(q));
}

/// p_{A->B} = sum over a in A of pi(a)/pi(A) * p_{a->B}.
template <class S>
S generalized_transition(const StochasticMatrix<S>& m, const RowVector<S>& pi,
                         std::span<const Index> a, std::span<const Index> b) {
  if (a.empty()) throw InvalidArgument("source set must be non-empty");
  const S mass = detail::sum_over<S>(pi, a);
  if (!(mass > 0)) throw InvalidArgument("stationary mass of the source set is zero");
  S total = 0;
  for (auto x : a) {
    S to_b = 0;
    for (auto y : b) to_b += m(x, y);
    total += pi(x) * to_b;
  }
  return total / mass;
}

/// p_{A^c->A} / p_{A->A^c}, checked against pi(A)/pi(A^c).
template <class S>
S two_block_ratio(const StochasticMatrix<S>& m, const RowVector<S>& pi, std::span<const Index> a) {
  const auto ac = detail::complement(m.size(), a);
  if (a.empty() || ac.empty()) throw InvalidArgument("both blocks must be non-empty");
  const S out = generalized_transition<S>(m, pi, a, ac);
  if (out == 0) throw InvalidArgument("block A is absorbing (p_{A->A^c} = 0)");
  const S ratio = generalized_transition<S>(m, pi, ac, a) / out;
  const S direct = detail::sum_over<S>(pi, a) / detail::sum_over<S>(pi, ac);
  if (abs_value<S>(S(ratio - direct)) > ScalarTraits<S>::stationary_tol())
    throw NumericalError("transition ratio disagrees with stationary mass ratio");
  return ratio;
}

// Ratio bounds -----------------------------------------------------------------

/// lambda1 <= p_{b->A} <= kappa1 on B minus U; lambda2 <= p_{a->B} <= kappa2 on A minus U.
template <class S>
struct TransitionBounds {
  S lambda1, kappa1, lambda2, kappa2;
};

template <class S>
struct Interval {
  S lo, hi;
  bool contains(const S& x) const { return lo <= x && x <= hi; }
};

/// Bounds on pi(A)/pi(B) for complementary A, B given the rare-set fractions
/// eps >= pi(U & A)/pi(A) and delta >= pi(U & B)/pi(B).
template <class S>
Interval<S> ratio_bounds(const TransitionBounds<S>& t, const S& eps, const S& delta) {
  auto in_unit = [](const S& x) { return x >= 0 && x <= 1; };
  if (!in_unit(t.lambda1) || !in_unit(t.kappa1) || !in_unit(t.lambda2) || !in_unit(t.kappa2) ||
      t.lambda1 > t.kappa1 || t.lambda2 > t.kappa2)
    throw InvalidArgument("transition bounds need 0 <= lambda <= kappa <= 1");
  if (eps < 0 || eps >= 1 || delta < 0 || delta >= 1)
    throw InvalidArgument("eps and delta must lie in [0, 1)");
  const S lo_den = (1 - eps) * t.kappa2 + eps;
  const S hi_den = (1 - eps) * t.lambda2;
  if (lo_den == 0 || hi_den == 0) throw InvalidArgument("ratio bound has a zero denominator");
  return {(1 - delta) * t.lambda1 / lo_den, ((1 - delta) * t.kappa1 + delta) / hi_den};
}

/// Tightest lambda/kappa for complementary A, B = A^c outside the set U.
template <class S>
TransitionBounds<S> transition_bounds(const StochasticMatrix<S>& m, std::span<const Index> a,
                                      std::span<const Index> u) {
  const auto b = detail::complement(m.size(), a);
  const std::set<Index> rare(u.begin(), u.end());
  auto range = [&](std::span<const Index> from, std::span<const Index> to, S& lo, S& hi) {
    bool any = false;
    for (auto x : from) {
      if (rare.contains(x)) continue;
      S p = 0;
      for (auto y : to) p += m(x, y);
      if (!any || p < lo) lo = p;
      if (!any || p > hi) hi = p;
      any = true;
    }
    if (!any) throw InvalidArgument("every state of a block lies in the rare set");
  };
  TransitionBounds<S> t{0, 0, 0, 0};
  range(b, a, t.lambda1, t.kappa1);
  range(a, b, t.lambda2, t.kappa2);
  return t;
}

/// pi(U & X)/pi(X).
template <class S>
S rare_fraction(const RowVector<S>& pi, std::span<const Index> x, std::span<const Index> u) {
  const std::set<Index> rare(u.begin(), u.end());
  S in = 0, total = 0;
  for (auto s : x) {
    total += pi(s);
    if (rare.contains(s)) in += pi(s);
  }
  if (!(total > 0)) throw InvalidArgument("set has zero stationary mass");
  return in / total;
}

// Contraction --------------------------------------------------------------------

/// max(0, 1 - n * min entry): one step shrinks L1 distances between distributions by this.
template <class S>
S contraction_rate_bound(const StochasticMatrix<S>& m) {
  const S rate = S(1) - S(m.size()) * S(m.matrix().minCoeff());
  return rate < 0 ? S(0) : rate;
}

namespace detail {

using Pattern = std::vector<bool>;

template <class S>
Pattern positivity(const Matrix<S>& p) {
  Pattern out(static_cast<std::size_t>(p.size()));
  for (Index x = 0; x < p.rows(); ++x)
    for (Index y = 0; y < p.cols(); ++y)
      out[static_cast<std::size_t>(x * p.cols() + y)] = p(x, y) > 0;
  return out;
}

inline Pattern compose(const Pattern& a, const Pattern& b, std::size_t n) {
  Pattern out(n * n, false);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t z = 0; z < n; ++z)
      if (a[x * n + z])
        for (std::size_t y = 0; y < n; ++y)
          if (b[z * n + y]) out[x * n + y] = true;
  return out;
}

}  // namespace detail

/// Smallest k <= k_max such that every length-k product of family members is entrywise
/// positive, found by propagating the set of reachable positivity patterns.
template <class S>
std::optional<std::size_t> common_reachable_index(std::span<const StochasticMatrix<S>> family,
                                                  std::size_t k_max) {
  if (family.empty()) throw InvalidArgument("matrix family must be non-empty");
  const auto n = static_cast<std::size_t>(family.front().size());
  for (const auto& m : family)
    if (static_cast<std::size_t>(m.size()) != n) throw InvalidArgument("family matrices differ in size");

  std::set<detail::Pattern> base;
  for (const auto& m : family) base.insert(detail::positivity<S>(m.matrix()));
  std::set<detail::Pattern> current = base;
  for (std::size_t k = 1; k <= k_max; ++k) {
    const bool all_positive = std::all_of(current.begin(), current.end(), [](const auto& p) {
      return std::find(p.begin(), p.end(), false) == p.end();
    });
    if (all_positive) return k;
    std::set<detail::Pattern> next;
    for (const auto& p : current)
      for (const auto& f : base) next.insert(detail::compose(p, f, n));
    current = std::move(next);
  }
  return std::nullopt;
}

/// Smallest entry over all length-k products of family members.
template <class S>
S min_composition_entry(std::span<const StochasticMatrix<S>> family, std::size_t k) {
  if (family.empty() || k < 1) throw InvalidArgument("need a non-empty family and k >= 1");
  std::vector<Matrix<S>> current;
  for (const auto& m : family) current.push_back(m.matrix());
  for (std::size_t step = 1; step < k; ++step) {
    if (current.size() * family.size() > 1'000'000)
      throw InvalidArgument("too many compositions to enumerate");
    std::vector<Matrix<S>> next;
    for (const auto& p : current)
      for (const auto& f : family) next.push_back(p * f.matrix());
    current = std::move(next);
  }
  S best = current.front().minCoeff();
  for (const auto& p : current) best = std::min<S>(best, p.minCoeff());
  return best;
}

// Matrix schedules -------------------------------------------------------------

/// Mixture weights over the family for step t, given the distributions x_0..x_t so far.
template <class S>
using MatrixSchedule = std::function<std::vector<S>(std::size_t t, std::span<const RowVector<S>> history)>;

/// Evolves x_{t+1} = x_t * sum_k w_k(t) M_k and returns ||x_t - pi||_1 for t = 0..steps.
template <class S>
std::vector<S> run_matrix_schedule(std::span<const StochasticMatrix<S>> family, const RowVector<S>& pi,
                                   const MatrixSchedule<S>& schedule, const RowVector<S>& x0,
                                   std::size_t steps) {
  if (family.empty()) throw InvalidArgument("matrix family must be non-empty");
  for (const auto& m : family) {
    if (m.size() != pi.size()) throw InvalidArgument("family matrices differ in size");
    if (l1_distance<S>(m.apply(pi), pi) > ScalarTraits<S>::stationary_tol())
      throw InvalidArgument("family members do not share the stationary distribution");
  }
  if (x0.size() != pi.size()) throw InvalidArgument("initial distribution has the wrong size");

  std::vector<RowVector<S>> history{x0};
  std::vector<S> distances{l1_distance<S>(x0, pi)};
  for (std::size_t t = 0; t < steps; ++t) {
    const auto w = schedule(t, history);
    if (w.size() != family.size()) throw InvalidArgument("schedule weight count differs from family size");
    S total = 0;
    RowVector<S> next = RowVector<S>::Zero(pi.size());
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (w[k] < 0) throw InvalidArgument("schedule weights must be non-negative");
      total += w[k];
      if (w[k] != 0) next += w[k] * family[k].apply(history.back());
    }
    if (abs_value<S>(S(total - 1)) > ScalarTraits<S>::row_sum_tol())
      throw InvalidArgument("schedule weights must sum to 1");
    distances.push_back(l1_distance<S>(next, pi));
    history.push_back(std::move(next));
  }
  return distances;
}

// Markov inequality --------------------------------------------------------------

struct MarkovInequality {
  double mean = 0;
  double lhs = 0;    // fraction of samples strictly above lambda * mean
  double bound = 0;  // 1 / lambda
  bool holds = false;
};

inline MarkovInequality markov_inequality_check(std::span<const double> samples, double lambda) {
  if (samples.empty()) throw InvalidArgument("need at least one sample");
  if (!(lambda > 0)) throw InvalidArgument("lambda must be positive");
  double sum = 0;
  for (double s : samples) {
    if (s < 0) throw InvalidArgument("samples must be non-negative");
    sum += s;
  }
  MarkovInequality out;
  out.mean = sum / static_cast<double>(samples.size());
  const auto above = std::count_if(samples.begin(), samples.end(),
                                   [&](double s) { return s > lambda * out.mean; });
  out.lhs = static_cast<double>(above) / static_cast<double>(samples.size());
  out.bound = 1.0 / lambda;
  out.holds = out.lhs <= out.bound;
  return out;
}

}  // namespace geiringer::markov
