#ifndef TPT_SOLVERS_HPP
#define TPT_SOLVERS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "tpt/tensor.hpp"

namespace tpt {

// Numerical cross-checks for the analytic results: a scalar root scanner,
// damped fixed-point iteration on the simplex, and the stationary
// distribution of the first-order chain on history windows.

struct Bracket {
  enum class Kind { kSignChange, kEndpoint, kTangential };
  double lo = 0.0;
  double hi = 0.0;
  Kind kind = Kind::kSignChange;
};

struct RootSet {
  // Ascending, deduplicated within 1e-8.
  std::vector<double> roots;
  // Parallel to roots: the grid interval each root was isolated in.
  std::vector<Bracket> brackets;
};

// Scans f over a uniform grid on [0, 1], bisects every sign change down to
// an interval of width 1e-14, keeps endpoints with |f| <= tol, and polishes
// grid points where |f| dips below tol without changing sign (tangential
// roots). Throws std::runtime_error naming x if f returns a non-finite
// value. grid_points must be at least 1001.
RootSet root_scan(const std::function<double(double)>& f,
                  std::size_t grid_points = 100001, double tol = 1e-12);

struct FixedPointOptions {
  double tol = 1e-10;
  std::size_t max_iterations = 10000;
  // Updates use x <- (1 - damping) * map(x) + damping * x.
  double damping = 0.0;
};

struct IterationResult {
  SimplexPoint iterate;
  // Number of map evaluations performed.
  std::size_t iterations = 0;
  // Max-norm step size after each evaluation; size equals iterations.
  std::vector<double> residual_history;
  bool converged = false;
  // Geometric mean of the step-size ratios over the last ten steps; an
  // empirical contraction factor.
  double rate_estimate = 0.0;
};

// Iterates an arbitrary self-map of the simplex from x0. Stops as converged
// when the step size falls to tol, reporting the pre-update iterate. x0 must
// lie on the simplex within 1e-9 and damping in [0, 1).
IterationResult fixed_point_iterate(
    const std::function<std::vector<double>(std::span<const double>)>& map,
    std::span<const double> x0, const FixedPointOptions& opts = {});

// Convenience overloads iterating the tensor contraction map.
IterationResult fixed_point_iterate(const TransitionTensor& t,
                                    std::span<const double> x0,
                                    const FixedPointOptions& opts = {});
IterationResult fixed_point_iterate(const SymmetricFamily2& f,
                                    std::span<const double> x0,
                                    const FixedPointOptions& opts = {});

// The order-m tensor drives an ordinary Markov chain on length-(m-1)
// history windows: window (i2, ..., im) moves to (i1, i2, ..., i(m-1)) with
// probability p(i1 | i2..im). Windows are encoded as base-n integers with
// the oldest symbol in the lowest digit, so the tensor's linear layout and
// the window code line up.
class LiftedChain {
 public:
  // Cap on n^(m-1) window states.
  static constexpr std::size_t kMaxStates = std::size_t{1} << 20;

  explicit LiftedChain(const TransitionTensor& t);
  explicit LiftedChain(const SymmetricFamily2& f);

  int order() const { return order_; }
  int dim() const { return dim_; }
  std::size_t state_count() const { return states_; }

  // Probability of drawing next (1-based) from window w.
  double probability(std::size_t w, int next) const;
  // Window after drawing next from w.
  std::size_t successor(std::size_t w, int next) const;
  // Marginal distribution over the newest symbol of a window distribution.
  std::vector<double> marginal(std::span<const double> window_dist) const;

  // Dense row-stochastic matrix, rows = source window. Only for small
  // state counts; throws above 4096 states.
  std::vector<std::vector<double>> dense_matrix() const;

 private:
  int order_;
  int dim_;
  std::size_t states_;
  std::size_t window_div_;  // n^(m-2), the shift applied by successor()
  std::vector<double> dense_entries_;  // empty for the family constructor
  double a_ = 0.0;                     // family parameters when dense is empty
  double b_ = 0.0;
  bool from_family_ = false;
};

struct LiftedStationary {
  std::vector<double> window_distribution;
  std::vector<double> marginal;
  std::size_t iterations = 0;
  bool converged = false;
  // True when the chain is verified strongly connected and aperiodic; the
  // distribution is then the unique limit. Otherwise it is only a fixed
  // point reached from the uniform start.
  bool ergodic = false;
};

// Power iteration from the uniform window distribution, switching to the
// averaged map (d + dP)/2 if the step norms stop decreasing (periodic
// chains oscillate; the average still converges to a fixed point).
LiftedStationary matrix_stationary(const LiftedChain& chain, double tol = 1e-12,
                                   std::size_t max_iterations = 1000000);

}  // namespace tpt

#endif  // TPT_SOLVERS_HPP
