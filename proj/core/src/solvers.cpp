#include "tpt/solvers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tpt/analytic.hpp"
#include "tpt/numerics.hpp"

namespace tpt {

namespace {

double checked_eval(const std::function<double(double)>& f, double x) {
  double v = f(x);
  if (!std::isfinite(v)) {
    throw std::runtime_error("function evaluation returned a non-finite value at x = " +
                             format_double(x));
  }
  return v;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double flo) {
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = checked_eval(f, mid);
    if (fm == 0.0) return mid;
    if ((flo < 0.0) != (fm < 0.0)) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

// Golden-section minimization of |f|; enough for polishing a tolerance dip
// around one grid point.
double minimize_abs(const std::function<double(double)>& f, double lo, double hi) {
  constexpr double kGolden = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = std::abs(checked_eval(f, c));
  double fd = std::abs(checked_eval(f, d));
  for (int it = 0; it < 120 && b - a > 1e-14; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = std::abs(checked_eval(f, c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = std::abs(checked_eval(f, d));
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

RootSet root_scan(const std::function<double(double)>& f, std::size_t grid_points, double tol) {
  if (grid_points < 1001) throw std::invalid_argument("root scan needs at least 1001 grid points");
  if (!(tol > 0.0)) throw std::invalid_argument("root scan tolerance must be positive");

  const std::size_t n = grid_points;
  std::vector<double> fx(n);
  auto grid_x = [n](std::size_t i) {
    return static_cast<double>(i) / static_cast<double>(n - 1);
  };
  for (std::size_t i = 0; i < n; ++i) fx[i] = checked_eval(f, grid_x(i));

  struct Candidate {
    double root;
    double fval;
    Bracket bracket;
  };
  std::vector<Candidate> candidates;

  if (std::abs(fx[0]) <= tol) {
    candidates.push_back({0.0, std::abs(fx[0]), {0.0, grid_x(1), Bracket::Kind::kEndpoint}});
  }
  if (std::abs(fx[n - 1]) <= tol) {
    candidates.push_back(
        {1.0, std::abs(fx[n - 1]), {grid_x(n - 2), 1.0, Bracket::Kind::kEndpoint}});
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (fx[i] * fx[i + 1] < 0.0) {
      double root = bisect(f, grid_x(i), grid_x(i + 1), fx[i]);
      candidates.push_back(
          {root, std::abs(f(root)), {grid_x(i), grid_x(i + 1), Bracket::Kind::kSignChange}});
    }
  }

  // Tolerance dips without a sign change: tangential roots, or exact zeros
  // sitting on a grid point.
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (std::abs(fx[i]) > tol) continue;
    bool crossing = fx[i - 1] * fx[i] < 0.0 || fx[i] * fx[i + 1] < 0.0;
    if (crossing) continue;  // the sign-change pass already isolated it
    double best = minimize_abs(f, grid_x(i - 1), grid_x(i + 1));
    double fbest = std::abs(checked_eval(f, best));
    if (std::abs(fx[i]) < fbest) {
      best = grid_x(i);
      fbest = std::abs(fx[i]);
    }
    if (fbest <= tol) {
      candidates.push_back({best, fbest, {grid_x(i - 1), grid_x(i + 1), Bracket::Kind::kTangential}});
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& lhs, const Candidate& rhs) { return lhs.root < rhs.root; });

  RootSet result;
  std::vector<double> kept_fvals;
  for (const Candidate& cand : candidates) {
    if (!result.roots.empty() && cand.root - result.roots.back() <= 1e-8) {
      // Same root seen twice; keep the better evaluation.
      if (cand.fval < kept_fvals.back()) {
        result.roots.back() = cand.root;
        result.brackets.back() = cand.bracket;
        kept_fvals.back() = cand.fval;
      }
      continue;
    }
    result.roots.push_back(cand.root);
    result.brackets.push_back(cand.bracket);
    kept_fvals.push_back(cand.fval);
  }
  return result;
}

IterationResult fixed_point_iterate(
    const std::function<std::vector<double>(std::span<const double>)>& map,
    std::span<const double> x0, const FixedPointOptions& opts) {
  if (!(opts.damping >= 0.0 && opts.damping < 1.0)) {
    throw std::invalid_argument("damping must lie in [0,1)");
  }
  if (opts.max_iterations == 0) throw std::invalid_argument("max_iterations must be positive");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");

  NeumaierSum sum;
  for (double v : x0) {
    if (v < -1e-9) throw std::invalid_argument("start vector has a negative entry");
    sum.add(v);
  }
  if (std::abs(sum.value() - 1.0) > 1e-9) {
    throw std::invalid_argument("start vector does not sum to 1");
  }

  std::vector<double> x(x0.begin(), x0.end());
  IterationResult result;
  for (std::size_t k = 1; k <= opts.max_iterations; ++k) {
    std::vector<double> y = map(x);
    if (y.size() != x.size()) throw std::runtime_error("map changed the vector dimension");
    double step = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) step = std::max(step, std::abs(y[i] - x[i]));
    result.residual_history.push_back(step);
    if (step <= opts.tol) {
      result.converged = true;
      result.iterations = k;
      result.iterate = SimplexPoint{std::move(x), step};
      break;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = (1.0 - opts.damping) * y[i] + opts.damping * x[i];
    }
  }
  if (!result.converged) {
    result.iterations = opts.max_iterations;
    result.iterate = SimplexPoint{std::move(x), result.residual_history.back()};
  }

  // Empirical contraction factor: geometric mean of consecutive step ratios
  // over the last ten steps.
  const auto& hist = result.residual_history;
  std::size_t start = hist.size() > 11 ? hist.size() - 11 : 0;
  double product = 1.0;
  std::size_t count = 0;
  for (std::size_t i = start; i + 1 < hist.size(); ++i) {
    if (hist[i] <= 0.0) continue;
    product *= hist[i + 1] / hist[i];
    ++count;
  }
  result.rate_estimate = count > 0 ? std::pow(product, 1.0 / static_cast<double>(count)) : 0.0;
  return result;
}

IterationResult fixed_point_iterate(const TransitionTensor& t, std::span<const double> x0,
                                    const FixedPointOptions& opts) {
  return fixed_point_iterate(
      [&t](std::span<const double> v) { return contract(t, v); }, x0, opts);
}

namespace {

// Both components of the family contraction for a general (not necessarily
// normalized) two-vector. Term sums where the exact binomials allow it, the
// homogeneous resummation 1/2 (x+y)^(m-1) +- spread/2 (x-y)^(m-1) beyond.
std::vector<double> family_contract(const SymmetricFamily2& f, std::span<const double> v) {
  if (v.size() != 2) throw std::invalid_argument("family vectors have two entries");
  const double x = v[0];
  const double y = v[1];
  const unsigned d = static_cast<unsigned>(f.order() - 1);
  if (f.order() <= kMaxDirectOrder) {
    NeumaierSum first;
    NeumaierSum second;
    for (unsigned k = 0; k <= d; ++k) {
      double weight = static_cast<double>(binomial(static_cast<int>(d), static_cast<int>(k)));
      double monomial = weight * ipow(x, d - k) * ipow(y, k);
      first.add(((k % 2 == 0) ? f.a() : f.b()) * monomial);
      second.add(((k % 2 == 0) ? f.b() : f.a()) * monomial);
    }
    return {first.value(), second.value()};
  }
  double total = 0.5 * ipow(x + y, d);
  double skew = 0.5 * f.spread() * ipow(x - y, d);
  return {total + skew, total - skew};
}

}  // namespace

IterationResult fixed_point_iterate(const SymmetricFamily2& f, std::span<const double> x0,
                                    const FixedPointOptions& opts) {
  return fixed_point_iterate(
      [&f](std::span<const double> v) { return family_contract(f, v); }, x0, opts);
}

LiftedChain::LiftedChain(const TransitionTensor& t) : order_(t.order()), dim_(t.dim()) {
  std::size_t states = 1;
  for (int j = 0; j < order_ - 1; ++j) {
    if (states > kMaxStates / static_cast<std::size_t>(dim_)) {
      throw std::invalid_argument("window state space exceeds the lifted-chain cap");
    }
    states *= static_cast<std::size_t>(dim_);
  }
  states_ = states;
  window_div_ = states_ / static_cast<std::size_t>(dim_);
  dense_entries_ = t.entries();
}

LiftedChain::LiftedChain(const SymmetricFamily2& f) : order_(f.order()), dim_(2) {
  if (order_ - 1 > 20) {
    throw std::invalid_argument("window state space exceeds the lifted-chain cap");
  }
  states_ = std::size_t{1} << (order_ - 1);
  window_div_ = states_ / 2;
  a_ = f.a();
  b_ = f.b();
  from_family_ = true;
}

double LiftedChain::probability(std::size_t w, int next) const {
  if (from_family_) {
    int twos = std::popcount(w) + (next == 2 ? 1 : 0);
    return (twos % 2 != 0) ? b_ : a_;
  }
  return dense_entries_[static_cast<std::size_t>(next - 1) * states_ + w];
}

std::size_t LiftedChain::successor(std::size_t w, int next) const {
  return static_cast<std::size_t>(next - 1) * window_div_ + w / static_cast<std::size_t>(dim_);
}

std::vector<double> LiftedChain::marginal(std::span<const double> window_dist) const {
  std::vector<NeumaierSum> acc(static_cast<std::size_t>(dim_));
  for (std::size_t w = 0; w < states_; ++w) {
    acc[w / window_div_].add(window_dist[w]);
  }
  std::vector<double> out(static_cast<std::size_t>(dim_));
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = acc[s].value();
  return out;
}

std::vector<std::vector<double>> LiftedChain::dense_matrix() const {
  if (states_ > 4096) throw std::invalid_argument("dense matrix capped at 4096 window states");
  std::vector<std::vector<double>> matrix(states_, std::vector<double>(states_, 0.0));
  for (std::size_t w = 0; w < states_; ++w) {
    for (int next = 1; next <= dim_; ++next) {
      matrix[w][successor(w, next)] += probability(w, next);
    }
  }
  return matrix;
}

namespace {

// Strong connectivity and aperiodicity of the positive-probability window
// graph. Forward and backward reachability from state 0 give connectivity;
// the gcd of level[u] + 1 - level[v] over all edges gives the period.
bool chain_is_ergodic(const LiftedChain& chain) {
  const std::size_t s = chain.state_count();
  std::vector<int> level(s, -1);
  std::vector<std::size_t> queue;
  queue.reserve(s);
  queue.push_back(0);
  level[0] = 0;
  std::size_t seen = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::size_t w = queue[head];
    for (int next = 1; next <= chain.dim(); ++next) {
      if (chain.probability(w, next) <= 0.0) continue;
      std::size_t v = chain.successor(w, next);
      if (level[v] < 0) {
        level[v] = level[w] + 1;
        queue.push_back(v);
        ++seen;
      }
    }
  }
  if (seen != s) return false;

  std::vector<char> back_seen(s, 0);
  std::vector<std::vector<std::size_t>> reverse_adj(s);
  for (std::size_t w = 0; w < s; ++w) {
    for (int next = 1; next <= chain.dim(); ++next) {
      if (chain.probability(w, next) > 0.0) reverse_adj[chain.successor(w, next)].push_back(w);
    }
  }
  queue.clear();
  queue.push_back(0);
  back_seen[0] = 1;
  std::size_t back_count = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (std::size_t u : reverse_adj[queue[head]]) {
      if (!back_seen[u]) {
        back_seen[u] = 1;
        queue.push_back(u);
        ++back_count;
      }
    }
  }
  if (back_count != s) return false;

  long long period = 0;
  for (std::size_t w = 0; w < s; ++w) {
    for (int next = 1; next <= chain.dim(); ++next) {
      if (chain.probability(w, next) <= 0.0) continue;
      long long diff = level[w] + 1 - level[chain.successor(w, next)];
      period = std::gcd(period, diff);
    }
  }
  return std::abs(period) == 1;
}

}  // namespace

LiftedStationary matrix_stationary(const LiftedChain& chain, double tol,
                                   std::size_t max_iterations) {
  const std::size_t s = chain.state_count();
  LiftedStationary result;
  result.ergodic = chain_is_ergodic(chain);

  std::vector<double> x(s, 1.0 / static_cast<double>(s));
  std::vector<double> y(s);
  std::vector<double> step_norms;
  bool averaging = false;

  for (std::size_t it = 1; it <= max_iterations; ++it) {
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t w = 0; w < s; ++w) {
      double mass = x[w];
      if (mass == 0.0) continue;
      for (int next = 1; next <= chain.dim(); ++next) {
        double p = chain.probability(w, next);
        if (p > 0.0) y[chain.successor(w, next)] += mass * p;
      }
    }
    if (averaging) {
      for (std::size_t w = 0; w < s; ++w) y[w] = 0.5 * (y[w] + x[w]);
    }
    NeumaierSum total;
    for (double v : y) total.add(v);
    double norm = total.value();
    for (double& v : y) v /= norm;

    double step = 0.0;
    for (std::size_t w = 0; w < s; ++w) step = std::max(step, std::abs(y[w] - x[w]));
    x.swap(y);
    result.iterations = it;
    if (step <= tol) {
      result.converged = true;
      break;
    }
    step_norms.push_back(step);
    // A periodic chain cycles instead of settling: the step norms stop
    // shrinking. Averaging with the identity kills the cycle while keeping
    // the same fixed points.
    if (!averaging && step_norms.size() >= 100 &&
        step >= step_norms[step_norms.size() - 100] * 0.999999) {
      averaging = true;
    }
  }
  result.window_distribution = std::move(x);
  result.marginal = chain.marginal(result.window_distribution);
  return result;
}

}  // namespace tpt
