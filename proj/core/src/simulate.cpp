#include "tpt/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tpt/numerics.hpp"

namespace tpt {

namespace {

void check_window(std::span<const int> window, int order, int dim) {
  if (window.size() != static_cast<std::size_t>(order - 1)) {
    throw std::invalid_argument("initial window must have order-1 states");
  }
  for (int s : window) {
    if (s < 1 || s > dim) throw std::invalid_argument("initial window state out of range");
  }
}

// Shared sampling loop. next_prob(s) must return p(next = s | current window)
// and advance(s) must slide the window.
template <typename ProbFn, typename AdvanceFn>
ChainTrace run_chain(int order, int dim, std::span<const int> window, std::uint64_t steps,
                     std::uint64_t seed, ProbFn&& next_prob, AdvanceFn&& advance) {
  ChainTrace trace;
  trace.order = order;
  trace.dim = dim;
  trace.seed = seed;
  trace.steps = steps;
  trace.initial_window.assign(window.begin(), window.end());
  trace.states.reserve(window.size() + steps);
  // Chronological prefix: the window lists newest first.
  for (std::size_t j = window.size(); j-- > 0;) trace.states.push_back(window[j]);

  SplitMix64 rng(seed);
  for (std::uint64_t k = 0; k < steps; ++k) {
    double u = rng.next_unit();
    int drawn = dim;  // catch-all for cumulative rounding
    double acc = 0.0;
    for (int s = 1; s <= dim; ++s) {
      acc += next_prob(s);
      if (u < acc) {
        drawn = s;
        break;
      }
    }
    trace.states.push_back(drawn);
    advance(drawn);
  }
  return trace;
}

}  // namespace

ChainTrace sample_chain(const TransitionTensor& t, std::span<const int> initial_window,
                        std::uint64_t steps, std::uint64_t seed) {
  check_window(initial_window, t.order(), t.dim());
  const std::size_t n = static_cast<std::size_t>(t.dim());
  const std::size_t tails = t.entries().size() / n;
  // Window code: newest symbol in the highest base-n digit, matching the
  // tensor's linear layout.
  std::size_t w = 0;
  for (int s : initial_window) w = w * n + static_cast<std::size_t>(s - 1);
  const std::size_t div = tails / n;
  return run_chain(
      t.order(), t.dim(), initial_window, steps, seed,
      [&](int s) { return t.entries()[static_cast<std::size_t>(s - 1) * tails + w]; },
      [&](int drawn) { w = static_cast<std::size_t>(drawn - 1) * div + w / n; });
}

ChainTrace sample_chain(const SymmetricFamily2& f, std::span<const int> initial_window,
                        std::uint64_t steps, std::uint64_t seed) {
  check_window(initial_window, f.order(), 2);
  // Only the parity of the 2-count decides the probabilities, so the window
  // itself can stay a ring buffer of symbols with a running parity.
  std::vector<int> window(initial_window.begin(), initial_window.end());
  std::size_t oldest = window.size() - 1;  // newest-first layout
  int twos = static_cast<int>(std::count(window.begin(), window.end(), 2));
  return run_chain(
      f.order(), 2, initial_window, steps, seed,
      [&](int s) { return f.entry_for_parity((twos + (s == 2 ? 1 : 0)) % 2 != 0); },
      [&](int drawn) {
        twos += (drawn == 2 ? 1 : 0) - (window[oldest] == 2 ? 1 : 0);
        window[oldest] = drawn;
        oldest = oldest == 0 ? window.size() - 1 : oldest - 1;
      });
}

std::vector<double> EmpiricalDistribution::probabilities() const {
  std::vector<double> out(counts.size(), 0.0);
  if (total == 0) return out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return out;
}

EmpiricalDistribution empirical_distribution(const ChainTrace& trace, std::uint64_t burn_in) {
  EmpiricalDistribution dist;
  dist.counts.assign(static_cast<std::size_t>(trace.dim), 0);
  std::size_t first_draw = static_cast<std::size_t>(trace.order - 1);
  std::size_t skip = burn_in < trace.steps ? static_cast<std::size_t>(burn_in)
                                           : static_cast<std::size_t>(trace.steps);
  for (std::size_t k = first_draw + skip; k < trace.states.size(); ++k) {
    ++dist.counts[static_cast<std::size_t>(trace.states[k] - 1)];
    ++dist.total;
  }
  return dist;
}

namespace {

double max_norm_gap(std::span<const double> u, std::span<const double> v) {
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, std::abs(u[i] - v[i]));
  return worst;
}

double nearest_stationary(const std::vector<SimplexPoint>& stationary,
                          std::span<const double> v) {
  double best = std::numeric_limits<double>::infinity();
  for (const SimplexPoint& p : stationary) best = std::min(best, max_norm_gap(p.coords, v));
  return best;
}

}  // namespace

ComparisonReport compare_report(const SymmetricFamily2& f, const CompareOptions& opts) {
  ComparisonReport report;
  report.classification = classify(f);
  report.steps = opts.steps;
  report.seed = opts.seed;
  report.burn_in = opts.burn_in.value_or(opts.steps / 10);
  report.initial_window = opts.initial_window;
  if (report.initial_window.empty()) {
    report.initial_window.assign(static_cast<std::size_t>(f.order() - 1), 1);
  }

  std::vector<double> uniform{0.5, 0.5};
  report.fixed_point = fixed_point_iterate(f, uniform);

  if (f.order() - 1 <= 20) {
    report.lifted = matrix_stationary(LiftedChain(f));
  }

  ChainTrace trace = sample_chain(f, report.initial_window, opts.steps, opts.seed);
  report.empirical = empirical_distribution(trace, report.burn_in);

  std::vector<double> empirical = report.empirical.probabilities();
  const std::vector<double>& fixed = report.fixed_point.iterate.coords;
  const auto& stationary = report.classification.stationary;

  report.fixed_vs_empirical = max_norm_gap(fixed, empirical);
  report.fixed_to_stationary = nearest_stationary(stationary, fixed);
  report.empirical_to_stationary = nearest_stationary(stationary, empirical);
  if (report.lifted) {
    report.fixed_vs_lifted = max_norm_gap(fixed, report.lifted->marginal);
    report.lifted_vs_empirical = max_norm_gap(report.lifted->marginal, empirical);
    report.lifted_to_stationary = nearest_stationary(stationary, report.lifted->marginal);
  }
  return report;
}

}  // namespace tpt
