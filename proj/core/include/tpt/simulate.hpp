#ifndef TPT_SIMULATE_HPP
#define TPT_SIMULATE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tpt/analytic.hpp"
#include "tpt/solvers.hpp"
#include "tpt/tensor.hpp"

namespace tpt {

// Monte Carlo end of the cross-validation: sample the history-window chain,
// count state visits, and line the counts up against the analytic and
// iterative answers.

struct ChainTrace {
  int order = 0;
  int dim = 0;
  std::uint64_t seed = 0;
  // The initial window as given, newest symbol first.
  std::vector<int> initial_window;
  // initial window (oldest to newest) followed by the sampled states, so
  // states[k] for k >= order-1 are the draws.
  std::vector<int> states;
  std::uint64_t steps = 0;
};

// Draws `steps` states using SplitMix64(seed); one uniform variate per step,
// inverted through the cumulative next-state distribution. initial_window
// lists (i2, ..., im), newest first, each in [1, dim].
ChainTrace sample_chain(const TransitionTensor& t, std::span<const int> initial_window,
                        std::uint64_t steps, std::uint64_t seed);
ChainTrace sample_chain(const SymmetricFamily2& f, std::span<const int> initial_window,
                        std::uint64_t steps, std::uint64_t seed);

struct EmpiricalDistribution {
  // counts[s-1] = visits to state s among the counted draws.
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  double probability(int state) const {
    return total == 0 ? 0.0
                      : static_cast<double>(counts[static_cast<std::size_t>(state) - 1]) /
                            static_cast<double>(total);
  }
  std::vector<double> probabilities() const;
};

// Counts the sampled draws (the initial window is never counted), skipping
// the first burn_in of them. burn_in >= steps yields an empty count.
EmpiricalDistribution empirical_distribution(const ChainTrace& trace,
                                             std::uint64_t burn_in = 0);

struct CompareOptions {
  std::uint64_t steps = 100000;
  std::uint64_t seed = 1;
  // Draws discarded before counting; defaults to steps / 10 when nullopt.
  std::optional<std::uint64_t> burn_in;
  // Defaults to the all-ones window.
  std::vector<int> initial_window;
};

// One family, three independent answers, all pairwise deviations.
struct ComparisonReport {
  ClassificationReport classification;
  IterationResult fixed_point;
  // Missing when the window space exceeds LiftedChain::kMaxStates.
  std::optional<LiftedStationary> lifted;
  EmpiricalDistribution empirical;

  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  std::uint64_t burn_in = 0;
  std::vector<int> initial_window;

  // Max-norm distances between the three computed distributions and from
  // each to the nearest enumerated stationary vector.
  double fixed_vs_empirical = 0.0;
  std::optional<double> fixed_vs_lifted;
  std::optional<double> lifted_vs_empirical;
  double fixed_to_stationary = 0.0;
  std::optional<double> lifted_to_stationary;
  double empirical_to_stationary = 0.0;
};

ComparisonReport compare_report(const SymmetricFamily2& f, const CompareOptions& opts = {});

}  // namespace tpt

#endif  // TPT_SIMULATE_HPP
