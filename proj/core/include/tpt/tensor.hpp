#ifndef TPT_TENSOR_HPP
#define TPT_TENSOR_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tpt {

// Dense order-m transition probability tensor on n states.
// Entry p(i1, i2, ..., im) is the probability of moving to state i1 given
// the length-(m-1) history (i2, ..., im). Indices are 1-based in the API;
// storage is row-major with im varying fastest.
class TransitionTensor {
 public:
  // Largest index space we are willing to hold in memory (2^27 doubles = 1 GiB).
  static constexpr std::size_t kMaxEntries = std::size_t{1} << 27;

  TransitionTensor(int order, int dim, std::vector<double> entries);

  int order() const { return order_; }
  int dim() const { return dim_; }
  const std::vector<double>& entries() const { return entries_; }

  // Number of entries n^m, or throws std::invalid_argument if it would
  // exceed kMaxEntries.
  static std::size_t entry_count(int order, int dim);

  std::size_t linear_index(std::span<const int> index) const;
  double at(std::span<const int> index) const { return entries_[linear_index(index)]; }

 private:
  int order_;
  int dim_;
  std::vector<double> entries_;
};

// The two-state symmetric family: every entry is a when the index tuple
// contains an even number of 2s and b = 1 - a otherwise. Column stochasticity
// forces a + b = 1, so a single parameter a in [0, 1] pins the tensor down.
class SymmetricFamily2 {
 public:
  // materialize() refuses above this order (2^30 doubles = 8 GiB).
  static constexpr int kMaxMaterializeOrder = 30;

  SymmetricFamily2(int order, double a);

  // The two corner members: all histories push toward repetition (a = 1)
  // or toward alternation (a = 0).
  static SymmetricFamily2 extremal_one(int order) { return {order, 1.0}; }
  static SymmetricFamily2 extremal_zero(int order) { return {order, 0.0}; }

  int order() const { return order_; }
  double a() const { return a_; }
  double b() const { return b_; }
  // Signed spread a - b; the quantity that controls every qualitative
  // property of the family.
  double spread() const { return a_ - b_; }

  // Entry value for an index tuple with the given parity of 2-count.
  double entry_for_parity(bool odd_twos) const { return odd_twos ? b_ : a_; }
  double entry(std::span<const int> index) const;

  TransitionTensor materialize() const;

 private:
  int order_;
  double a_;
  double b_;
};

// Point on the probability simplex together with the stationarity defect
// measured when it was produced.
struct SimplexPoint {
  std::vector<double> coords;
  double residual = 0.0;
};

// Two-state convenience constructor (x, 1 - x).
SimplexPoint simplex_point2(double x, double residual);

struct ValidationReport {
  bool valid = true;
  // One human-readable line per violation, in index order.
  std::vector<std::string> violations;
  // Largest |column sum - 1| seen across all histories.
  double max_column_defect = 0.0;
};

// Checks entry ranges and that every column (fixed history) sums to 1
// within tol. Reports at most max_violations individual lines.
ValidationReport validate(const TransitionTensor& t, double tol = 1e-12,
                          std::size_t max_violations = 32);

// True when the tensor is invariant under every permutation of the history
// indices i2..im (i1 is the distinguished output index).
bool is_symmetric(const TransitionTensor& t, double tol = 1e-15);

// Looks for a nonempty proper subset I of states with p(i | history) = 0
// whenever i is in I and the history stays inside the complement of I.
// Returns the lexicographically smallest witness (subsets as sorted lists),
// or nullopt when the tensor is irreducible. Exhaustive over subsets, so
// only sensible for small n.
std::optional<std::vector<int>> reducibility_witness(const TransitionTensor& t,
                                                     double tol = 1e-15);

// Same question answered from the family structure without materializing.
std::optional<std::vector<int>> reducibility_witness(const SymmetricFamily2& f);

// Applies the tensor to a probability vector: component i1 accumulates
// p(i1, i2, ..., im) * v[i2] * ... * v[im] over all histories, compensated
// summation per component. v must have dim() entries.
std::vector<double> contract(const TransitionTensor& t, std::span<const double> v);

// Max-norm distance between contract(t, v) and v.
double residual(const TransitionTensor& t, std::span<const double> v);

}  // namespace tpt

#endif  // TPT_TENSOR_HPP
