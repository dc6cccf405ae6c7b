#ifndef TPT_ANALYTIC_HPP
#define TPT_ANALYTIC_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tpt/tensor.hpp"

namespace tpt {

// On the two-state simplex a probability vector is (x, 1-x), and applying a
// symmetric family tensor reduces to a pair of scalar maps
//   first(x)  = probability mass sent to state 1,
//   second(y) = probability mass sent to state 2, y = 1-x.
// Fixed points of first are exactly the stationary vectors. This header
// carries that reduction: direct evaluation, a closed form, coefficients,
// derivatives, root enumeration, and a full per-family classification.

// Largest n for binomial(n, k): every C(64, k) fits in uint64_t.
inline constexpr int kMaxBinomialN = 64;

// Largest order for which the term-by-term evaluators run; they need
// binomial(m-1, k) exact in double, which holds through C(56, 28).
inline constexpr int kMaxDirectOrder = 57;

// Exact binomial coefficient via the Pascal recurrence, n <= 64.
std::uint64_t binomial(int n, int k);

// sum_{k even} C(n,k) == sum_{k odd} C(n,k) == 2^(n-1), checked exactly.
// The split is what makes the uniform vector stationary for every member
// of the symmetric family.
bool binomial_parity_identity(int n);

// Term-by-term evaluation of the reduced maps (compensated summation).
// Requires 0 <= x <= 1 and order <= kMaxDirectOrder.
double reduced_first_direct(const SymmetricFamily2& f, double x);
double reduced_second_direct(const SymmetricFamily2& f, double y);

// Closed form first(x) = 1/2 + (spread/2) * (2x - 1)^(m-1), valid for every
// order. Derived by resumming the two parity halves of the binomial
// expansion; see reduced_first_closed_claimed for the variant this replaces.
double reduced_first_closed(const SymmetricFamily2& f, double x);

// A published variant of the closed form whose constant term is b for even
// order and a for odd order instead of 1/2. It disagrees with direct
// evaluation whenever a != 1/2 (already at x in {0, 1}), and is kept only
// so reports can quantify the discrepancy.
double reduced_first_closed_claimed(const SymmetricFamily2& f, double x);

// d/dx of the closed form: spread * (m-1) * (2x - 1)^(m-2).
double reduced_first_derivative(const SymmetricFamily2& f, double x);

// first(x) - x; zero exactly at the stationary points. Uses the direct
// evaluator when the order allows and the closed form beyond that.
double stationary_defect(const SymmetricFamily2& f, double x);

// Monomial coefficients of the reduced first map. The expansion
// sum_k c_k C(m-1,k) x^(m-1-k) (1-x)^k is re-expanded in powers of x with
// exact 128-bit integer arithmetic, then each coefficient is stored as a
// double plus a correction term. Horner evaluation runs in double-double
// so the catastrophic cancellation of the monomial basis (coefficients grow
// like 3^m while the value stays in [0,1]) does not surface.
struct ReducedPolynomial {
  // Leading coefficient first; coefficients[i] multiplies x^(degree-i).
  std::vector<double> coefficients;
  // corrections[i] is the low part of the exact coefficient.
  std::vector<double> corrections;

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
  double evaluate(double x) const;
};

// Requires order <= 40; past that the 3^m coefficient growth leaves too few
// of the double-double bits for the cancelled result to mean anything.
inline constexpr int kMaxCoefficientOrder = 40;
ReducedPolynomial reduced_first_coefficients(const SymmetricFamily2& f);

// Interior critical points of the defect first(x) - x in [0, 1], ascending.
// Solves spread * (m-1) * (2x-1)^(m-2) = 1.
std::vector<double> critical_points(const SymmetricFamily2& f);

// All stationary vectors, ascending in the first coordinate. x = 1/2 always;
// the boundary points join exactly at |spread| = 1.
std::vector<SimplexPoint> enumerate_stationary(const SymmetricFamily2& f);

// Case labels for the sign and size of spread * (m-1); the names follow the
// branches of the classification.
enum class FamilyCase {
  kEqualAB,
  kAGreaterLt1,
  kAGreaterEq1,
  kAGreaterGt1,
  kBGreaterEven,
  kBGreaterLt1,
  kBGreaterEq1,
  kBGreaterGt1,
};

const char* to_string(FamilyCase c);

struct ClassificationReport {
  int order = 0;
  double a = 0.0;
  double b = 0.0;
  double spread = 0.0;
  FamilyCase family_case = FamilyCase::kEqualAB;

  std::vector<double> critical_points;
  std::vector<SimplexPoint> stationary;

  bool irreducible = true;
  std::optional<std::vector<int>> reducible_witness;

  // |spread| * (m-1); below 1 the reduced map is a contraction and the
  // uniform vector is the unique stationary point.
  double contraction_bound = 0.0;

  // The stationary set a literal reading of the published classification
  // predicts: boundary vectors at every extremal a, uniform otherwise.
  std::vector<std::array<double, 2>> claimed_set;
  // One line per disagreement between claimed_set and the enumerated set.
  std::vector<std::string> discrepancy_flags;
  // Largest |reduced_first_closed_claimed - direct| over a probe grid;
  // quantifies how far the published constant term drifts for this member.
  double claimed_constant_gap = 0.0;
};

// The stationary set predicted by the published case analysis, ascending in
// the first coordinate.
std::vector<std::array<double, 2>> claimed_stationary_set(const SymmetricFamily2& f);

ClassificationReport classify(const SymmetricFamily2& f);

}  // namespace tpt

#endif  // TPT_ANALYTIC_HPP
