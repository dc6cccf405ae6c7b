#ifndef TPT_NUMERICS_HPP
#define TPT_NUMERICS_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

namespace tpt {

// Compensated accumulator (Neumaier variant of Kahan summation).
// Keeps the running error of a long sum near one ulp of the result instead
// of growing with the term count.
class NeumaierSum {
 public:
  void add(double term) {
    double t = sum_ + term;
    if (std::abs(sum_) >= std::abs(term)) {
      comp_ += (sum_ - t) + term;
    } else {
      comp_ += (term - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Error-free transforms. two_sum and two_prod return the rounded result in
// .hi and the exact rounding error in .lo, so hi + lo reproduces the exact
// real value of a + b (resp. a * b).
struct Split {
  double hi;
  double lo;
};

inline Split two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

inline Split two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

// Unevaluated double-double value hi + lo with |lo| <= ulp(hi)/2.
// Only the handful of operations the polynomial kernel needs.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  static DoubleDouble from(double x) { return {x, 0.0}; }

  static DoubleDouble add(DoubleDouble a, DoubleDouble b) {
    Split s = two_sum(a.hi, b.hi);
    Split t = two_sum(a.lo, b.lo);
    double lo = s.lo + t.hi;
    Split r = two_sum(s.hi, lo);
    r.lo += t.lo;
    Split q = two_sum(r.hi, r.lo);
    return {q.hi, q.lo};
  }

  static DoubleDouble mul(DoubleDouble a, double b) {
    Split p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    Split r = two_sum(p.hi, p.lo);
    return {r.hi, r.lo};
  }

  double value() const { return hi + lo; }
};

// Integer power by squaring. Exponent 0 returns 1 even for base 0.
inline double ipow(double base, unsigned exp) {
  double result = 1.0;
  double b = base;
  while (exp != 0) {
    if (exp & 1u) result *= b;
    b *= b;
    exp >>= 1;
  }
  return result;
}

// SplitMix64: tiny, well-mixed, and identical on every platform, which is
// what trace reproducibility needs. Constants are the reference ones.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Shortest-round-trip-safe formatting: 17 significant digits always map back
// to the same double, so files and JSON written this way re-parse bit-exact.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace tpt

#endif  // TPT_NUMERICS_HPP
