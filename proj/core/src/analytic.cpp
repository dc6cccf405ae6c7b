#include "tpt/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "tpt/numerics.hpp"

namespace tpt {

namespace {

const std::array<std::array<std::uint64_t, 65>, 65>& pascal_table() {
  static const auto table = [] {
    std::array<std::array<std::uint64_t, 65>, 65> t{};
    for (int n = 0; n <= kMaxBinomialN; ++n) {
      t[static_cast<std::size_t>(n)][0] = 1;
      for (int k = 1; k <= n; ++k) {
        const auto& prev = t[static_cast<std::size_t>(n - 1)];
        t[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] =
            prev[static_cast<std::size_t>(k - 1)] + (k < n ? prev[static_cast<std::size_t>(k)] : 0);
      }
    }
    return t;
  }();
  return table;
}

void require_unit_interval(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("argument must lie in [0,1], got " + format_double(x));
  }
}

void require_direct_order(const SymmetricFamily2& f) {
  if (f.order() > kMaxDirectOrder) {
    throw std::invalid_argument("term-by-term evaluation needs exact double binomials; order capped at " +
                                std::to_string(kMaxDirectOrder));
  }
}

// Exact hi/lo split of a (small) 128-bit integer.
DoubleDouble dd_from_int(__int128 v) {
  double hi = static_cast<double>(v);
  double lo = static_cast<double>(v - static_cast<__int128>(hi));
  Split s = two_sum(hi, lo);
  return {s.hi, s.lo};
}

// Matching tolerance when comparing stationary x-coordinates from different
// computations.
constexpr double kMatchTol = 1e-9;

// Slack for the boundary decision spread*(m-1) == 1; products like
// 0.2 * 5 land one ulp off 1.
constexpr double kCaseTol = 1e-12;

std::string format_vector2(double x) {
  return "(" + format_double(x) + ", " + format_double(1.0 - x) + ")";
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (n < 0 || n > kMaxBinomialN) {
    throw std::invalid_argument("binomial defined here for 0 <= n <= 64");
  }
  if (k < 0 || k > n) return 0;
  return pascal_table()[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

bool binomial_parity_identity(int n) {
  if (n < 1 || n > kMaxBinomialN) {
    throw std::invalid_argument("parity identity checked for 1 <= n <= 64");
  }
  std::uint64_t even_sum = 0;
  std::uint64_t odd_sum = 0;
  for (int k = 0; k <= n; ++k) {
    if (k % 2 == 0) {
      even_sum += binomial(n, k);
    } else {
      odd_sum += binomial(n, k);
    }
  }
  return even_sum == odd_sum && even_sum == (std::uint64_t{1} << (n - 1));
}

double reduced_first_direct(const SymmetricFamily2& f, double x) {
  require_unit_interval(x);
  require_direct_order(f);
  const int d = f.order() - 1;
  const double y = 1.0 - x;
  std::array<double, kMaxDirectOrder> xp;
  std::array<double, kMaxDirectOrder> yp;
  xp[0] = 1.0;
  yp[0] = 1.0;
  for (int j = 1; j <= d; ++j) {
    xp[static_cast<std::size_t>(j)] = xp[static_cast<std::size_t>(j - 1)] * x;
    yp[static_cast<std::size_t>(j)] = yp[static_cast<std::size_t>(j - 1)] * y;
  }
  NeumaierSum sum;
  for (int k = 0; k <= d; ++k) {
    double coeff = (k % 2 == 0) ? f.a() : f.b();
    sum.add(coeff * static_cast<double>(binomial(d, k)) * xp[static_cast<std::size_t>(d - k)] *
            yp[static_cast<std::size_t>(k)]);
  }
  return sum.value();
}

double reduced_second_direct(const SymmetricFamily2& f, double y) {
  require_unit_interval(y);
  require_direct_order(f);
  const int d = f.order() - 1;
  const double x = 1.0 - y;
  std::array<double, kMaxDirectOrder> xp;
  std::array<double, kMaxDirectOrder> yp;
  xp[0] = 1.0;
  yp[0] = 1.0;
  for (int j = 1; j <= d; ++j) {
    xp[static_cast<std::size_t>(j)] = xp[static_cast<std::size_t>(j - 1)] * x;
    yp[static_cast<std::size_t>(j)] = yp[static_cast<std::size_t>(j - 1)] * y;
  }
  NeumaierSum sum;
  for (int k = 0; k <= d; ++k) {
    double coeff = (k % 2 == 0) ? f.b() : f.a();
    sum.add(coeff * static_cast<double>(binomial(d, k)) * xp[static_cast<std::size_t>(d - k)] *
            yp[static_cast<std::size_t>(k)]);
  }
  return sum.value();
}

double reduced_first_closed(const SymmetricFamily2& f, double x) {
  require_unit_interval(x);
  return 0.5 + 0.5 * f.spread() * ipow(2.0 * x - 1.0, static_cast<unsigned>(f.order() - 1));
}

double reduced_first_closed_claimed(const SymmetricFamily2& f, double x) {
  require_unit_interval(x);
  double constant = (f.order() % 2 == 0) ? f.b() : f.a();
  return 0.5 * f.spread() * ipow(2.0 * x - 1.0, static_cast<unsigned>(f.order() - 1)) + constant;
}

double reduced_first_derivative(const SymmetricFamily2& f, double x) {
  require_unit_interval(x);
  return f.spread() * static_cast<double>(f.order() - 1) *
         ipow(2.0 * x - 1.0, static_cast<unsigned>(f.order() - 2));
}

double stationary_defect(const SymmetricFamily2& f, double x) {
  double image = f.order() <= kMaxDirectOrder ? reduced_first_direct(f, x)
                                              : reduced_first_closed(f, x);
  return image - x;
}

double ReducedPolynomial::evaluate(double x) const {
  DoubleDouble acc{coefficients[0], corrections[0]};
  for (std::size_t i = 1; i < coefficients.size(); ++i) {
    acc = DoubleDouble::mul(acc, x);
    acc = DoubleDouble::add(acc, DoubleDouble{coefficients[i], corrections[i]});
  }
  return acc.value();
}

ReducedPolynomial reduced_first_coefficients(const SymmetricFamily2& f) {
  if (f.order() > kMaxCoefficientOrder) {
    throw std::invalid_argument("monomial coefficients grow like 3^m; order capped at " +
                                std::to_string(kMaxCoefficientOrder));
  }
  const int d = f.order() - 1;
  // Re-expand sum_k c_k C(d,k) x^(d-k) (1-x)^k in powers of x, tracking the
  // a-part and b-part separately so the integers stay exact.
  std::vector<__int128> part_a(static_cast<std::size_t>(d) + 1, 0);
  std::vector<__int128> part_b(static_cast<std::size_t>(d) + 1, 0);
  for (int k = 0; k <= d; ++k) {
    auto& part = (k % 2 == 0) ? part_a : part_b;
    __int128 outer = static_cast<__int128>(binomial(d, k));
    for (int j = 0; j <= k; ++j) {
      __int128 term = outer * static_cast<__int128>(binomial(k, j));
      std::size_t power = static_cast<std::size_t>(d - k + j);
      if (j % 2 == 0) {
        part[power] += term;
      } else {
        part[power] -= term;
      }
    }
  }
  ReducedPolynomial poly;
  poly.coefficients.resize(static_cast<std::size_t>(d) + 1);
  poly.corrections.resize(static_cast<std::size_t>(d) + 1);
  for (int p = 0; p <= d; ++p) {
    DoubleDouble coeff = DoubleDouble::add(
        DoubleDouble::mul(dd_from_int(part_a[static_cast<std::size_t>(p)]), f.a()),
        DoubleDouble::mul(dd_from_int(part_b[static_cast<std::size_t>(p)]), f.b()));
    std::size_t slot = static_cast<std::size_t>(d - p);  // leading coefficient first
    poly.coefficients[slot] = coeff.hi;
    poly.corrections[slot] = coeff.lo;
  }
  return poly;
}

std::vector<double> critical_points(const SymmetricFamily2& f) {
  std::vector<double> points;
  const double c = f.spread();
  const int q = f.order() - 2;
  if (c > 0.0) {
    double t = c * static_cast<double>(f.order() - 1);
    if (t >= 1.0 - kCaseTol) {
      double r = std::min(1.0, std::pow(t, -1.0 / static_cast<double>(q)));
      points.push_back(0.5 * (1.0 + r));
      if (q % 2 == 0) points.push_back(0.5 * (1.0 - r));
    }
  } else if (c < 0.0 && q % 2 == 1) {
    double t = -c * static_cast<double>(f.order() - 1);
    if (t >= 1.0 - kCaseTol) {
      double r = std::min(1.0, std::pow(t, -1.0 / static_cast<double>(q)));
      points.push_back(0.5 * (1.0 - r));
    }
  }
  std::sort(points.begin(), points.end());
  return points;
}

std::vector<SimplexPoint> enumerate_stationary(const SymmetricFamily2& f) {
  std::vector<double> xs{0.5};
  const double c = f.spread();
  const int q = f.order() - 2;
  // Extra fixed points need |spread| * |2x-1|^(m-2) = 1 with |2x-1| <= 1,
  // which pins |spread| to 1 up to rounding.
  if (std::abs(c) >= 1.0 - kCaseTol) {
    double u = std::min(1.0, std::pow(1.0 / std::abs(c), 1.0 / static_cast<double>(q)));
    if (c > 0.0) {
      xs.push_back(0.5 * (1.0 + u));
      if (q % 2 == 0) xs.push_back(0.5 * (1.0 - u));
    } else if (q % 2 == 1) {
      xs.push_back(0.5 * (1.0 - u));
    }
  }
  std::sort(xs.begin(), xs.end());
  std::vector<SimplexPoint> result;
  for (double x : xs) {
    x = std::clamp(x, 0.0, 1.0);
    if (!result.empty() && x - result.back().coords[0] <= 1e-8) continue;
    result.push_back(simplex_point2(x, std::abs(stationary_defect(f, x))));
  }
  return result;
}

const char* to_string(FamilyCase c) {
  switch (c) {
    case FamilyCase::kEqualAB: return "EqualAB";
    case FamilyCase::kAGreaterLt1: return "AGreater_lt1";
    case FamilyCase::kAGreaterEq1: return "AGreater_eq1";
    case FamilyCase::kAGreaterGt1: return "AGreater_gt1";
    case FamilyCase::kBGreaterEven: return "BGreater_even";
    case FamilyCase::kBGreaterLt1: return "BGreater_lt1";
    case FamilyCase::kBGreaterEq1: return "BGreater_eq1";
    case FamilyCase::kBGreaterGt1: return "BGreater_gt1";
  }
  return "unknown";
}

std::vector<std::array<double, 2>> claimed_stationary_set(const SymmetricFamily2& f) {
  if (f.a() == 1.0) return {{0.0, 1.0}, {0.5, 0.5}};
  if (f.a() == 0.0) return {{0.5, 0.5}, {1.0, 0.0}};
  return {{0.5, 0.5}};
}

ClassificationReport classify(const SymmetricFamily2& f) {
  ClassificationReport report;
  report.order = f.order();
  report.a = f.a();
  report.b = f.b();
  report.spread = f.spread();

  const double c = f.spread();
  const double scaled = std::abs(c) * static_cast<double>(f.order() - 1);
  report.contraction_bound = scaled;
  if (c == 0.0) {
    report.family_case = FamilyCase::kEqualAB;
  } else if (c > 0.0) {
    if (std::abs(scaled - 1.0) <= kCaseTol) {
      report.family_case = FamilyCase::kAGreaterEq1;
    } else {
      report.family_case = scaled < 1.0 ? FamilyCase::kAGreaterLt1 : FamilyCase::kAGreaterGt1;
    }
  } else if (f.order() % 2 == 0) {
    report.family_case = FamilyCase::kBGreaterEven;
  } else if (std::abs(scaled - 1.0) <= kCaseTol) {
    report.family_case = FamilyCase::kBGreaterEq1;
  } else {
    report.family_case = scaled < 1.0 ? FamilyCase::kBGreaterLt1 : FamilyCase::kBGreaterGt1;
  }

  report.critical_points = critical_points(f);
  report.stationary = enumerate_stationary(f);

  report.reducible_witness = reducibility_witness(f);
  report.irreducible = !report.reducible_witness.has_value();

  report.claimed_set = claimed_stationary_set(f);

  for (const SimplexPoint& p : report.stationary) {
    bool matched = false;
    for (const auto& cl : report.claimed_set) {
      if (std::abs(cl[0] - p.coords[0]) <= kMatchTol) {
        matched = true;
        break;
      }
    }
    if (!matched) {
      report.discrepancy_flags.push_back("stationary vector " + format_vector2(p.coords[0]) +
                                         " missing from the claimed set");
    }
  }
  for (const auto& cl : report.claimed_set) {
    bool matched = false;
    for (const SimplexPoint& p : report.stationary) {
      if (std::abs(cl[0] - p.coords[0]) <= kMatchTol) {
        matched = true;
        break;
      }
    }
    if (!matched) {
      double defect = std::abs(stationary_defect(f, cl[0]));
      report.discrepancy_flags.push_back("claimed vector " + format_vector2(cl[0]) +
                                         " has stationarity defect " + format_double(defect));
    }
  }

  double gap = 0.0;
  const bool direct_ok = f.order() <= kMaxDirectOrder;
  for (int i = 0; i <= 100; ++i) {
    double x = static_cast<double>(i) / 100.0;
    double reference = direct_ok ? reduced_first_direct(f, x) : reduced_first_closed(f, x);
    gap = std::max(gap, std::abs(reduced_first_closed_claimed(f, x) - reference));
  }
  report.claimed_constant_gap = gap;
  return report;
}

}  // namespace tpt
