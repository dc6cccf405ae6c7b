#include "tpt/tensor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "tpt/numerics.hpp"

namespace tpt {

namespace {

// Writes a 0-based tail code (the linear index of (i2..im)) back out as
// 1-based digits, i2 first.
void decode_tail(std::size_t tail, int order, int dim, std::vector<int>& digits) {
  digits.assign(static_cast<std::size_t>(order) - 1, 1);
  for (int j = order - 2; j >= 0; --j) {
    digits[static_cast<std::size_t>(j)] = static_cast<int>(tail % static_cast<std::size_t>(dim)) + 1;
    tail /= static_cast<std::size_t>(dim);
  }
}

std::string format_tuple(int first, std::span<const int> tail) {
  std::ostringstream os;
  os << "(" << first;
  for (int d : tail) os << "," << d;
  os << ")";
  return os.str();
}

std::string format_tail(std::span<const int> tail) {
  std::ostringstream os;
  os << "(";
  for (std::size_t j = 0; j < tail.size(); ++j) {
    if (j) os << ",";
    os << tail[j];
  }
  os << ")";
  return os.str();
}

}  // namespace

std::size_t TransitionTensor::entry_count(int order, int dim) {
  if (order < 3) throw std::invalid_argument("tensor order must be at least 3");
  if (dim < 2) throw std::invalid_argument("tensor dim must be at least 2");
  std::size_t count = 1;
  for (int j = 0; j < order; ++j) {
    if (count > kMaxEntries / static_cast<std::size_t>(dim)) {
      throw std::invalid_argument("tensor index space exceeds the entry cap");
    }
    count *= static_cast<std::size_t>(dim);
  }
  return count;
}

TransitionTensor::TransitionTensor(int order, int dim, std::vector<double> entries)
    : order_(order), dim_(dim), entries_(std::move(entries)) {
  std::size_t expected = entry_count(order, dim);
  if (entries_.size() != expected) {
    throw std::invalid_argument("tensor entry vector has wrong length");
  }
}

std::size_t TransitionTensor::linear_index(std::span<const int> index) const {
  if (index.size() != static_cast<std::size_t>(order_)) {
    throw std::invalid_argument("tensor index has wrong arity");
  }
  std::size_t lin = 0;
  for (int d : index) {
    if (d < 1 || d > dim_) throw std::out_of_range("tensor index out of range");
    lin = lin * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(d - 1);
  }
  return lin;
}

SymmetricFamily2::SymmetricFamily2(int order, double a) : order_(order), a_(a), b_(1.0 - a) {
  if (order < 3) throw std::invalid_argument("family order must be at least 3");
  if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("family parameter a must lie in [0,1]");
}

double SymmetricFamily2::entry(std::span<const int> index) const {
  if (index.size() != static_cast<std::size_t>(order_)) {
    throw std::invalid_argument("tensor index has wrong arity");
  }
  int twos = 0;
  for (int d : index) {
    if (d < 1 || d > 2) throw std::out_of_range("tensor index out of range");
    twos += (d == 2);
  }
  return entry_for_parity(twos % 2 != 0);
}

TransitionTensor SymmetricFamily2::materialize() const {
  if (order_ > kMaxMaterializeOrder) {
    throw std::invalid_argument("refusing to materialize beyond order 30");
  }
  // State 2 in position j is bit 1 of the corresponding base-2 digit, so the
  // 2-count of an index tuple is the popcount of its linear index.
  std::size_t count = std::size_t{1} << order_;
  std::vector<double> entries(count);
  for (std::size_t lin = 0; lin < count; ++lin) {
    entries[lin] = (std::popcount(lin) % 2 != 0) ? b_ : a_;
  }
  return TransitionTensor(order_, 2, std::move(entries));
}

SimplexPoint simplex_point2(double x, double residual) {
  return SimplexPoint{{x, 1.0 - x}, residual};
}

ValidationReport validate(const TransitionTensor& t, double tol, std::size_t max_violations) {
  ValidationReport report;
  const int n = t.dim();
  const int m = t.order();
  const std::size_t tails = t.entries().size() / static_cast<std::size_t>(n);
  std::vector<int> digits;
  std::size_t suppressed = 0;

  auto add_violation = [&](const std::string& line) {
    report.valid = false;
    if (report.violations.size() < max_violations) {
      report.violations.push_back(line);
    } else {
      ++suppressed;
    }
  };

  for (std::size_t tail = 0; tail < tails; ++tail) {
    NeumaierSum column;
    for (int i1 = 1; i1 <= n; ++i1) {
      double e = t.entries()[static_cast<std::size_t>(i1 - 1) * tails + tail];
      column.add(e);
      if (!(e >= -tol && e <= 1.0 + tol)) {  // also catches NaN
        decode_tail(tail, m, n, digits);
        add_violation("entry p" + format_tuple(i1, digits) + " = " + format_double(e) +
                      " outside [0,1]");
      }
    }
    double defect = std::abs(column.value() - 1.0);
    report.max_column_defect = std::max(report.max_column_defect, defect);
    if (!(defect <= tol)) {
      decode_tail(tail, m, n, digits);
      add_violation("column " + format_tail(digits) + " sums to " + format_double(column.value()));
    }
  }
  if (suppressed > 0) {
    report.violations.push_back("(" + std::to_string(suppressed) + " further violations suppressed)");
  }
  return report;
}

bool is_symmetric(const TransitionTensor& t, double tol) {
  const int n = t.dim();
  const int m = t.order();
  const std::size_t tails = t.entries().size() / static_cast<std::size_t>(n);
  std::vector<int> digits;
  std::vector<int> sorted;
  for (std::size_t tail = 0; tail < tails; ++tail) {
    decode_tail(tail, m, n, digits);
    sorted = digits;
    std::sort(sorted.begin(), sorted.end());
    if (sorted == digits) continue;  // tail is its own canonical form
    std::size_t canonical = 0;
    for (int d : sorted) {
      canonical = canonical * static_cast<std::size_t>(n) + static_cast<std::size_t>(d - 1);
    }
    for (int i1 = 1; i1 <= n; ++i1) {
      double e = t.entries()[static_cast<std::size_t>(i1 - 1) * tails + tail];
      double ref = t.entries()[static_cast<std::size_t>(i1 - 1) * tails + canonical];
      if (!(std::abs(e - ref) <= tol)) return false;
    }
  }
  return true;
}

namespace {

// Sorted proper nonempty subsets of {1..n} in lexicographic order; for each
// prefix the subset itself precedes its extensions' siblings, which is
// exactly depth-first generation in increasing element order.
void enumerate_subsets(int n, std::vector<int>& current,
                       const std::function<bool(const std::vector<int>&)>& visit, int from,
                       bool& stop) {
  for (int next = from; next <= n && !stop; ++next) {
    current.push_back(next);
    if (static_cast<int>(current.size()) < n) {  // proper subsets only
      if (visit(current)) {
        stop = true;
      } else {
        enumerate_subsets(n, current, visit, next + 1, stop);
      }
    }
    current.pop_back();
  }
}

}  // namespace

std::optional<std::vector<int>> reducibility_witness(const TransitionTensor& t, double tol) {
  const int n = t.dim();
  if (n > 20) throw std::invalid_argument("reducibility scan is exhaustive; dim capped at 20");
  const int m = t.order();
  const std::size_t tails = t.entries().size() / static_cast<std::size_t>(n);

  std::optional<std::vector<int>> witness;
  std::vector<int> digits;
  auto visit = [&](const std::vector<int>& subset) {
    std::vector<bool> in_subset(static_cast<std::size_t>(n) + 1, false);
    for (int s : subset) in_subset[static_cast<std::size_t>(s)] = true;
    for (std::size_t tail = 0; tail < tails; ++tail) {
      decode_tail(tail, m, n, digits);
      bool outside = true;
      for (int d : digits) {
        if (in_subset[static_cast<std::size_t>(d)]) {
          outside = false;
          break;
        }
      }
      if (!outside) continue;
      for (int i1 : subset) {
        double e = t.entries()[static_cast<std::size_t>(i1 - 1) * tails + tail];
        if (std::abs(e) > tol) return false;  // subset fails, keep searching
      }
    }
    witness = subset;
    return true;
  };

  std::vector<int> current;
  bool stop = false;
  enumerate_subsets(n, current, visit, 1, stop);
  return witness;
}

std::optional<std::vector<int>> reducibility_witness(const SymmetricFamily2& f) {
  // Only two candidate subsets exist. {1} needs p(1 | 2,...,2) = 0, and that
  // entry is a when m-1 is even, b otherwise. {2} needs p(2 | 1,...,1) = b = 0.
  double blocking_one = (f.order() - 1) % 2 == 0 ? f.a() : f.b();
  if (std::abs(blocking_one) <= 1e-15) return std::vector<int>{1};
  if (std::abs(f.b()) <= 1e-15) return std::vector<int>{2};
  return std::nullopt;
}

std::vector<double> contract(const TransitionTensor& t, std::span<const double> v) {
  const int n = t.dim();
  if (v.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("vector length does not match tensor dim");
  }
  const std::size_t tails = t.entries().size() / static_cast<std::size_t>(n);
  std::vector<double> result(static_cast<std::size_t>(n));
  for (int i1 = 0; i1 < n; ++i1) {
    NeumaierSum acc;
    const double* plane = t.entries().data() + static_cast<std::size_t>(i1) * tails;
    for (std::size_t tail = 0; tail < tails; ++tail) {
      double weight = 1.0;
      std::size_t rest = tail;
      for (int j = 0; j < t.order() - 1; ++j) {
        weight *= v[rest % static_cast<std::size_t>(n)];
        rest /= static_cast<std::size_t>(n);
      }
      acc.add(plane[tail] * weight);
    }
    result[static_cast<std::size_t>(i1)] = acc.value();
  }
  return result;
}

double residual(const TransitionTensor& t, std::span<const double> v) {
  std::vector<double> image = contract(t, v);
  double worst = 0.0;
  for (std::size_t i = 0; i < image.size(); ++i) {
    worst = std::max(worst, std::abs(image[i] - v[i]));
  }
  return worst;
}

}  // namespace tpt
