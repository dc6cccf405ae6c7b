#ifndef TPT_IO_HPP
#define TPT_IO_HPP

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "tpt/simulate.hpp"
#include "tpt/tensor.hpp"

namespace tpt {

// Text formats. Dense tensors:
//
//   TPT1
//   order 3
//   dim 2
//   entries
//   1.0
//   ...          (n^m values, last index fastest)
//   end
//
// Symmetric family members as a one-liner:
//
//   SYM2 m=4 a=0.3
//
// '#' starts a comment anywhere on a line; blank lines are ignored. Floats
// are written with 17 significant digits, so write followed by read is
// bit-exact.

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

TransitionTensor read_tpt1(std::istream& in);
void write_tpt1(std::ostream& out, const TransitionTensor& t);

SymmetricFamily2 parse_sym2(const std::string& line);
std::string format_sym2(const SymmetricFamily2& f);

// Reads either format, dispatching on the first meaningful token.
std::variant<TransitionTensor, SymmetricFamily2> read_input(std::istream& in);

// Recovers the family parameters when the tensor is an exact member of the
// two-state symmetric family (entry pattern within tol).
std::optional<SymmetricFamily2> detect_symmetric_family(const TransitionTensor& t,
                                                        double tol = 1e-12);

// One state per line after a reproducibility header:
//   # seed=<seed> m=<order> a=<a>
void write_trace(std::ostream& out, const ChainTrace& trace, double a);

}  // namespace tpt

#endif  // TPT_IO_HPP
