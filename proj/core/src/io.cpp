#include "tpt/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "tpt/numerics.hpp"

namespace tpt {

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

void strip_comment_and_trim(std::string& s) {
  if (auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
  auto is_space = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  std::size_t begin = 0;
  while (begin < s.size() && is_space(s[begin])) ++begin;
  std::size_t end = s.size();
  while (end > begin && is_space(s[end - 1])) --end;
  s = s.substr(begin, end - begin);
}

struct LineReader {
  std::istream& in;
  std::size_t line_no = 0;

  bool next(std::string& out) {
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_no;
      strip_comment_and_trim(raw);
      if (!raw.empty()) {
        out = raw;
        return true;
      }
    }
    return false;
  }
};

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

double parse_double(std::string_view token, std::size_t line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line, "expected a number, got '" + std::string(token) + "'");
  }
  return value;
}

long long parse_int(std::string_view token, std::size_t line) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line, "expected an integer, got '" + std::string(token) + "'");
  }
  return value;
}

long long parse_keyword_int(const LineReader& reader, std::string_view line,
                            std::string_view keyword) {
  auto tokens = split_tokens(line);
  if (tokens.size() != 2 || tokens[0] != keyword) {
    throw ParseError(reader.line_no,
                     "expected '" + std::string(keyword) + " <value>', got '" + std::string(line) + "'");
  }
  return parse_int(tokens[1], reader.line_no);
}

TransitionTensor read_tpt1_body(LineReader& reader) {
  std::string line;
  if (!reader.next(line)) throw ParseError(reader.line_no, "missing 'order' line");
  long long order = parse_keyword_int(reader, line, "order");
  if (!reader.next(line)) throw ParseError(reader.line_no, "missing 'dim' line");
  long long dim = parse_keyword_int(reader, line, "dim");
  if (order < 3 || order > 64) throw ParseError(reader.line_no, "order must lie in [3,64]");
  if (dim < 2 || dim > 64) throw ParseError(reader.line_no, "dim must lie in [2,64]");

  std::size_t expected;
  try {
    expected = TransitionTensor::entry_count(static_cast<int>(order), static_cast<int>(dim));
  } catch (const std::invalid_argument& err) {
    throw ParseError(reader.line_no, err.what());
  }

  if (!reader.next(line) || line != "entries") {
    throw ParseError(reader.line_no, "expected 'entries'");
  }
  std::vector<double> entries;
  entries.reserve(expected);
  while (entries.size() < expected) {
    if (!reader.next(line)) {
      throw ParseError(reader.line_no, "file ends after " + std::to_string(entries.size()) +
                                           " of " + std::to_string(expected) + " entries");
    }
    for (std::string_view token : split_tokens(line)) {
      if (entries.size() == expected) {
        throw ParseError(reader.line_no, "more entries than order and dim allow");
      }
      entries.push_back(parse_double(token, reader.line_no));
    }
  }
  if (!reader.next(line) || line != "end") {
    throw ParseError(reader.line_no, "expected 'end' after the entries");
  }
  return TransitionTensor(static_cast<int>(order), static_cast<int>(dim), std::move(entries));
}

SymmetricFamily2 parse_sym2_tokens(std::string_view line, std::size_t line_no) {
  auto tokens = split_tokens(line);
  if (tokens.size() != 3 || tokens[0] != "SYM2") {
    throw ParseError(line_no, "expected 'SYM2 m=<order> a=<value>'");
  }
  if (!tokens[1].starts_with("m=")) {
    throw ParseError(line_no, "expected 'm=<order>', got '" + std::string(tokens[1]) + "'");
  }
  if (!tokens[2].starts_with("a=")) {
    throw ParseError(line_no, "expected 'a=<value>', got '" + std::string(tokens[2]) + "'");
  }
  long long order = parse_int(tokens[1].substr(2), line_no);
  double a = parse_double(tokens[2].substr(2), line_no);
  if (order < 3 || order > 1000000) throw ParseError(line_no, "order must lie in [3,1000000]");
  if (!(a >= 0.0 && a <= 1.0)) throw ParseError(line_no, "parameter a must lie in [0,1]");
  return SymmetricFamily2(static_cast<int>(order), a);
}

}  // namespace

TransitionTensor read_tpt1(std::istream& in) {
  LineReader reader{in};
  std::string line;
  if (!reader.next(line) || line != "TPT1") throw ParseError(reader.line_no, "expected 'TPT1' header");
  return read_tpt1_body(reader);
}

void write_tpt1(std::ostream& out, const TransitionTensor& t) {
  out << "TPT1\n";
  out << "order " << t.order() << "\n";
  out << "dim " << t.dim() << "\n";
  out << "entries\n";
  for (double e : t.entries()) out << format_double(e) << "\n";
  out << "end\n";
}

SymmetricFamily2 parse_sym2(const std::string& line) {
  std::string cleaned = line;
  strip_comment_and_trim(cleaned);
  return parse_sym2_tokens(cleaned, 1);
}

std::string format_sym2(const SymmetricFamily2& f) {
  return "SYM2 m=" + std::to_string(f.order()) + " a=" + format_double(f.a());
}

std::variant<TransitionTensor, SymmetricFamily2> read_input(std::istream& in) {
  LineReader reader{in};
  std::string line;
  if (!reader.next(line)) throw ParseError(reader.line_no, "empty input");
  if (line == "TPT1") return read_tpt1_body(reader);
  if (split_tokens(line)[0] == "SYM2") return parse_sym2_tokens(line, reader.line_no);
  throw ParseError(reader.line_no, "unknown format; expected 'TPT1' or 'SYM2'");
}

std::optional<SymmetricFamily2> detect_symmetric_family(const TransitionTensor& t, double tol) {
  if (t.dim() != 2) return std::nullopt;
  double a = t.entries()[0];  // p(1 | 1,...,1), an even tuple
  if (!(a >= -tol && a <= 1.0 + tol)) return std::nullopt;
  a = std::min(1.0, std::max(0.0, a));
  double b = 1.0 - a;
  for (std::size_t lin = 0; lin < t.entries().size(); ++lin) {
    double expected = (std::popcount(lin) % 2 != 0) ? b : a;
    if (std::abs(t.entries()[lin] - expected) > tol) return std::nullopt;
  }
  return SymmetricFamily2(t.order(), a);
}

void write_trace(std::ostream& out, const ChainTrace& trace, double a) {
  out << "# seed=" << trace.seed << " m=" << trace.order << " a=" << format_double(a) << "\n";
  for (int s : trace.states) out << s << "\n";
}

}  // namespace tpt
