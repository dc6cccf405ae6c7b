#ifndef TPT_TOOLS_JSON_WRITER_HPP
#define TPT_TOOLS_JSON_WRITER_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tpt/numerics.hpp"

// Minimal streaming JSON emitter. Key order and float formatting are fixed
// by the caller, which is what makes repeated runs byte-identical; a general
// serializer with its own ideas about layout would not give that guarantee.
class JsonWriter {
 public:
  JsonWriter& begin_object() {
    separator();
    out_ += '{';
    depth_.push_back('o');
    fresh_ = true;
    return *this;
  }
  JsonWriter& end_object() {
    depth_.pop_back();
    newline();
    out_ += '}';
    fresh_ = false;
    return *this;
  }
  JsonWriter& begin_array() {
    separator();
    out_ += '[';
    depth_.push_back('a');
    fresh_ = true;
    return *this;
  }
  JsonWriter& end_array() {
    depth_.pop_back();
    newline();
    out_ += ']';
    fresh_ = false;
    return *this;
  }
  JsonWriter& key(std::string_view name) {
    separator();
    quote(name);
    out_ += ": ";
    pending_value_ = true;
    return *this;
  }
  JsonWriter& value(double v) {
    separator();
    out_ += tpt::format_double(v);
    return *this;
  }
  JsonWriter& value(std::uint64_t v) {
    separator();
    out_ += std::to_string(v);
    return *this;
  }
  JsonWriter& value(int v) {
    separator();
    out_ += std::to_string(v);
    return *this;
  }
  JsonWriter& value(bool v) {
    separator();
    out_ += v ? "true" : "false";
    return *this;
  }
  JsonWriter& value(std::string_view v) {
    separator();
    quote(v);
    return *this;
  }
  JsonWriter& null() {
    separator();
    out_ += "null";
    return *this;
  }

  const std::string& str() const { return out_; }

 private:
  void separator() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!fresh_) out_ += ',';
    newline();
    fresh_ = false;
  }
  void newline() {
    if (depth_.empty()) return;
    out_ += '\n';
    out_.append(2 * depth_.size(), ' ');
  }
  void quote(std::string_view s) {
    out_ += '"';
    for (char c : s) {
      if (c == '"' || c == '\\') out_ += '\\';
      out_ += c;
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<char> depth_;
  bool fresh_ = true;
  bool pending_value_ = false;
};

#endif  // TPT_TOOLS_JSON_WRITER_HPP
