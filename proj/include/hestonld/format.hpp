#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace hestonld {

// %.{digits}g with stable bytes; infinities come out as "inf"/"-inf".
inline std::string format_double(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

// 17 significant digits: exact round trip for JSON payloads.
inline std::string json_number(double v) { return format_double(v, 17); }

// 9 significant digits for human-facing CSV.
inline std::string csv_number(double v) { return format_double(v, 9); }

// Minimal JSON emitter with insertion-ordered keys and fixed number
// formatting, so equal inputs always serialize to equal bytes. Non-finite
// doubles are emitted as strings ("inf", "-inf").
class JsonWriter {
 public:
  JsonWriter& begin_object() { return token("{", true); }
  JsonWriter& end_object() { return close("}"); }
  JsonWriter& begin_array() { return token("[", true); }
  JsonWriter& end_array() { return close("]"); }

  JsonWriter& key(const std::string& k) {
    separator();
    out_ += quote(k);
    out_ += ':';
    pending_value_ = true;
    return *this;
  }

  JsonWriter& value(double v) {
    separator();
    if (std::isfinite(v)) {
      out_ += json_number(v);
    } else if (std::isnan(v)) {
      out_ += "null";
    } else {
      out_ += quote(v > 0 ? "inf" : "-inf");
    }
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

  JsonWriter& value(const std::string& v) {
    separator();
    out_ += quote(v);
    return *this;
  }

  JsonWriter& value(const char* v) { return value(std::string(v)); }

  // Splices an already-serialized JSON fragment in value position.
  JsonWriter& raw(const std::string& json) {
    separator();
    out_ += json;
    return *this;
  }

  [[nodiscard]] const std::string& str() const { return out_; }

 private:
  JsonWriter& token(const char* t, bool opens) {
    separator();
    out_ += t;
    if (opens) fresh_ = true;
    return *this;
  }

  JsonWriter& close(const char* t) {
    out_ += t;
    fresh_ = false;
    return *this;
  }

  void separator() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!fresh_ && !out_.empty()) {
      const char last = out_.back();
      if (last != '{' && last != '[') out_ += ',';
    }
    fresh_ = false;
  }

  static std::string quote(const std::string& s) {
    std::string r = "\"";
    for (char c : s) {
      switch (c) {
        case '"': r += "\\\""; break;
        case '\\': r += "\\\\"; break;
        case '\n': r += "\\n"; break;
        case '\t': r += "\\t"; break;
        default: r += c;
      }
    }
    r += '"';
    return r;
  }

  std::string out_;
  bool pending_value_ = false;
  bool fresh_ = false;
};

// One CSV row from already-formatted cells.
inline std::string csv_row(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

}  // namespace hestonld
