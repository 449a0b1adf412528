#pragma once

// Deterministic output plumbing: CSV and JSON files are emitted with a
// fixed key order, '.' decimal separator, and floats printed at 17
// significant digits, so identical configurations produce byte-identical
// artifacts.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "solact/errors.hpp"

namespace solact::io {

/// %.17g with negative zero normalized; round-trips any double.
inline std::string fmt17(double x) {
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

/// Minimal JSON value with insertion-ordered object keys.
class Json {
 public:
  Json() : v_(nullptr) {}
  Json(bool b) : v_(b) {}
  Json(double d) : v_(d) {}
  Json(int i) : v_(static_cast<long long>(i)) {}
  Json(long long i) : v_(i) {}
  Json(std::size_t i) : v_(static_cast<long long>(i)) {}
  Json(const char* s) : v_(std::string(s)) {}
  Json(std::string s) : v_(std::move(s)) {}

  static Json object() {
    Json j;
    j.v_ = Object{};
    return j;
  }
  static Json array() {
    Json j;
    j.v_ = Array{};
    return j;
  }

  Json& set(const std::string& key, Json value) {
    std::get<Object>(v_).emplace_back(key, std::move(value));
    return *this;
  }
  Json& push(Json value) {
    std::get<Array>(v_).push_back(std::move(value));
    return *this;
  }

  std::string dump(int indent = 2) const {
    std::string out;
    write(out, indent, 0);
    return out;
  }

 private:
  using Array = std::vector<Json>;
  using Object = std::vector<std::pair<std::string, Json>>;

  void write(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
    if (std::holds_alternative<std::nullptr_t>(v_)) {
      out += "null";
    } else if (const auto* b = std::get_if<bool>(&v_)) {
      out += *b ? "true" : "false";
    } else if (const auto* d = std::get_if<double>(&v_)) {
      out += fmt17(*d);
    } else if (const auto* i = std::get_if<long long>(&v_)) {
      out += std::to_string(*i);
    } else if (const auto* s = std::get_if<std::string>(&v_)) {
      out += '"';
      out += json_escape(*s);
      out += '"';
    } else if (const auto* a = std::get_if<Array>(&v_)) {
      if (a->empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t k = 0; k < a->size(); ++k) {
        out += pad;
        (*a)[k].write(out, indent, depth + 1);
        out += (k + 1 < a->size()) ? ",\n" : "\n";
      }
      out += close_pad + "]";
    } else {
      const auto& o = std::get<Object>(v_);
      if (o.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      for (std::size_t k = 0; k < o.size(); ++k) {
        out += pad + '"' + json_escape(o[k].first) + "\": ";
        o[k].second.write(out, indent, depth + 1);
        out += (k + 1 < o.size()) ? ",\n" : "\n";
      }
      out += close_pad + "}";
    }
  }

  std::variant<std::nullptr_t, bool, double, long long, std::string, Array,
               Object>
      v_;
};

/// CSV buffer: header row + fmt17 data rows, comma delimited.
class Csv {
 public:
  Csv& header(std::initializer_list<const char*> cols) {
    bool first = true;
    for (const char* c : cols) {
      if (!first) buf_ += ',';
      buf_ += c;
      first = false;
    }
    buf_ += '\n';
    return *this;
  }
  Csv& row(std::initializer_list<double> vals) {
    bool first = true;
    for (double v : vals) {
      if (!first) buf_ += ',';
      buf_ += fmt17(v);
      first = false;
    }
    buf_ += '\n';
    return *this;
  }
  const std::string& str() const { return buf_; }

 private:
  std::string buf_;
};

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw numeric_error("cannot open " + path.string() + " for writing");
  f << content;
  if (!f) throw numeric_error("failed writing " + path.string());
}

inline void write_json(const std::filesystem::path& path, const Json& j) {
  write_file(path, j.dump() + "\n");
}

}  // namespace solact::io
