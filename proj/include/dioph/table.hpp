#ifndef DIOPH_TABLE_HPP
#define DIOPH_TABLE_HPP

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dioph/mpreal.hpp"

namespace dioph {

enum class OutputFormat { csv, json, plain };

inline OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  if (s == "plain") return OutputFormat::plain;
  throw DomainError("unknown format '" + s + "' (expected csv, json or plain)");
}

/// One field of a report row. Empty cells render as "" (CSV) and null (JSON).
using Cell = std::variant<std::monostate, BigInt, Real, long, double, bool, std::string>;

/// Column-oriented report shared by every subcommand.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

namespace detail {

// Text of a numeric or boolean cell; strings pass through untouched.
inline std::string cell_text(const Cell& cell, int significant) {
  struct Visitor {
    int sig;
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(const BigInt& v) const { return v.get_str(); }
    std::string operator()(const Real& v) const { return v.to_string(sig); }
    std::string operator()(long v) const { return std::to_string(v); }
    std::string operator()(double v) const {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.*g", std::min(sig, 17), v);
      return buf;
    }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{significant}, cell);
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out + "\"";
}

}  // namespace detail

/// CSV with a header row; fields quoted only when they need it.
inline void write_csv(std::ostream& out, const Table& t, int significant) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    out << (i ? "," : "") << detail::csv_quote(t.columns[i]);
  }
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << detail::csv_quote(detail::cell_text(row[i], significant));
    }
    out << '\n';
  }
}

/// One JSON object per line, keys in column order. Numbers are emitted with
/// the same text as the CSV form, so both carry identical values.
inline void write_json(std::ostream& out, const Table& t, int significant) {
  for (const auto& row : t.rows) {
    out << '{';
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << detail::json_string(t.columns[i]) << ':';
      const Cell& c = row[i];
      if (std::holds_alternative<std::monostate>(c)) {
        out << "null";
      } else if (std::holds_alternative<std::string>(c)) {
        out << detail::json_string(std::get<std::string>(c));
      } else {
        out << detail::cell_text(c, significant);
      }
    }
    out << "}\n";
  }
}

/// Right-aligned columns for terminals.
inline void write_plain(std::ostream& out, const Table& t, int significant) {
  std::vector<std::vector<std::string>> text;
  std::vector<std::size_t> width(t.columns.size());
  for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = t.columns[i].size();
  for (const auto& row : t.rows) {
    auto& line = text.emplace_back();
    for (std::size_t i = 0; i < row.size(); ++i) {
      line.push_back(detail::cell_text(row[i], significant));
      width[i] = std::max(width[i], line.back().size());
    }
  }
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << "  ";
      out << std::string(width[i] - cells[i].size(), ' ') << cells[i];
    }
    out << '\n';
  };
  emit(t.columns);
  for (const auto& line : text) emit(line);
}

inline void write_table(std::ostream& out, const Table& t, OutputFormat format, int significant) {
  switch (format) {
    case OutputFormat::csv: write_csv(out, t, significant); break;
    case OutputFormat::json: write_json(out, t, significant); break;
    case OutputFormat::plain: write_plain(out, t, significant); break;
  }
}

}  // namespace dioph

#endif  // DIOPH_TABLE_HPP
