// Copyright 2026 The percq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Byte-stable CSV / JSON serialization of result records. Field order is
// the insertion order; doubles print with 17 significant digits via
// std::to_chars (locale independent); lines end in '\n'.

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "percq/construct.hpp"
#include "percq/cube.hpp"
#include "percq/engine.hpp"
#include "percq/mc.hpp"
#include "percq/solver.hpp"

namespace percq {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { csv, json };

inline Format parse_format(std::string_view text) {
  if (text == "csv") return Format::csv;
  if (text == "json") return Format::json;
  throw ParameterError("unknown format '" + std::string(text) + "'");
}

using Field = std::variant<std::nullptr_t, bool, std::int64_t, std::uint64_t, double, std::string,
                           std::vector<std::string>, std::vector<std::uint64_t>>;

struct Record {
  std::vector<std::pair<std::string, Field>> fields;

  Record& add(std::string name, Field value) {
    fields.emplace_back(std::move(name), std::move(value));
    return *this;
  }
};

struct Table {
  std::vector<std::string> columns;
  std::vector<Record> rows;
};

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  if (ec != std::errc{}) throw OutputError("double formatting failed");
  return std::string(buf, end);
}

namespace detail {

inline std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

inline std::string json_value(const Field& f) {
  struct Visitor {
    std::string operator()(std::nullptr_t) const { return "null"; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(std::uint64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const {
      return std::isfinite(v) ? format_double(v) : "null";
    }
    std::string operator()(const std::string& s) const { return json_string(s); }
    std::string operator()(const std::vector<std::string>& v) const {
      std::string out = "[";
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + json_string(v[i]);
      return out + "]";
    }
    std::string operator()(const std::vector<std::uint64_t>& v) const {
      std::string out = "[";
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
      return out + "]";
    }
  };
  return std::visit(Visitor{}, f);
}

inline std::string csv_escape(std::string s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

inline std::string csv_value(const Field& f) {
  struct Visitor {
    std::string operator()(std::nullptr_t) const { return ""; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(std::uint64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(const std::vector<std::string>& v) const {
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ";" : "") + v[i];
      return out;
    }
    std::string operator()(const std::vector<std::uint64_t>& v) const {
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ";" : "") + std::to_string(v[i]);
      return out;
    }
  };
  return csv_escape(std::visit(Visitor{}, f));
}

}  // namespace detail

inline std::string to_json(const Record& rec) {
  std::string out = "{";
  for (std::size_t i = 0; i < rec.fields.size(); ++i) {
    if (i) out += ",";
    out += detail::json_string(rec.fields[i].first) + ":" + detail::json_value(rec.fields[i].second);
  }
  return out + "}";
}

inline std::string to_json(const Table& table) {
  std::string out = "[";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    out += (i ? ",\n" : "\n") + to_json(table.rows[i]);
  }
  return out + (table.rows.empty() ? "]\n" : "\n]\n");
}

inline std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
  out += "\n";
  for (const Record& rec : table.rows) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      if (i) out += ",";
      for (const auto& [name, value] : rec.fields) {
        if (name == table.columns[i]) {
          out += detail::csv_value(value);
          break;
        }
      }
    }
    out += "\n";
  }
  return out;
}

inline void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw OutputError("cannot open '" + path + "' for writing");
  file << text;
  if (!file.flush()) throw OutputError("failed writing '" + path + "'");
}

/// Writes a table as CSV (header + rows) or as a JSON array.
inline void emit(const Table& table, Format format, const std::string& path) {
  write_text(format == Format::csv ? to_csv(table) : to_json(table), path);
}

/// Writes a single record as a JSON object, or as a one-row CSV table.
inline void emit(const Record& rec, Format format, const std::string& path) {
  if (format == Format::json) {
    write_text(to_json(rec) + "\n", path);
    return;
  }
  Table t;
  for (const auto& f : rec.fields) t.columns.push_back(f.first);
  t.rows.push_back(rec);
  write_text(to_csv(t), path);
}

// ---------------------------------------------------------------------------
// Schemas

inline std::vector<std::string> vertex_strings(std::span<const Vertex> vs, int n) {
  std::vector<std::string> out;
  out.reserve(vs.size());
  for (Vertex v : vs) out.push_back(format_vertex(v, n));
  return out;
}

inline Record to_record(const ProcessResult& res, bool include_final_set) {
  Record rec;
  rec.add("percolated", res.percolated)
      .add("generations", res.generations)
      .add("growth", res.growth)
      .add("final_count", res.final_set.size());
  if (include_final_set) {
    const auto members = res.final_set.members();
    rec.add("final_set", vertex_strings(members, res.final_set.dimension()));
  }
  return rec;
}

inline const std::vector<std::string>& estimate_columns() {
  static const std::vector<std::string> cols{"n",      "k",         "r",          "backend",
                                             "p",      "trials",    "successes",  "point",
                                             "ci_low", "ci_high",   "seed"};
  return cols;
}

inline Record estimate_record(const GraphParams& params, Backend backend, const Estimate& e,
                              std::uint64_t seed) {
  Record rec;
  rec.add("n", std::int64_t{params.n})
      .add("k", std::int64_t{params.k})
      .add("r", std::int64_t{params.r})
      .add("backend", std::string(to_string(backend)))
      .add("p", e.p)
      .add("trials", e.trials)
      .add("successes", e.successes)
      .add("point", e.point)
      .add("ci_low", e.ci_low)
      .add("ci_high", e.ci_high)
      .add("seed", seed);
  return rec;
}

inline Table estimate_table(const GraphParams& params, Backend backend, std::span<const Estimate> rows,
                            std::uint64_t seed) {
  Table t{estimate_columns(), {}};
  for (const auto& e : rows) t.rows.push_back(estimate_record(params, backend, e, seed));
  return t;
}

/// PcResult fields plus the graph parameters and seed as metadata.
inline Record pc_record(const GraphParams& params, const PcResult& pc, std::uint64_t seed) {
  Record rec;
  rec.add("n", std::int64_t{params.n})
      .add("k", std::int64_t{params.k})
      .add("r", std::int64_t{params.r})
      .add("p_low", pc.p_low)
      .add("p_high", pc.p_high)
      .add("p_hat", pc.p_hat)
      .add("trials_per_eval", pc.trials_per_eval)
      .add("backend", std::string(to_string(pc.backend)))
      .add("evals", std::int64_t{pc.evals})
      .add("seed", seed);
  return rec;
}

inline Record minset_record(const MinSetResult& res, int n) {
  Record rec;
  rec.add("m", res.m ? Field{std::int64_t{*res.m}} : Field{nullptr})
      .add("witness", vertex_strings(res.witness, n))
      .add("exhausted_to", std::int64_t{res.exhausted_to})
      .add("nodes_searched", res.nodes_searched)
      .add("seconds", res.seconds);
  return rec;
}

}  // namespace percq
