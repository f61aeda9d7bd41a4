#pragma once

// Text formats.
//
// Instance (line oriented, '#' starts a comment line, blank lines ignored):
//   s t
//   alpha_1 ... alpha_s
//   beta_1 ... beta_t
//   W[1][1] ... W[1][t]
//   ...
//   W[s][1] ... W[s][t]
//
// Result: one JSON object per line with the keys weight, edges ([i, j,
// multiplicity] sorted by (i, j)), phase1_augmentations, phase2_augmentations,
// dual_updates and solver_version, in that order.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "bmatch/core.hpp"
#include "bmatch/errors.hpp"
#include "bmatch/solver.hpp"

namespace bmatch {

namespace detail {

class LineReader {
 public:
  explicit LineReader(std::string_view text) {
    std::size_t start = 0;
    while (start < text.size()) {
      const std::size_t nl = text.find('\n', start);
      const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
      std::string_view line = text.substr(start, end - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lines_.push_back(line);
      start = end + 1;
    }
  }

  // Next line with content; comments and blank lines are skipped.
  bool next(std::string_view& line, std::size_t& line_no) {
    while (cursor_ < lines_.size()) {
      const std::string_view raw = lines_[cursor_++];
      const auto first = raw.find_first_not_of(" \t");
      if (first == std::string_view::npos || raw[first] == '#') continue;
      line = raw;
      line_no = cursor_;
      return true;
    }
    return false;
  }

  std::size_t eof_line() const noexcept { return lines_.size() + 1; }

 private:
  std::vector<std::string_view> lines_;
  std::size_t cursor_ = 0;
};

inline std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
T parse_token(std::string_view tok, std::size_t line_no, const char* what) {
  T value{};
  const char* begin = tok.data();
  const char* end = tok.data() + tok.size();
  if (!tok.empty() && tok.front() == '+') ++begin;
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw SyntaxError(line_no, std::string("bad ") + what + " '" +
                                   std::string(tok) + "'");
  }
  return value;
}

template <typename T>
std::vector<T> parse_row(LineReader& reader, std::size_t count,
                         const char* what) {
  std::string_view line;
  std::size_t line_no = 0;
  if (!reader.next(line, line_no)) {
    throw SyntaxError(reader.eof_line(), std::string("expected ") + what);
  }
  const auto toks = split_tokens(line);
  if (toks.size() != count) {
    throw SyntaxError(line_no, std::string("expected ") + std::to_string(count) +
                                   " values for " + what + ", got " +
                                   std::to_string(toks.size()));
  }
  std::vector<T> out;
  out.reserve(count);
  for (auto tok : toks) out.push_back(parse_token<T>(tok, line_no, what));
  return out;
}

}  // namespace detail

inline BMatchInstance parse_instance(std::string_view text) {
  detail::LineReader reader(text);
  const auto header = detail::parse_row<std::int64_t>(reader, 2, "header 's t'");
  if (header[0] < 0 || header[1] < 0) {
    throw SyntaxError(1, "vertex counts must be nonnegative");
  }
  BMatchInstance inst;
  inst.s = static_cast<std::size_t>(header[0]);
  inst.t = static_cast<std::size_t>(header[1]);
  if (inst.s == 0 || inst.t == 0) {
    throw InvalidInstance(std::string(to_string(ValidationCode::ShapeMismatch)) +
                          ": s and t must be at least 1");
  }
  inst.alpha = detail::parse_row<Capacity>(reader, inst.s, "left capacities");
  inst.beta = detail::parse_row<Capacity>(reader, inst.t, "right capacities");
  inst.weights = Matrix(inst.s, inst.t);
  for (std::size_t i = 0; i < inst.s; ++i) {
    const auto row = detail::parse_row<double>(reader, inst.t, "weight row");
    std::copy(row.begin(), row.end(), inst.weights.row(i).begin());
  }
  std::string_view extra;
  std::size_t extra_line = 0;
  if (reader.next(extra, extra_line)) {
    throw SyntaxError(extra_line, "unexpected content after the weight matrix");
  }
  require_valid(inst);
  return inst;
}

inline std::string render_instance(const BMatchInstance& inst) {
  std::string out;
  auto join = [&out](const auto& values, auto fmt) {
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (k > 0) out += ' ';
      out += fmt(values[k]);
    }
    out += '\n';
  };
  auto fmt_cap = [](Capacity c) { return std::to_string(c); };
  out += std::to_string(inst.s) + " " + std::to_string(inst.t) + "\n";
  join(inst.alpha, fmt_cap);
  join(inst.beta, fmt_cap);
  for (std::size_t i = 0; i < inst.weights.rows(); ++i) {
    join(inst.weights.row(i), [](double w) { return format_number(w); });
  }
  return out;
}

inline std::string render_result(const BMatching& bm, const SolveReport& report) {
  auto edges = bm.edges;
  std::sort(edges.begin(), edges.end());
  nlohmann::ordered_json j;
  j["weight"] = bm.total_weight;
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : edges) {
    j["edges"].push_back({e.i, e.j, e.multiplicity});
  }
  j["phase1_augmentations"] = report.phase1_augmentations;
  j["phase2_augmentations"] = report.phase2_augmentations;
  j["dual_updates"] = report.dual_updates;
  j["solver_version"] = kSolverVersion;
  return j.dump() + "\n";
}

struct ResultRecord {
  BMatching matching;
  SolveReport report;
  std::string solver_version;
};

inline ResultRecord parse_result_record(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + static_cast<std::size_t>(std::count(
                              text.begin(), text.begin() + upto, '\n'));
    throw SyntaxError(line, "malformed JSON");
  }
  auto fail = [](const std::string& why) { return SyntaxError(1, why); };
  if (!j.is_object()) throw fail("result must be a JSON object");

  auto count_field = [&](const char* key) -> std::size_t {
    if (!j.contains(key)) return 0;
    const auto& v = j.at(key);
    if (!v.is_number_unsigned()) {
      throw fail(std::string("field '") + key + "' must be a nonnegative integer");
    }
    return v.get<std::size_t>();
  };

  ResultRecord rec;
  if (!j.contains("weight") || !j.at("weight").is_number()) {
    throw fail("field 'weight' must be a number");
  }
  rec.matching.total_weight = j.at("weight").get<double>();
  if (!j.contains("edges") || !j.at("edges").is_array()) {
    throw fail("field 'edges' must be an array");
  }
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_unsigned() ||
        !e[1].is_number_unsigned() || !e[2].is_number_integer()) {
      throw fail("each edge must be [i, j, multiplicity]");
    }
    rec.matching.edges.push_back(
        {e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<Capacity>()});
  }
  rec.report.total_weight = rec.matching.total_weight;
  rec.report.phase1_augmentations = count_field("phase1_augmentations");
  rec.report.phase2_augmentations = count_field("phase2_augmentations");
  rec.report.dual_updates = count_field("dual_updates");
  if (j.contains("solver_version")) {
    if (!j.at("solver_version").is_string()) {
      throw fail("field 'solver_version' must be a string");
    }
    rec.solver_version = j.at("solver_version").get<std::string>();
  }
  return rec;
}

inline BMatching parse_result(std::string_view text) {
  return parse_result_record(text).matching;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << content;
  if (!out) throw Error("write failed for " + path);
}

}  // namespace bmatch
