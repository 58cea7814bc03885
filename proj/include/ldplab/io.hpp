#pragma once

// Measure files and report output.
//
// Measure file:
//   {"dim": 2, "atoms": [{"label": "a", "weight": 0.5, "matrix": [[1, 0], [0, 1]]}, ...]}
// Matrices are row-major.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ldplab/error.hpp"
#include "ldplab/linalg.hpp"
#include "ldplab/measure.hpp"

namespace ldplab::io {

using Json = nlohmann::ordered_json;

inline constexpr double kWeightRenormalizeTolerance = 1e-9;

namespace detail {

inline std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

[[noreturn]] inline void field_error(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::ParseError, "field '" + field + "': " + what);
}

inline const Json& require(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) field_error(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) field_error(path + "." + key, "missing");
  return *it;
}

inline double number(const Json& v, const std::string& path) {
  if (!v.is_number()) field_error(path, "expected a number");
  return v.get<double>();
}

}  // namespace detail

/// Parses and validates a measure. Weights summing to within 1e-9 of 1 are
/// renormalized, anything else is rejected.
inline MeasureSpec parse_measure(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError,
                "line " + std::to_string(detail::line_of(text, e.byte)) + ": " + e.what());
  }
  const auto dim_value = detail::number(detail::require(doc, "dim", "$"), "$.dim");
  if (!(dim_value >= 1.0) || dim_value != std::floor(dim_value)) detail::field_error("$.dim", "expected a positive integer");
  const auto dim = static_cast<std::size_t>(dim_value);
  const auto& atoms_json = detail::require(doc, "atoms", "$");
  if (!atoms_json.is_array() || atoms_json.empty()) detail::field_error("$.atoms", "expected a non-empty array");

  std::vector<Atom> atoms;
  double total = 0.0;
  for (std::size_t i = 0; i < atoms_json.size(); ++i) {
    const std::string path = "$.atoms[" + std::to_string(i) + "]";
    const auto& a = atoms_json[i];
    const auto& label = detail::require(a, "label", path);
    if (!label.is_string()) detail::field_error(path + ".label", "expected a string");
    const double weight = detail::number(detail::require(a, "weight", path), path + ".weight");
    const auto& rows = detail::require(a, "matrix", path);
    if (!rows.is_array() || rows.size() != dim) {
      throw Error(ErrorKind::ValidationError, path + ".matrix: expected " + std::to_string(dim) + " rows");
    }
    std::vector<double> entries;
    for (std::size_t r = 0; r < dim; ++r) {
      const std::string row_path = path + ".matrix[" + std::to_string(r) + "]";
      if (!rows[r].is_array() || rows[r].size() != dim) {
        throw Error(ErrorKind::ValidationError, row_path + ": expected " + std::to_string(dim) + " entries");
      }
      for (std::size_t c = 0; c < dim; ++c) {
        entries.push_back(detail::number(rows[r][c], row_path + "[" + std::to_string(c) + "]"));
      }
    }
    try {
      atoms.push_back({label.get<std::string>(), SquareMatrix::from_row_major(dim, entries), weight});
    } catch (const Error& e) {
      throw Error(ErrorKind::ValidationError, path + ".matrix: " + e.what());
    }
    total += weight;
  }
  // sums off by rounding only are left alone, so written measures read back unchanged
  const double rounding = 4.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(atoms.size());
  const double off = std::abs(total - 1.0);
  if (std::isfinite(total) && off <= kWeightRenormalizeTolerance && off > rounding) {
    for (auto& a : atoms) a.weight /= total;
  }
  return MeasureSpec(std::move(atoms), kWeightRenormalizeTolerance);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline MeasureSpec load_measure(const std::filesystem::path& path) { return parse_measure(read_file(path)); }

inline Json measure_to_json(const MeasureSpec& measure) {
  Json atoms = Json::array();
  for (const auto& a : measure.atoms()) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < measure.dim(); ++r) {
      Json row = Json::array();
      for (std::size_t c = 0; c < measure.dim(); ++c) row.push_back(a.matrix(r, c));
      rows.push_back(std::move(row));
    }
    atoms.push_back({{"label", a.label}, {"weight", a.weight}, {"matrix", std::move(rows)}});
  }
  return {{"dim", measure.dim()}, {"atoms", std::move(atoms)}};
}

/// Writes to a temporary sibling and renames it over `path`.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot rename " + tmp.string() + ": " + ec.message());
}

inline void write_measure(const std::filesystem::path& path, const MeasureSpec& measure) {
  write_atomic(path, measure_to_json(measure).dump(2) + "\n");
}

inline void write_json(const std::filesystem::path& path, const Json& doc) { write_atomic(path, doc.dump(2) + "\n"); }

/// Shortest decimal that reads back to the same double; inf and nan spelled out.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return Json(v).dump();
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) throw Error(ErrorKind::BadParameters, "CSV row width differs from header");
    rows_.push_back(std::move(cells));
  }

  std::string str() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
  }

  std::size_t rows() const noexcept { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace ldplab::io
