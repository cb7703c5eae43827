#ifndef FLATCONE_TOOLS_RESULT_TABLE_HPP_
#define FLATCONE_TOOLS_RESULT_TABLE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "experiment/config.hpp"

namespace flatcone::tools {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct ResultRow {
  std::string experiment;
  int k = 0;
  std::optional<double> p;  // empty for rows without an exponent
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  // Checked rows count as property violations when the gap exceeds the
  // tolerance; the others are reported for inspection only.
  bool checked = false;
  // Set by exact checks, whose verdict does not go through the tolerance.
  bool failed = false;
};

class ResultTable {
 public:
  void Add(ResultRow row) { rows_.push_back(std::move(row)); }
  void Append(std::vector<ResultRow> rows);

  // Stable sort by (experiment, k, p); rows without p come first.
  void Sort();
  const std::vector<ResultRow>& rows() const { return rows_; }

  // Failed rows, and checked rows with gap > tolerance * max(1, |rhs|) or a
  // NaN gap.
  std::vector<const ResultRow*> Violations(double tolerance) const;

  // Header plus one line per row; RFC 4180 quoting, 17 significant digits.
  std::string ToCsv() const;
  std::string ToJsonLines() const;
  std::string Render(OutputFormat format) const;

 private:
  std::vector<ResultRow> rows_;
};

// 64-bit FNV-1a over the bytes.
std::uint64_t Fnv1a64(std::string_view bytes);
// Hash of the canonical dump of a parsed configuration (keys sorted).
std::string ConfigHash(const nlohmann::json& document);

std::string FormatNumber(double value);
std::string QuoteCsvField(std::string_view field);

// UTC, second resolution.
std::string Timestamp();

}  // namespace flatcone::tools

#endif  // FLATCONE_TOOLS_RESULT_TABLE_HPP_
