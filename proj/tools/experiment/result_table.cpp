#include "experiment/result_table.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <tuple>

namespace flatcone::tools {

void ResultTable::Append(std::vector<ResultRow> rows) {
  for (ResultRow& row : rows) rows_.push_back(std::move(row));
}

void ResultTable::Sort() {
  const auto key = [](const ResultRow& row) {
    return std::make_tuple(std::string_view(row.experiment), row.k, row.p.has_value(), row.p.value_or(0.0));
  };
  std::stable_sort(rows_.begin(), rows_.end(), [&](const ResultRow& a, const ResultRow& b) { return key(a) < key(b); });
}

std::vector<const ResultRow*> ResultTable::Violations(double tolerance) const {
  std::vector<const ResultRow*> violations;
  for (const ResultRow& row : rows_) {
    if (row.failed) {
      violations.push_back(&row);
      continue;
    }
    if (!row.checked) continue;
    const double allowed = tolerance * std::max(1.0, std::abs(row.rhs));
    if (!(row.gap <= allowed)) violations.push_back(&row);
  }
  return violations;
}

std::string FormatNumber(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string QuoteCsvField(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string ResultTable::ToCsv() const {
  std::string out = "experiment,k,p,lhs,rhs,gap\r\n";
  for (const ResultRow& row : rows_) {
    out += QuoteCsvField(row.experiment);
    out += ',' + std::to_string(row.k) + ',';
    if (row.p) out += FormatNumber(*row.p);
    out += ',' + FormatNumber(row.lhs) + ',' + FormatNumber(row.rhs) + ',' + FormatNumber(row.gap) + "\r\n";
  }
  return out;
}

std::string ResultTable::ToJsonLines() const {
  // JSON has no NaN or infinity: those become null, and p = inf the string "inf".
  const auto number = [](double value) -> nlohmann::json {
    if (std::isnan(value)) return nullptr;
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    return value;
  };
  std::string out;
  for (const ResultRow& row : rows_) {
    nlohmann::ordered_json line;
    line["experiment"] = row.experiment;
    line["k"] = row.k;
    line["p"] = row.p ? number(*row.p) : nlohmann::json(nullptr);
    line["lhs"] = number(row.lhs);
    line["rhs"] = number(row.rhs);
    line["gap"] = number(row.gap);
    out += line.dump() + "\n";
  }
  return out;
}

std::string ResultTable::Render(OutputFormat format) const {
  return format == OutputFormat::kCsv ? ToCsv() : ToJsonLines();
}

std::uint64_t Fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string ConfigHash(const nlohmann::json& document) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "fnv1a64:%016llx", static_cast<unsigned long long>(Fnv1a64(document.dump())));
  return buffer;
}

std::string Timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

}  // namespace flatcone::tools
