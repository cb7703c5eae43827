#ifndef FLATCONE_TOOLS_CONFIG_HPP_
#define FLATCONE_TOOLS_CONFIG_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "flatcone/convex.hpp"
#include "flatcone/graded.hpp"
#include "flatcone/model_p1.hpp"
#include "flatcone/nonarch.hpp"

namespace flatcone::tools {

// A rejected configuration, located by a JSON pointer into the document.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string pointer, const std::string& message)
      : std::runtime_error((pointer.empty() ? std::string("/") : pointer) + ": " + message),
        pointer_(std::move(pointer)) {}

  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

enum class OutputFormat { kCsv, kJsonLines };

OutputFormat ParseOutputFormat(const std::string& text);

struct NamedFunction {
  std::string name;
  PLFunction function;
  RationalPLFunction exact;
};

enum class FiltrationChoice { kVanishingOrder, kLinear, kTrivial };

struct FiltrationSpec {
  FiltrationChoice choice = FiltrationChoice::kVanishingOrder;
  Rational slope = 1;  // kLinear only

  GradedNA Build() const;
  ExactGradedNA BuildExact() const;
  // Closed interval spanned by a_i / k.
  std::pair<double, double> Support() const;
};

struct ExperimentConfig {
  p1::TorusMetric model = p1::TorusMetric::FubiniStudy();
  // Second metric for the quantised distance rows of `quantise`.
  std::optional<p1::TorusMetric> reference;
  FiltrationSpec filtration;
  std::vector<NamedFunction> functions;  // sorted by name
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<double> p_list{2.0};
  std::vector<int> k_list;
  Normalization normalization = Normalization::kProbability;
  std::optional<std::string> output_path;
  std::optional<OutputFormat> output_format;
  bool allow_nondecreasing = false;
  // Checked rows must satisfy gap <= tolerance * max(1, |rhs|).
  double tolerance = 1e-10;

  int submult_max_total = 24;
  int submult_samples = 200;
  int distortion_trials = 100;
  int distortion_max_dim = 8;
  std::vector<double> ray_t_list{0.0, 0.5, 1.0, 2.0};

  // The parsed document, used for the configuration hash.
  nlohmann::json document;

  const NamedFunction& function(const std::string& name) const;
};

ExperimentConfig ParseConfig(const nlohmann::json& document);
// Reads and parses a file; unreadable or malformed JSON is a ConfigError.
ExperimentConfig LoadConfig(const std::string& path);

// Fixture formats, also used inside configurations.
p1::TorusMetric ParseTorusMetric(const nlohmann::json& node, const std::string& pointer);
NamedFunction ParseFunction(const std::string& name, const nlohmann::json& node, const std::string& pointer,
                            bool require_decreasing);
// {basis?: [[[re, im], ...], ...] (columns), values: [...]}; no basis means
// the standard one.
NANorm ParseNANorm(const nlohmann::json& node, const std::string& pointer);
DiscreteMeasure ParseDiscreteMeasure(const nlohmann::json& node, const std::string& pointer);

}  // namespace flatcone::tools

#endif  // FLATCONE_TOOLS_CONFIG_HPP_
