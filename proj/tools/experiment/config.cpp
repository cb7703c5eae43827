#include "experiment/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "flatcone/error.hpp"
#include "flatcone/rational.hpp"

namespace flatcone::tools {
namespace {

using nlohmann::json;

std::string Child(const std::string& pointer, const std::string& key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~') {
      escaped += "~0";
    } else if (c == '/') {
      escaped += "~1";
    } else {
      escaped += c;
    }
  }
  return pointer + "/" + escaped;
}

std::string Child(const std::string& pointer, std::size_t index) { return pointer + "/" + std::to_string(index); }

const json* Find(const json& object, const char* key) {
  const auto it = object.find(key);
  return it == object.end() ? nullptr : &*it;
}

void RequireObject(const json& node, const std::string& pointer) {
  if (!node.is_object()) throw ConfigError(pointer, "expected an object");
}

const json& Require(const json& object, const char* key, const std::string& pointer) {
  const json* node = Find(object, key);
  if (node == nullptr) throw ConfigError(Child(pointer, key), "missing required field");
  return *node;
}

void RejectUnknownKeys(const json& object, const std::string& pointer, std::initializer_list<const char*> known) {
  for (const auto& [key, value] : object.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw ConfigError(Child(pointer, key), "unknown field");
    }
  }
}

double Number(const json& node, const std::string& pointer) {
  if (!node.is_number()) throw ConfigError(pointer, "expected a number");
  return node.get<double>();
}

int Integer(const json& node, const std::string& pointer) {
  if (!node.is_number_integer()) throw ConfigError(pointer, "expected an integer");
  const auto value = node.get<long long>();
  if (value < -(1LL << 30) || value > (1LL << 30)) throw ConfigError(pointer, "integer out of range");
  return static_cast<int>(value);
}

std::string String(const json& node, const std::string& pointer) {
  if (!node.is_string()) throw ConfigError(pointer, "expected a string");
  return node.get<std::string>();
}

const json& Array(const json& node, const std::string& pointer) {
  if (!node.is_array()) throw ConfigError(pointer, "expected an array");
  return node;
}

// Numbers are read through their shortest round-trip decimal, so 0.1 in the
// document means 1/10; strings may be "p/q" or decimals.
Rational ExactNumber(const json& node, const std::string& pointer) {
  try {
    if (node.is_string()) return ParseRational(node.get<std::string>());
    if (node.is_number_integer()) return Rational(node.get<long long>());
    if (node.is_number()) {
      const double value = node.get<double>();
      char buffer[64];
      const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
      return ParseRational(std::string_view(buffer, static_cast<std::size_t>(result.ptr - buffer)));
    }
  } catch (const Error& e) {
    throw ConfigError(pointer, e.what());
  }
  throw ConfigError(pointer, "expected a number or a rational string");
}

double Exponent(const json& node, const std::string& pointer) {
  double p = 0.0;
  if (node.is_string()) {
    const std::string text = node.get<std::string>();
    if (text != "inf" && text != "infinity") throw ConfigError(pointer, "expected a number >= 1 or \"inf\"");
    p = kInfinity;
  } else {
    p = Number(node, pointer);
  }
  if (!(p >= 1.0)) throw ConfigError(pointer, "exponent must be >= 1");
  return p;
}

std::vector<double> NumberList(const json& node, const std::string& pointer) {
  std::vector<double> values;
  for (std::size_t i = 0; i < Array(node, pointer).size(); ++i) values.push_back(Number(node[i], Child(pointer, i)));
  return values;
}

int PositiveInteger(const json& node, const std::string& pointer) {
  const int value = Integer(node, pointer);
  if (value < 1) throw ConfigError(pointer, "expected a positive integer");
  return value;
}

FiltrationSpec ParseFiltration(const json& node, const std::string& pointer) {
  RequireObject(node, pointer);
  RejectUnknownKeys(node, pointer, {"kind", "slope"});
  const std::string kind = String(Require(node, "kind", pointer), Child(pointer, "kind"));
  FiltrationSpec spec;
  if (kind == "vanishing_order") {
    spec.choice = FiltrationChoice::kVanishingOrder;
  } else if (kind == "linear") {
    spec.choice = FiltrationChoice::kLinear;
    spec.slope = ExactNumber(Require(node, "slope", pointer), Child(pointer, "slope"));
  } else if (kind == "trivial") {
    spec.choice = FiltrationChoice::kTrivial;
    spec.slope = 0;
  } else {
    throw ConfigError(Child(pointer, "kind"), "unknown filtration kind '" + kind + "'");
  }
  if (spec.choice != FiltrationChoice::kLinear && Find(node, "slope") != nullptr) {
    throw ConfigError(Child(pointer, "slope"), "only linear filtrations take a slope");
  }
  return spec;
}

Matrix ParseBasis(const json& node, const std::string& pointer, std::size_t dim) {
  if (Array(node, pointer).size() != dim) throw ConfigError(pointer, "basis needs one column per value");
  Matrix basis(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t j = 0; j < dim; ++j) {
    const std::string column_pointer = Child(pointer, j);
    if (Array(node[j], column_pointer).size() != dim) throw ConfigError(column_pointer, "column has the wrong length");
    for (std::size_t i = 0; i < dim; ++i) {
      const std::string entry_pointer = Child(column_pointer, i);
      const json& entry = node[j][i];
      if (!entry.is_array() || entry.size() != 2) throw ConfigError(entry_pointer, "expected [re, im]");
      basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          Complex(Number(entry[0], Child(entry_pointer, 0)), Number(entry[1], Child(entry_pointer, 1)));
    }
  }
  return basis;
}

}  // namespace

OutputFormat ParseOutputFormat(const std::string& text) {
  if (text == "csv") return OutputFormat::kCsv;
  if (text == "jsonl") return OutputFormat::kJsonLines;
  throw ConfigError("/output/format", "format must be csv or jsonl, got '" + text + "'");
}

GradedNA FiltrationSpec::Build() const {
  switch (choice) {
    case FiltrationChoice::kVanishingOrder:
      return p1::VanishingOrderFiltration();
    case FiltrationChoice::kLinear:
      return p1::LinearFiltration(ToDouble(slope));
    case FiltrationChoice::kTrivial:
      return p1::TrivialFiltration();
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown filtration");
}

ExactGradedNA FiltrationSpec::BuildExact() const {
  if (choice == FiltrationChoice::kVanishingOrder) return p1::ExactVanishingOrderFiltration();
  return p1::ExactLinearFiltration(slope);
}

std::pair<double, double> FiltrationSpec::Support() const {
  const double s = ToDouble(slope);
  return {std::min(0.0, s), std::max(0.0, s)};
}

const NamedFunction& ExperimentConfig::function(const std::string& name) const {
  for (const NamedFunction& f : functions) {
    if (f.name == name) return f;
  }
  throw ConfigError("/functions", "no function named '" + name + "'");
}

p1::TorusMetric ParseTorusMetric(const json& node, const std::string& pointer) {
  RequireObject(node, pointer);
  RejectUnknownKeys(node, pointer, {"kind", "breakpoints", "slopes", "offset"});
  const std::string kind = String(Require(node, "kind", pointer), Child(pointer, "kind"));
  const json* offset_node = Find(node, "offset");
  const double offset = offset_node == nullptr ? 0.0 : Number(*offset_node, Child(pointer, "offset"));
  try {
    if (kind == "fubini_study") {
      if (Find(node, "breakpoints") != nullptr || Find(node, "slopes") != nullptr) {
        throw ConfigError(pointer, "fubini_study takes no breakpoints or slopes");
      }
      return p1::TorusMetric::FubiniStudy(offset);
    }
    if (kind == "pl_potential") {
      return p1::TorusMetric::PLPotential(
          NumberList(Require(node, "breakpoints", pointer), Child(pointer, "breakpoints")),
          NumberList(Require(node, "slopes", pointer), Child(pointer, "slopes")), offset);
    }
  } catch (const Error& e) {
    throw ConfigError(pointer, e.what());
  }
  throw ConfigError(Child(pointer, "kind"), "unknown metric kind '" + kind + "'");
}

NamedFunction ParseFunction(const std::string& name, const json& node, const std::string& pointer,
                            bool require_decreasing) {
  RequireObject(node, pointer);
  RejectUnknownKeys(node, pointer, {"breakpoints", "values"});
  const std::string x_pointer = Child(pointer, "breakpoints");
  const std::string y_pointer = Child(pointer, "values");
  const json& xs = Array(Require(node, "breakpoints", pointer), x_pointer);
  const json& ys = Array(Require(node, "values", pointer), y_pointer);
  std::vector<Rational> exact_x;
  std::vector<Rational> exact_y;
  std::vector<double> float_x;
  std::vector<double> float_y;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    exact_x.push_back(ExactNumber(xs[i], Child(x_pointer, i)));
    float_x.push_back(ToDouble(exact_x.back()));
  }
  for (std::size_t i = 0; i < ys.size(); ++i) {
    exact_y.push_back(ExactNumber(ys[i], Child(y_pointer, i)));
    float_y.push_back(ToDouble(exact_y.back()));
  }
  try {
    RationalPLFunction exact = RationalPLFunction::Make(std::move(exact_x), std::move(exact_y), require_decreasing);
    PLFunction function = PLFunction::Make(std::move(float_x), std::move(float_y), require_decreasing);
    return NamedFunction{name, std::move(function), std::move(exact)};
  } catch (const Error& e) {
    throw ConfigError(pointer, e.what());
  }
}

NANorm ParseNANorm(const json& node, const std::string& pointer) {
  RequireObject(node, pointer);
  RejectUnknownKeys(node, pointer, {"basis", "values"});
  const std::string values_pointer = Child(pointer, "values");
  const json& values_node = Array(Require(node, "values", pointer), values_pointer);
  std::vector<double> values;
  for (std::size_t i = 0; i < values_node.size(); ++i) {
    values.push_back(ToDouble(ExactNumber(values_node[i], Child(values_pointer, i))));
  }
  try {
    const json* basis = Find(node, "basis");
    if (basis == nullptr) return NANorm::FromWeights(std::move(values));
    Matrix matrix = ParseBasis(*basis, Child(pointer, "basis"), values.size());
    return NANorm::FromBasis(std::move(matrix), std::move(values));
  } catch (const Error& e) {
    throw ConfigError(pointer, e.what());
  }
}

DiscreteMeasure ParseDiscreteMeasure(const json& node, const std::string& pointer) {
  RequireObject(node, pointer);
  RejectUnknownKeys(node, pointer, {"atoms", "weights", "normalization"});
  std::vector<double> atoms = NumberList(Require(node, "atoms", pointer), Child(pointer, "atoms"));
  std::vector<double> weights = NumberList(Require(node, "weights", pointer), Child(pointer, "weights"));
  const std::string normalization_pointer = Child(pointer, "normalization");
  const std::string normalization = String(Require(node, "normalization", pointer), normalization_pointer);
  try {
    return DiscreteMeasure::Make(std::move(atoms), std::move(weights), ParseNormalization(normalization));
  } catch (const Error& e) {
    throw ConfigError(pointer, e.what());
  }
}

ExperimentConfig ParseConfig(const json& document) {
  RequireObject(document, "");
  RejectUnknownKeys(document, "",
                    {"model", "reference", "filtration", "functions", "pairs", "p_list", "k_list", "normalization",
                     "output", "allow_nondecreasing", "tolerance", "submult", "distortion", "ray"});
  ExperimentConfig config;
  config.document = document;

  if (const json* node = Find(document, "model")) config.model = ParseTorusMetric(*node, "/model");
  if (const json* node = Find(document, "reference")) config.reference = ParseTorusMetric(*node, "/reference");
  if (const json* node = Find(document, "filtration")) config.filtration = ParseFiltration(*node, "/filtration");

  if (const json* node = Find(document, "allow_nondecreasing")) {
    if (!node->is_boolean()) throw ConfigError("/allow_nondecreasing", "expected a boolean");
    config.allow_nondecreasing = node->get<bool>();
  }

  if (const json* node = Find(document, "functions")) {
    RequireObject(*node, "/functions");
    const auto [lower, upper] = config.filtration.Support();
    // Every filtration here is multiplicative on monomials, which is what
    // waives the decreasing requirement.
    const bool require_decreasing = !config.allow_nondecreasing;
    for (const auto& [name, spec] : node->items()) {
      const std::string pointer = Child("/functions", name);
      NamedFunction f = ParseFunction(name, spec, pointer, require_decreasing);
      if (f.function.lower() > lower || f.function.upper() < upper) {
        throw ConfigError(Child(pointer, "breakpoints"), "domain must contain the filtration support");
      }
      config.functions.push_back(std::move(f));
    }
  }

  if (const json* node = Find(document, "pairs")) {
    for (std::size_t i = 0; i < Array(*node, "/pairs").size(); ++i) {
      const std::string pointer = Child("/pairs", i);
      const json& pair = (*node)[i];
      if (!pair.is_array() || pair.size() != 2) throw ConfigError(pointer, "expected [name, name]");
      std::pair<std::string, std::string> names{String(pair[0], Child(pointer, 0)), String(pair[1], Child(pointer, 1))};
      for (const auto& [slot, name] : {std::pair{0, names.first}, std::pair{1, names.second}}) {
        const bool known = std::any_of(config.functions.begin(), config.functions.end(),
                                       [&](const NamedFunction& f) { return f.name == name; });
        if (!known) throw ConfigError(Child(pointer, static_cast<std::size_t>(slot)), "no function named '" + name + "'");
      }
      config.pairs.push_back(std::move(names));
    }
  } else {
    for (std::size_t i = 0; i < config.functions.size(); ++i) {
      for (std::size_t j = i + 1; j < config.functions.size(); ++j) {
        config.pairs.emplace_back(config.functions[i].name, config.functions[j].name);
      }
    }
  }

  if (const json* node = Find(document, "p_list")) {
    config.p_list.clear();
    for (std::size_t i = 0; i < Array(*node, "/p_list").size(); ++i) {
      config.p_list.push_back(Exponent((*node)[i], Child("/p_list", i)));
    }
    if (config.p_list.empty()) throw ConfigError("/p_list", "p_list must not be empty");
  }

  const json& k_node = Array(Require(document, "k_list", ""), "/k_list");
  if (k_node.empty()) throw ConfigError("/k_list", "k_list must not be empty");
  for (std::size_t i = 0; i < k_node.size(); ++i) {
    const std::string pointer = Child("/k_list", i);
    const int k = PositiveInteger(k_node[i], pointer);
    if (!config.k_list.empty() && k <= config.k_list.back()) throw ConfigError(pointer, "k_list must be increasing");
    config.k_list.push_back(k);
  }

  if (const json* node = Find(document, "normalization")) {
    const std::string text = String(*node, "/normalization");
    if (text != "raw" && text != "probability") throw ConfigError("/normalization", "expected raw or probability");
    config.normalization = ParseNormalization(text);
  }

  if (const json* node = Find(document, "output")) {
    RequireObject(*node, "/output");
    RejectUnknownKeys(*node, "/output", {"path", "format"});
    if (const json* path = Find(*node, "path")) config.output_path = String(*path, "/output/path");
    if (const json* format = Find(*node, "format")) config.output_format = ParseOutputFormat(String(*format, "/output/format"));
  }

  if (const json* node = Find(document, "tolerance")) {
    config.tolerance = Number(*node, "/tolerance");
    if (!(config.tolerance > 0.0)) throw ConfigError("/tolerance", "tolerance must be positive");
  }

  if (const json* node = Find(document, "submult")) {
    RequireObject(*node, "/submult");
    RejectUnknownKeys(*node, "/submult", {"max_total", "samples"});
    if (const json* v = Find(*node, "max_total")) config.submult_max_total = PositiveInteger(*v, "/submult/max_total");
    if (const json* v = Find(*node, "samples")) {
      config.submult_samples = Integer(*v, "/submult/samples");
      if (config.submult_samples < 0) throw ConfigError("/submult/samples", "expected a nonnegative integer");
    }
    if (config.submult_max_total < 2) throw ConfigError("/submult/max_total", "max_total must be at least 2");
  }

  if (const json* node = Find(document, "distortion")) {
    RequireObject(*node, "/distortion");
    RejectUnknownKeys(*node, "/distortion", {"trials", "max_dim"});
    if (const json* v = Find(*node, "trials")) config.distortion_trials = PositiveInteger(*v, "/distortion/trials");
    if (const json* v = Find(*node, "max_dim")) config.distortion_max_dim = PositiveInteger(*v, "/distortion/max_dim");
  }

  if (const json* node = Find(document, "ray")) {
    RequireObject(*node, "/ray");
    RejectUnknownKeys(*node, "/ray", {"t_list"});
    if (const json* v = Find(*node, "t_list")) {
      config.ray_t_list = NumberList(*v, "/ray/t_list");
      for (std::size_t i = 0; i < config.ray_t_list.size(); ++i) {
        if (!(config.ray_t_list[i] >= 0.0)) throw ConfigError(Child("/ray/t_list", i), "ray parameters must be >= 0");
      }
      if (config.ray_t_list.size() < 2) throw ConfigError("/ray/t_list", "need at least two ray parameters");
    }
  }
  return config;
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read configuration file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  json document;
  try {
    document = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return ParseConfig(document);
}

}  // namespace flatcone::tools
