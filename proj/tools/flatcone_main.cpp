// flatcone <subcommand> --config <file.json> --out <path> [--seed N] [--format csv|jsonl]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 property violation (the table is still written).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "experiment/config.hpp"
#include "experiment/result_table.hpp"
#include "experiment/runners.hpp"
#include "flatcone/error.hpp"

namespace {

using namespace flatcone::tools;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitViolation = 4;

struct Options {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  std::string format;
};

bool WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
  out.close();
  return static_cast<bool>(out);
}

int Execute(Subcommand subcommand, const Options& options) {
  const std::string started = Timestamp();
  ExperimentConfig config;
  std::string out_path;
  OutputFormat format = OutputFormat::kCsv;
  try {
    config = LoadConfig(options.config_path);
    if (!options.out_path.empty()) {
      out_path = options.out_path;
    } else if (config.output_path) {
      out_path = *config.output_path;
    } else {
      throw ConfigError("/output/path", "no output path in the configuration and no --out");
    }
    if (!options.format.empty()) {
      format = ParseOutputFormat(options.format);
    } else if (config.output_format) {
      format = *config.output_format;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  ResultTable table;
  try {
    table = Run(subcommand, config, options.seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const flatcone::Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }

  if (!WriteFile(out_path, table.Render(format))) {
    std::cerr << "cannot write '" << out_path << "'\n";
    return kExitIo;
  }
  const auto violations = table.Violations(config.tolerance);
  nlohmann::ordered_json meta;
  meta["subcommand"] = ToString(subcommand);
  meta["config_hash"] = ConfigHash(config.document);
  meta["tool_version"] = kToolVersion;
  meta["seed"] = options.seed;
  meta["format"] = format == OutputFormat::kCsv ? "csv" : "jsonl";
  meta["rows"] = table.rows().size();
  meta["violations"] = violations.size();
  meta["started"] = started;
  meta["finished"] = Timestamp();
  if (!WriteFile(out_path + ".meta.json", meta.dump(2) + "\n")) {
    std::cerr << "cannot write '" << out_path << ".meta.json'\n";
    return kExitIo;
  }

  if (!violations.empty()) {
    for (const ResultRow* row : violations) {
      std::cerr << "violation: " << row->experiment << " k=" << row->k;
      if (row->p) std::cerr << " p=" << FormatNumber(*row->p);
      std::cerr << " lhs=" << FormatNumber(row->lhs) << " rhs=" << FormatNumber(row->rhs)
                << " gap=" << FormatNumber(row->gap) << '\n';
    }
    return kExitViolation;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flat cone experiments on the torus-invariant P^1 model"};
  app.require_subcommand(1);
  Options options;
  std::optional<Subcommand> chosen;
  for (Subcommand subcommand : kAllSubcommands) {
    CLI::App* sub = app.add_subcommand(std::string(ToString(subcommand)), std::string(Describe(subcommand)));
    sub->add_option("--config", options.config_path, "experiment configuration (JSON)")->required();
    sub->add_option("--out", options.out_path, "output table; <out>.meta.json receives the metadata");
    sub->add_option("--seed", options.seed, "seed for randomized sweeps");
    sub->add_option("--format", options.format, "csv (default) or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    sub->callback([&chosen, subcommand] { chosen = subcommand; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  return Execute(*chosen, options);
}
