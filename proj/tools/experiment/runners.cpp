#include "experiment/runners.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "flatcone/error.hpp"
#include "flatcone/graded.hpp"
#include "flatcone/model_p1.hpp"
#include "flatcone/nonarch.hpp"
#include "flatcone/norms.hpp"
#include "flatcone/parallel.hpp"

namespace flatcone::tools {
namespace {

std::string Shortest(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, static_cast<std::size_t>(result.ptr - buffer));
}

// Runs one work item per listed degree on the pool and concatenates the
// buffered rows in ascending k.
template <typename Body>
std::vector<ResultRow> PerDegreeRows(const std::vector<int>& k_list, Body body) {
  std::vector<std::vector<ResultRow>> buffers(k_list.size());
  ParallelFor(k_list.size(), [&](std::size_t index) { buffers[index] = body(k_list[index]); });
  std::vector<ResultRow> rows;
  for (auto& buffer : buffers) {
    for (ResultRow& row : buffer) rows.push_back(std::move(row));
  }
  return rows;
}

// Turns "value along the degree list" rows into a nonincreasing check: rhs is
// the previous degree's lhs.
void ChainNonincreasing(std::vector<ResultRow>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].rhs = i == 0 ? rows[i].lhs : rows[i - 1].lhs;
    rows[i].gap = std::max(0.0, rows[i].lhs - rows[i].rhs);
    rows[i].checked = true;
  }
}

// x -> -t x on the filtration support.
PLFunction RayFunction(double t, std::pair<double, double> support) {
  return PLFunction::Affine(support.first, support.second, -t, 0.0);
}

std::string PairName(const std::string& prefix, const std::string& a, const std::string& b) {
  return prefix + ":" + a + "," + b;
}

using Rng = std::mt19937_64;

Matrix RandomMatrix(Rng& rng, int dim) {
  std::normal_distribution<double> normal;
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const double re = normal(rng);
      m(i, j) = Complex(re, normal(rng));
    }
  }
  return m;
}

HermitianNorm RandomHermitian(Rng& rng, int dim) {
  const Matrix a = RandomMatrix(rng, dim);
  std::uniform_real_distribution<double> log_scale(-1.5, 1.5);
  Matrix gram = a * a.adjoint() + 0.2 * Matrix::Identity(dim, dim);
  gram *= std::exp(log_scale(rng));
  return HermitianNorm::FromGram(0.5 * (gram + gram.adjoint()));
}

}  // namespace

std::string_view ToString(Subcommand subcommand) {
  switch (subcommand) {
    case Subcommand::kIsometry:
      return "isometry";
    case Subcommand::kDh:
      return "dh";
    case Subcommand::kQuantise:
      return "quantise";
    case Subcommand::kSubmult:
      return "submult";
    case Subcommand::kDistortion:
      return "distortion";
    case Subcommand::kRay:
      return "ray";
  }
  return "unknown";
}

std::string_view Describe(Subcommand subcommand) {
  switch (subcommand) {
    case Subcommand::kIsometry:
      return "per-degree isometry of the modification against L^p(sigma_k)";
    case Subcommand::kDh:
      return "Duistermaat-Heckman measures and their convergence";
    case Subcommand::kQuantise:
      return "Fubini-Study weights, Bernstein-Markov gap, quantised distances";
    case Subcommand::kSubmult:
      return "exact submultiplicativity of modified filtrations";
    case Subcommand::kDistortion:
      return "envelope distortion bound on random Hermitian pairs";
    case Subcommand::kRay:
      return "constant speed along the ray f_t = -t x";
  }
  return "";
}

ResultTable Run(Subcommand subcommand, const ExperimentConfig& config, std::uint64_t seed) {
  switch (subcommand) {
    case Subcommand::kIsometry:
      return RunIsometry(config);
    case Subcommand::kDh:
      return RunDh(config);
    case Subcommand::kQuantise:
      return RunQuantise(config);
    case Subcommand::kSubmult:
      return RunSubmult(config, seed);
    case Subcommand::kDistortion:
      return RunDistortion(config, seed);
    case Subcommand::kRay:
      return RunRay(config);
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown subcommand");
}

ResultTable RunIsometry(const ExperimentConfig& config) {
  if (config.pairs.empty()) throw ConfigError("/functions", "isometry needs two functions or explicit pairs");
  const GradedNA filtration = config.filtration.Build();
  const GradedHermitian base = p1::L2Norms(config.model);
  const auto [lower, upper] = config.filtration.Support();

  struct PairData {
    const NamedFunction* f;
    const NamedFunction* g;
    GradedHermitian mf;
    GradedHermitian mg;
  };
  std::vector<PairData> pairs;
  for (const auto& [a, b] : config.pairs) {
    const NamedFunction& f = config.function(a);
    const NamedFunction& g = config.function(b);
    pairs.push_back({&f, &g, ModifyHermitian(base, filtration, f.function), ModifyHermitian(base, filtration, g.function)});
  }

  ResultTable table;
  table.Append(PerDegreeRows(config.k_list, [&](int k) {
    std::vector<ResultRow> rows;
    const DiscreteMeasure sigma = DhMeasureAtK(filtration, k, Normalization::kProbability);
    for (const PairData& pair : pairs) {
      for (double p : config.p_list) {
        const double lhs = DpDistance(pair.mf.norm(k), pair.mg.norm(k), p) / k;
        const double rhs = LpDistance(pair.f->function, pair.g->function, sigma, p).value;
        rows.push_back({PairName("isometry", pair.f->name, pair.g->name), k, p, lhs, rhs, std::abs(lhs - rhs), true});
        if (upper > lower) {
          const double limit = LpDistanceUniform(pair.f->function, pair.g->function, lower, upper, p);
          rows.push_back(
              {PairName("isometry_limit", pair.f->name, pair.g->name), k, p, lhs, limit, std::abs(lhs - limit), false});
        }
      }
    }
    return rows;
  }));
  table.Sort();
  return table;
}

ResultTable RunDh(const ExperimentConfig& config) {
  const GradedNA filtration = config.filtration.Build();
  const auto [lower, upper] = config.filtration.Support();
  std::vector<DiscreteMeasure> measures;
  for (int k : config.k_list) measures.push_back(DhMeasureAtK(filtration, k, config.normalization));

  ResultTable table;
  std::vector<ResultRow> kolmogorov;
  for (std::size_t i = 0; i < config.k_list.size(); ++i) {
    const int k = config.k_list[i];
    const DiscreteMeasure& sigma = measures[i];
    // Total mass k^{-1} dim V_k tends to vol(L) = 1; probability measures have mass 1.
    table.Add({"dh_mass", k, std::nullopt, sigma.mass(), 1.0, std::abs(sigma.mass() - 1.0), false});
    if (upper > lower) {
      // k + 1 equal atoms i (upper - lower) / k sit at distance 1 / (k + 1)
      // from the uniform distribution function.
      const double distance = KolmogorovDistanceToUniform(sigma, lower, upper);
      const double closed_form = 1.0 / (k + 1.0);
      table.Add({"dh_uniform", k, std::nullopt, distance, closed_form, std::abs(distance - closed_form), true});
    }
    if (i > 0) {
      kolmogorov.push_back(
          {"dh_kolmogorov", k, std::nullopt, KolmogorovDistance(sigma, measures[i - 1]), 0.0, 0.0, false});
    }
  }
  ChainNonincreasing(kolmogorov);
  table.Append(std::move(kolmogorov));
  table.Sort();
  return table;
}

ResultTable RunQuantise(const ExperimentConfig& config) {
  const bool fubini_study = config.model.kind() == p1::TorusMetric::Kind::kFubiniStudy;
  ResultTable table;

  std::vector<ResultRow> weights = PerDegreeRows(config.k_list, [&](int k) {
    const std::vector<double> log_gram = p1::L2LogGramDiagonal(k, config.model);
    const double constant = std::log(k + 1.0) / k;
    double largest = -kInfinity;
    double worst = 0.0;
    for (int j = 0; j <= 400; ++j) {
      const double t = -20.0 + 0.1 * j;
      const double difference = p1::FsWeightFromLogGram(log_gram, k, t) - config.model.Potential(t);
      largest = std::max(largest, fubini_study ? difference : std::abs(difference));
      worst = std::max(worst, std::abs(difference - constant));
    }
    if (fubini_study) return std::vector<ResultRow>{{"fs_weight", k, std::nullopt, largest, constant, worst, true}};
    return std::vector<ResultRow>{{"fs_weight", k, std::nullopt, largest, 0.0, 0.0, false}};
  });
  if (!fubini_study) ChainNonincreasing(weights);
  table.Append(std::move(weights));

  const GradedHermitian l2 = p1::L2Norms(config.model);
  for (const PerKRecord& record : BernsteinMarkovGap(l2, p1::SupNormLogs(config.model), config.k_list)) {
    table.Add({"bernstein_markov", record.k, std::nullopt, record.value, 0.0, record.value, false});
  }

  if (config.reference) {
    for (double p : config.p_list) {
      const double oracle = p1::ToricDistance(config.model, *config.reference, p);
      const p1::QuantisationEstimate estimate =
          p1::MetricDistanceViaQuantisation(config.model, *config.reference, p, config.k_list);
      for (const PerKRecord& record : estimate.per_k) {
        table.Add({"toric_distance", record.k, p, record.value, oracle, std::abs(record.value - oracle), false});
      }
    }
  }
  table.Sort();
  return table;
}

ResultTable RunSubmult(const ExperimentConfig& config, std::uint64_t seed) {
  if (config.functions.empty()) throw ConfigError("/functions", "submult needs at least one function");
  const ExactGradedNA filtration = config.filtration.BuildExact();
  std::vector<ResultRow> rows(config.functions.size());
  ParallelFor(config.functions.size(), [&](std::size_t index) {
    const NamedFunction& f = config.functions[index];
    const ExactGradedNA modified = ModifyNA(filtration, f.exact, config.allow_nondecreasing);
    const ExactSubmultiplicativityReport report = CheckSubmultiplicativeUpTo(
        modified, p1::ExactMonomialRing(), config.submult_max_total, config.submult_samples, seed + index);
    const double margin = report.any_checked ? ToDouble(report.worst_margin) : 0.0;
    ResultRow row{"submult:" + f.name, config.submult_max_total, std::nullopt, margin, 0.0, std::max(0.0, -margin), true};
    row.failed = !report.holds();
    rows[index] = std::move(row);
  });
  ResultTable table;
  table.Append(std::move(rows));
  table.Sort();
  return table;
}

ResultTable RunDistortion(const ExperimentConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  ResultTable table;
  for (int trial = 0; trial < config.distortion_trials; ++trial) {
    const int dim = 1 + trial % config.distortion_max_dim;
    const HermitianNorm n = RandomHermitian(rng, dim);
    const HermitianNorm other = RandomHermitian(rng, dim);
    const Apartment apartment = CommonOrthogonalBasis(n, RandomHermitian(rng, dim));
    std::uniform_real_distribution<double> uniform(-3.0, 3.0);
    std::vector<double> a(static_cast<std::size_t>(dim));
    for (double& x : a) x = uniform(rng);
    const HermitianNorm left = RescaleInApartment(n, apartment, a);
    const HermitianNorm right = EnvelopeHermitian(other, GaugeNorm(apartment, a));
    const double bound = DpDistance(n, other, kInfinity) + std::log(static_cast<double>(dim));
    for (double p : config.p_list) {
      const double lhs = DpDistance(left, right, p);
      table.Add({"distortion", trial, p, lhs, bound, std::max(0.0, lhs - bound), true});
    }
  }
  table.Sort();
  return table;
}

ResultTable RunRay(const ExperimentConfig& config) {
  const GradedNA filtration = config.filtration.Build();
  const GradedHermitian base = p1::L2Norms(config.model);
  const auto support = config.filtration.Support();
  std::vector<double> ts = config.ray_t_list;
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  std::vector<GradedHermitian> rays;
  for (double t : ts) rays.push_back(ModifyHermitian(base, filtration, RayFunction(t, support)));
  const PLFunction identity = RayFunction(-1.0, support);
  const PLFunction zero = RayFunction(0.0, support);

  ResultTable table;
  table.Append(PerDegreeRows(config.k_list, [&](int k) {
    std::vector<ResultRow> rows;
    const DiscreteMeasure sigma = DhMeasureAtK(filtration, k, Normalization::kProbability);
    for (double p : config.p_list) {
      const double speed = LpDistance(identity, zero, sigma, p).value;
      for (std::size_t i = 0; i < ts.size(); ++i) {
        for (std::size_t j = i + 1; j < ts.size(); ++j) {
          const double lhs = DpDistance(rays[i].norm(k), rays[j].norm(k), p) / k;
          const double rhs = (ts[j] - ts[i]) * speed;
          rows.push_back({"ray:" + Shortest(ts[i]) + "," + Shortest(ts[j]), k, p, lhs, rhs, std::abs(lhs - rhs), true});
        }
      }
    }
    return rows;
  }));
  table.Sort();
  return table;
}

}  // namespace flatcone::tools
