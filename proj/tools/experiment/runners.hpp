#ifndef FLATCONE_TOOLS_RUNNERS_HPP_
#define FLATCONE_TOOLS_RUNNERS_HPP_

#include <cstdint>
#include <optional>
#include <string_view>

#include "experiment/config.hpp"
#include "experiment/result_table.hpp"

namespace flatcone::tools {

enum class Subcommand { kIsometry, kDh, kQuantise, kSubmult, kDistortion, kRay };

inline constexpr Subcommand kAllSubcommands[] = {Subcommand::kIsometry,   Subcommand::kDh,  Subcommand::kQuantise,
                                                 Subcommand::kSubmult,    Subcommand::kDistortion,
                                                 Subcommand::kRay};

std::string_view ToString(Subcommand subcommand);
std::string_view Describe(Subcommand subcommand);

// Runs one experiment. The table is sorted and depends only on the
// configuration and the seed. Throws ConfigError for settings the
// subcommand cannot use and flatcone::Error for numerical failures.
ResultTable Run(Subcommand subcommand, const ExperimentConfig& config, std::uint64_t seed);

// Per pair, degree and exponent: k^{-1} d_p of the modified L^2 norms
// against the L^p(sigma_k) distance of the functions.
ResultTable RunIsometry(const ExperimentConfig& config);
// sigma_k mass, Kolmogorov distances between successive degrees and to the
// uniform limit.
ResultTable RunDh(const ExperimentConfig& config);
// Fubini-Study weight convergence, Bernstein-Markov gap and, with a
// reference metric, quantised distances against the toric oracle.
ResultTable RunQuantise(const ExperimentConfig& config);
// Exact submultiplicativity margins of each modified filtration.
ResultTable RunSubmult(const ExperimentConfig& config, std::uint64_t seed);
// Envelope distortion bound on random Hermitian pairs.
ResultTable RunDistortion(const ExperimentConfig& config, std::uint64_t seed);
// Constant speed along f_t = -t x.
ResultTable RunRay(const ExperimentConfig& config);

}  // namespace flatcone::tools

#endif  // FLATCONE_TOOLS_RUNNERS_HPP_
