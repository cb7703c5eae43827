#ifndef FLATCONE_GRADED_HPP_
#define FLATCONE_GRADED_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "flatcone/convex.hpp"
#include "flatcone/nonarch.hpp"
#include "flatcone/norms.hpp"
#include "flatcone/parallel.hpp"
#include "flatcone/rational.hpp"

namespace flatcone {

// Degree-k piece of a graded Hermitian norm: the norm on V_k and a
// distinguished basis of V_k.
struct HermitianPiece {
  HermitianNorm norm;
  Apartment basis;
};

// k -> (norm on V_k, distinguished basis). Generation is memoized per degree.
class GradedHermitian {
 public:
  using Generator = std::function<HermitianPiece(int)>;

  explicit GradedHermitian(Generator generator) : memo_(std::move(generator)) {}

  const HermitianPiece& piece(int k) const { return memo_(k); }
  const HermitianNorm& norm(int k) const { return memo_(k).norm; }
  int dim(int k) const { return norm(k).dim(); }

  // Norms multiplied by e^{kt} (Gram matrices by e^{2kt}); successive minima
  // against the original are all k t.
  GradedHermitian Rescaled(double t) const;

 private:
  DegreeMemo<HermitianPiece> memo_;
};

// k -> non-Archimedean norm on V_k. `dim_exponent` is n in the k^{-n} mass
// normalization; `multiplicative_on_basis` marks filtrations for which the
// product of distinguished basis vectors is again (a multiple of) a basis
// vector with added values, which waives the "decreasing" requirement.
class GradedNA {
 public:
  using Generator = std::function<NANorm(int)>;

  GradedNA(Generator generator, int dim_exponent, bool multiplicative_on_basis = false)
      : memo_(std::move(generator)), dim_exponent_(dim_exponent), multiplicative_(multiplicative_on_basis) {}

  const NANorm& norm(int k) const { return memo_(k); }
  int dim(int k) const { return norm(k).dim(); }
  int dim_exponent() const { return dim_exponent_; }
  bool multiplicative_on_basis() const { return multiplicative_; }

 private:
  DegreeMemo<NANorm> memo_;
  int dim_exponent_;
  bool multiplicative_;
};

// Rational filtrations orthogonal on the monomial basis of every V_k.
class ExactGradedNA {
 public:
  using Generator = std::function<ExactNANorm(int)>;

  ExactGradedNA(Generator generator, int dim_exponent, bool multiplicative_on_basis = false)
      : memo_(std::move(generator)), dim_exponent_(dim_exponent), multiplicative_(multiplicative_on_basis) {}

  const ExactNANorm& norm(int k) const { return memo_(k); }
  int dim_exponent() const { return dim_exponent_; }
  bool multiplicative_on_basis() const { return multiplicative_; }

  GradedNA ToGradedNA() const;

 private:
  DegreeMemo<ExactNANorm> memo_;
  int dim_exponent_;
  bool multiplicative_;
};

// One entry of a per-degree sequence. `diagnostic` is the successive
// difference value_k - value_{previous k} (NaN for the first degree).
struct PerKRecord {
  int k;
  double value;
  double diagnostic;
};

// Throws InvalidArgument unless the list is nonempty, strictly increasing
// and positive.
void CheckDegreeList(std::span<const int> k_list);

// sigma_k: atoms a_i / k with weights k^{-n} (raw) or 1 / N_k (probability).
DiscreteMeasure DhMeasureAtK(const GradedNA& filtration, int k, Normalization normalization);

struct DhLimitEstimate {
  DiscreteMeasure at_max_k;
  // Kolmogorov distance between sigma_k and the previous listed degree.
  std::vector<PerKRecord> kolmogorov;
};

DhLimitEstimate EstimateDhLimit(const GradedNA& filtration, std::span<const int> k_list);

struct SubmultiplicativityReport {
  // min over checked pairs of log(||s|| ||t|| / ||s t||); >= 0 iff no violation.
  double worst_margin = kInfinity;
  long pairs_checked = 0;
  std::string worst_pair;

  bool holds(double tolerance = 0.0) const { return worst_margin >= -tolerance; }
};

struct ExactSubmultiplicativityReport {
  Rational worst_margin;
  bool any_checked = false;
  long pairs_checked = 0;
  std::string worst_pair;

  bool holds() const { return !any_checked || worst_margin >= 0; }
};

// Section-ring product V_m x V_n -> V_{m+n} in ambient coordinates.
using RingProduct = std::function<Vector(const Vector&, const Vector&)>;
using ExactRingProduct = std::function<std::vector<Rational>(std::span<const Rational>, std::span<const Rational>)>;

// Checks ||s t||_{m+n} <= ||s||_m ||t||_n for every pair of distinguished
// basis vectors and `samples` random sections (seeded).
SubmultiplicativityReport CheckSubmultiplicativeNA(const GradedNA& filtration, const RingProduct& ring, int m, int n,
                                                   int samples, std::uint64_t seed);
ExactSubmultiplicativityReport CheckSubmultiplicativeNA(const ExactGradedNA& filtration,
                                                        const ExactRingProduct& ring, int m, int n, int samples,
                                                        std::uint64_t seed);

// All (m, n) with m, n >= 1 and m + n <= max_total, basis pairs for each,
// plus `samples` random section pairs spread over the degree pairs.
ExactSubmultiplicativityReport CheckSubmultiplicativeUpTo(const ExactGradedNA& filtration,
                                                          const ExactRingProduct& ring, int max_total, int samples,
                                                          std::uint64_t seed);
SubmultiplicativityReport CheckSubmultiplicativeUpTo(const GradedNA& filtration, const RingProduct& ring,
                                                     int max_total, int samples, std::uint64_t seed);

// max_k max_i |a_{i,k}| / k over the orthogonal bases: a boundedness constant.
double CheckBoundedNA(const GradedNA& filtration, std::span<const int> k_list);

// Same bases, values a'_{i,k} = a_{i,k} - k f(a_{i,k} / k). Throws
// NotDecreasing unless f is decreasing or the filtration is multiplicative on
// its basis and allow_nondecreasing is set.
GradedNA ModifyNA(const GradedNA& filtration, const PLFunction& f, bool allow_nondecreasing = false);
ExactGradedNA ModifyNA(const ExactGradedNA& filtration, const RationalPLFunction& f,
                       bool allow_nondecreasing = false);

// Degree-k modification: the Hermitian norm diagonal in the joint basis J of
// (norm, filtration) with ||J_i||_new = ||J_i|| e^{k f(a_i / k)}.
HermitianPiece ModifyHermitianAt(const HermitianNorm& norm, const NANorm& filtration, const PLFunction& f, int k);
GradedHermitian ModifyHermitian(const GradedHermitian& norms, const GradedNA& filtration, const PLFunction& f);

// k^{-1} d_p(A_k, B_k) per degree.
std::vector<PerKRecord> AsymptoticDp(const GradedHermitian& a, const GradedHermitian& b, double p,
                                     std::span<const int> k_list);

struct VolumeRecord {
  int k;
  double value;       // k^{-1} vol(A_k, B_k)
  double diagnostic;  // successive difference
  // k^{-1} |d_1(A,B) - d_1(A, max(A,B)) - d_1(B, max(A,B))|
  double max_identity_residual;
};

std::vector<VolumeRecord> AsymptoticVol(const GradedHermitian& a, const GradedHermitian& b,
                                        std::span<const int> k_list);

// k^{-1} d_inf(A_k, B_k) per degree.
std::vector<PerKRecord> BernsteinMarkovGap(const GradedHermitian& a, const GradedHermitian& b,
                                           std::span<const int> k_list);

// k -> log-norms of the distinguished (monomial) basis vectors under a
// possibly non-Hermitian norm that is diagonal on that basis.
using DiagonalLogNorms = std::function<std::vector<double>(int)>;

// Mixed version: requires A_k diagonal on the standard basis; then
// d_inf = max_i |log ||e_i||_A - log ||e_i||_B|. Throws NonDiagonalPair.
std::vector<PerKRecord> BernsteinMarkovGap(const GradedHermitian& a, const DiagonalLogNorms& b,
                                           std::span<const int> k_list);

}  // namespace flatcone

#endif  // FLATCONE_GRADED_HPP_
