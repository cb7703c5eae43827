#ifndef FLATCONE_NONARCH_HPP_
#define FLATCONE_NONARCH_HPP_

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "flatcone/norms.hpp"
#include "flatcone/rational.hpp"

namespace flatcone {

// Non-Archimedean norm ||sum c_i v_i|| = max_{c_i != 0} e^{-a_i} in a fixed
// orthogonal basis (v_i). Values a_i are on the log scale, so the filtration
// piece F^lambda is span{v_i : a_i >= lambda}.
class NANorm {
 public:
  // Coordinates with |c_i| <= kZeroThreshold * ||c||_inf count as zero.
  static constexpr double kZeroThreshold = 1e-11;

  // Throws SingularBasis, LengthMismatch, InvalidArgument (non-finite value).
  static NANorm FromBasis(Matrix basis, std::vector<double> values);
  // Orthogonal on the standard basis with a_i = weights[i].
  static NANorm FromWeights(std::vector<double> weights);
  static NANorm Trivial(int dim);

  int dim() const { return apartment_.dim(); }
  const Apartment& apartment() const { return apartment_; }
  const Matrix& basis() const { return apartment_.basis(); }
  const std::vector<double>& values() const { return values_; }
  double condition_number() const { return apartment_.condition_number(); }

  // ||w||^NA; zero for w = 0.
  double operator()(const Vector& w) const;
  // -log ||w||^NA = min a_i over the nonzero coordinates; +inf for w = 0.
  double LogValue(const Vector& w) const;

 private:
  NANorm(Apartment apartment, std::vector<double> values)
      : apartment_(std::move(apartment)), values_(std::move(values)) {}

  Apartment apartment_;
  std::vector<double> values_;
};

// The multiset {a_i}, sorted descending.
std::vector<double> JumpingNumbers(const NANorm& norm);

// Gauge norm of an apartment: the NA norm orthogonal on its basis with values a.
NANorm GaugeNorm(const Apartment& apartment, std::span<const double> a);

// Basis orthogonal for both norms: F's basis sorted by descending a_i, then
// modified Gram-Schmidt under `norm`, which keeps every partial span inside
// a filtration piece.
Apartment AdaptJointBasis(const HermitianNorm& norm, const NANorm& filtration);

// iota^1(N, F) for Hermitian N: RescaleInApartment(N, J, a') where J is the
// joint basis and a'_i = -log ||J_i||^NA is recomputed from J.
HermitianNorm EnvelopeHermitian(const HermitianNorm& norm, const NANorm& filtration);

using NormOracle = std::function<double(const Vector&)>;
// Writes w as a finite sum; the pieces must add up to w.
using DecompositionScheme = std::function<std::vector<Vector>(const Vector&)>;

// {one-term, split along the filtration's orthogonal basis}.
std::vector<DecompositionScheme> DefaultDecompositionSchemes(const NANorm& filtration);

// min over schemes of sum_i norm(w_i) * ||w_i||^NA. An upper bound for the
// envelope iota^1; throws EmptySchemeSet.
double EnvelopeUpperBound(const NormOracle& norm, const NANorm& filtration,
                          std::span<const DecompositionScheme> schemes, const Vector& w);

// Exact counterpart of NANorm for filtrations that are orthogonal on the
// standard (monomial) basis with rational values.
class ExactNANorm {
 public:
  explicit ExactNANorm(std::vector<Rational> values) : values_(std::move(values)) {}

  int dim() const { return static_cast<int>(values_.size()); }
  const std::vector<Rational>& values() const { return values_; }

  // min a_i over nonzero coordinates; nullopt for the zero vector.
  std::optional<Rational> LogValue(std::span<const Rational> coordinates) const;
  std::vector<Rational> JumpingNumbers() const;

  NANorm ToNANorm() const;

 private:
  std::vector<Rational> values_;
};

}  // namespace flatcone

#endif  // FLATCONE_NONARCH_HPP_
