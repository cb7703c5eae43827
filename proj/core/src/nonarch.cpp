#include "flatcone/nonarch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "flatcone/error.hpp"

namespace flatcone {

NANorm NANorm::FromBasis(Matrix basis, std::vector<double> values) {
  if (static_cast<Eigen::Index>(values.size()) != basis.cols()) {
    throw Error(ErrorKind::kLengthMismatch, "one value is needed per basis vector");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kInvalidArgument, "filtration values must be finite");
  }
  return NANorm(Apartment::FromBasis(std::move(basis)), std::move(values));
}

NANorm NANorm::FromWeights(std::vector<double> weights) {
  const auto n = static_cast<Eigen::Index>(weights.size());
  return FromBasis(Matrix::Identity(n, n), std::move(weights));
}

NANorm NANorm::Trivial(int dim) { return FromWeights(std::vector<double>(static_cast<std::size_t>(dim), 0.0)); }

double NANorm::LogValue(const Vector& w) const {
  if (w.size() != dim()) throw Error(ErrorKind::kLengthMismatch, "vector length does not match norm dimension");
  const Vector coords = apartment_.inverse() * w;
  const double scale = coords.cwiseAbs().maxCoeff();
  if (scale == 0.0) return kInfinity;
  double result = kInfinity;
  for (Eigen::Index i = 0; i < coords.size(); ++i) {
    if (std::abs(coords(i)) > kZeroThreshold * scale) {
      result = std::min(result, values_[static_cast<std::size_t>(i)]);
    }
  }
  return result;
}

double NANorm::operator()(const Vector& w) const {
  const double log_value = LogValue(w);
  return std::isinf(log_value) ? 0.0 : std::exp(-log_value);
}

std::vector<double> JumpingNumbers(const NANorm& norm) {
  std::vector<double> values = norm.values();
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

NANorm GaugeNorm(const Apartment& apartment, std::span<const double> a) {
  return NANorm::FromBasis(apartment.basis(), std::vector<double>(a.begin(), a.end()));
}

Apartment AdaptJointBasis(const HermitianNorm& norm, const NANorm& filtration) {
  if (norm.dim() != filtration.dim()) {
    throw Error(ErrorKind::kDimensionMismatch, "Hermitian and non-Archimedean norms differ in dimension");
  }
  const int n = norm.dim();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const auto& values = filtration.values();
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return values[static_cast<std::size_t>(i)] > values[static_cast<std::size_t>(j)];
  });

  Matrix joint(n, n);
  for (int j = 0; j < n; ++j) {
    Vector v = filtration.basis().col(order[static_cast<std::size_t>(j)]);
    // Two passes of modified Gram-Schmidt keep the Gram matrix diagonal to
    // working precision even for badly scaled inputs.
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < j; ++i) {
        const Vector u = joint.col(i);
        v -= norm.Inner(u, v) * u;
      }
    }
    joint.col(j) = v / norm(v);
  }
  return Apartment::FromBasis(std::move(joint));
}

HermitianNorm EnvelopeHermitian(const HermitianNorm& norm, const NANorm& filtration) {
  const Apartment joint = AdaptJointBasis(norm, filtration);
  std::vector<double> a(static_cast<std::size_t>(norm.dim()));
  for (int i = 0; i < norm.dim(); ++i) a[static_cast<std::size_t>(i)] = filtration.LogValue(joint.column(i));
  return RescaleInApartment(norm, joint, a);
}

std::vector<DecompositionScheme> DefaultDecompositionSchemes(const NANorm& filtration) {
  std::vector<DecompositionScheme> schemes;
  schemes.emplace_back([](const Vector& w) { return std::vector<Vector>{w}; });
  schemes.emplace_back([filtration](const Vector& w) {
    const Vector coords = filtration.apartment().inverse() * w;
    std::vector<Vector> pieces;
    for (Eigen::Index i = 0; i < coords.size(); ++i) {
      if (coords(i) != Complex(0.0)) pieces.emplace_back(coords(i) * filtration.basis().col(i));
    }
    if (pieces.empty()) pieces.push_back(w);
    return pieces;
  });
  return schemes;
}

double EnvelopeUpperBound(const NormOracle& norm, const NANorm& filtration,
                          std::span<const DecompositionScheme> schemes, const Vector& w) {
  if (schemes.empty()) throw Error(ErrorKind::kEmptySchemeSet, "at least one decomposition scheme is required");
  double best = kInfinity;
  for (const auto& scheme : schemes) {
    double total = 0.0;
    for (const Vector& piece : scheme(w)) total += norm(piece) * filtration(piece);
    best = std::min(best, total);
  }
  return best;
}

std::optional<Rational> ExactNANorm::LogValue(std::span<const Rational> coordinates) const {
  if (static_cast<int>(coordinates.size()) != dim()) {
    throw Error(ErrorKind::kLengthMismatch, "coordinate vector length does not match norm dimension");
  }
  std::optional<Rational> result;
  for (std::size_t i = 0; i < coordinates.size(); ++i) {
    if (coordinates[i] == 0) continue;
    if (!result || values_[i] < *result) result = values_[i];
  }
  return result;
}

std::vector<Rational> ExactNANorm::JumpingNumbers() const {
  std::vector<Rational> values = values_;
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

NANorm ExactNANorm::ToNANorm() const {
  std::vector<double> weights;
  weights.reserve(values_.size());
  for (const auto& v : values_) weights.push_back(ToDouble(v));
  return NANorm::FromWeights(std::move(weights));
}

}  // namespace flatcone
