#ifndef FLATCONE_NORMS_HPP_
#define FLATCONE_NORMS_HPP_

#include <complex>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace flatcone {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Tolerances shared by every module that works with Hermitian norms.
struct Tolerance {
  static constexpr double kSymmetry = 1e-12;
  static constexpr double kJointDiagonal = 1e-10;
  static constexpr double kDistance = 1e-9;
  // Relative gap under which generalized eigenvalues form one cluster.
  static constexpr double kCluster = 1e-8;
  static constexpr double kIllConditioned = 1e12;
};

// A Hermitian norm ||w|| = sqrt(w^* G w) on C^N, stored through its Gram
// matrix G in the ambient reference basis. Immutable once constructed.
class HermitianNorm {
 public:
  // Validates conjugate symmetry (1e-12 entrywise, relative) and positive
  // definiteness (Cholesky pivots > 0). Throws NotHermitian /
  // NotPositiveDefinite / InvalidArgument.
  static HermitianNorm FromGram(const Matrix& gram);
  static HermitianNorm FromDiagonal(std::span<const double> diagonal);
  static HermitianNorm Euclidean(int dim);

  int dim() const { return static_cast<int>(gram_.rows()); }
  const Matrix& gram() const { return gram_; }
  // Lower-triangular L with G = L L^*.
  const Matrix& cholesky() const { return lower_; }

  double operator()(const Vector& w) const;
  // Hermitian form <v, w> = v^* G w.
  Complex Inner(const Vector& v, const Vector& w) const;

  bool IsDiagonal() const;

  HermitianNorm Scaled(double factor) const;

 private:
  HermitianNorm(Matrix gram, Matrix lower) : gram_(std::move(gram)), lower_(std::move(lower)) {}

  Matrix gram_;
  Matrix lower_;
};

// A basis of C^N (columns) together with its inverse; the apartment is the
// set of Hermitian norms for which this basis is orthogonal.
class Apartment {
 public:
  // Throws SingularBasis when the basis is not invertible.
  static Apartment FromBasis(Matrix basis);
  static Apartment Standard(int dim);

  int dim() const { return static_cast<int>(basis_.cols()); }
  const Matrix& basis() const { return basis_; }
  const Matrix& inverse() const { return inverse_; }
  Vector column(int i) const { return basis_.col(i); }
  double condition_number() const { return condition_number_; }
  bool ill_conditioned() const { return condition_number_ > Tolerance::kIllConditioned; }

  // Gram matrix of the basis under `norm` is diagonal to 1e-10 (relative).
  bool IsOrthogonalFor(const HermitianNorm& norm) const;

 private:
  Apartment(Matrix basis, Matrix inverse, double condition_number)
      : basis_(std::move(basis)), inverse_(std::move(inverse)), condition_number_(condition_number) {}

  Matrix basis_;
  Matrix inverse_;
  double condition_number_;
};

// Successive minima lambda_i(N, N'), sorted descending.
struct RelativeSpectrum {
  std::vector<double> values;

  int dim() const { return static_cast<int>(values.size()); }
};

// Result of reducing the pencil (G', G) through the Cholesky factor of G.
// Columns of `basis` are G-orthonormal and diagonalize G' with entries `mu`
// (descending). `inverse` equals basis^* G.
struct JointDiagonalization {
  Matrix basis;
  Matrix inverse;
  std::vector<double> mu;
};

JointDiagonalization Diagonalize(const HermitianNorm& norm, const HermitianNorm& other);

RelativeSpectrum SuccessiveMinima(const HermitianNorm& norm, const HermitianNorm& other);

// (N^{-1} sum |lambda_i|^p)^{1/p}; max |lambda_i| for p = infinity.
double DpFromSpectrum(const RelativeSpectrum& spectrum, double p);
double DpDistance(const HermitianNorm& norm, const HermitianNorm& other, double p);

Apartment CommonOrthogonalBasis(const HermitianNorm& norm, const HermitianNorm& other);

HermitianNorm Geodesic(const HermitianNorm& norm, const HermitianNorm& other, double t);

double RelativeVolume(const HermitianNorm& norm, const HermitianNorm& other);

// Norm diagonal in a common orthogonal basis with max(||v_i||, ||v_i||').
HermitianNorm MaxNorm(const HermitianNorm& norm, const HermitianNorm& other);

// The norm in the apartment with ||v_i||_new = ||v_i|| e^{-a_i}. Throws
// NotInApartment if the basis is not orthogonal for `norm`.
HermitianNorm RescaleInApartment(const HermitianNorm& norm, const Apartment& apartment,
                                 std::span<const double> a);

// Validates p in [1, infinity]; throws InvalidArgument otherwise.
void CheckExponent(double p);

}  // namespace flatcone

#endif  // FLATCONE_NORMS_HPP_
