#include "flatcone/norms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "flatcone/error.hpp"

namespace flatcone {
namespace {

void CheckSameDim(const HermitianNorm& a, const HermitianNorm& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "norms of dimension " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
  }
}

Matrix Symmetrized(const Matrix& m) { return (m + m.adjoint()) / 2.0; }

// G V D V^* G, i.e. the Gram matrix of the norm that is diagonal in the
// G-orthonormal basis V with squared basis-vector norms D.
HermitianNorm FromJointDiagonal(const HermitianNorm& norm, const JointDiagonalization& joint,
                                const Eigen::VectorXd& squared_norms) {
  const Matrix left = norm.gram() * joint.basis;
  const Matrix gram = left * squared_norms.cast<Complex>().asDiagonal() * left.adjoint();
  return HermitianNorm::FromGram(Symmetrized(gram));
}

}  // namespace

void CheckExponent(double p) {
  if (!(p >= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "exponent p must lie in [1, inf], got " + std::to_string(p));
  }
}

HermitianNorm HermitianNorm::FromGram(const Matrix& gram) {
  if (gram.rows() != gram.cols() || gram.rows() == 0) {
    throw Error(ErrorKind::kInvalidArgument, "Gram matrix must be square and non-empty");
  }
  const Eigen::Index n = gram.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const Complex a = gram(i, j);
      const Complex b = std::conj(gram(j, i));
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
        throw Error(ErrorKind::kInvalidArgument, "Gram matrix has non-finite entries");
      }
      const double scale = std::max({std::abs(a), std::abs(b),
                                     std::sqrt(std::abs(gram(i, i)) * std::abs(gram(j, j)))});
      if (std::abs(a - b) > Tolerance::kSymmetry * scale) {
        throw Error(ErrorKind::kNotHermitian,
                    "entries (" + std::to_string(i) + "," + std::to_string(j) + ") break conjugate symmetry");
      }
    }
  }
  Matrix symmetric = Symmetrized(gram);
  Eigen::LLT<Matrix> llt(symmetric);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::kNotPositiveDefinite, "Cholesky factorization failed");
  }
  Matrix lower = llt.matrixL();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(lower(i, i).real() > 0.0)) {
      throw Error(ErrorKind::kNotPositiveDefinite, "Cholesky pivot " + std::to_string(i) + " is not positive");
    }
  }
  return HermitianNorm(std::move(symmetric), std::move(lower));
}

HermitianNorm HermitianNorm::FromDiagonal(std::span<const double> diagonal) {
  Matrix gram = Matrix::Zero(static_cast<Eigen::Index>(diagonal.size()), static_cast<Eigen::Index>(diagonal.size()));
  for (std::size_t i = 0; i < diagonal.size(); ++i) gram(i, i) = diagonal[i];
  return FromGram(gram);
}

HermitianNorm HermitianNorm::Euclidean(int dim) { return FromGram(Matrix::Identity(dim, dim)); }

double HermitianNorm::operator()(const Vector& w) const {
  if (w.size() != gram_.rows()) {
    throw Error(ErrorKind::kLengthMismatch, "vector length does not match norm dimension");
  }
  // ||L^* w||_2 avoids cancellation in w^* G w.
  return (lower_.adjoint() * w).norm();
}

Complex HermitianNorm::Inner(const Vector& v, const Vector& w) const { return v.dot(gram_ * w); }

bool HermitianNorm::IsDiagonal() const {
  for (Eigen::Index i = 0; i < gram_.rows(); ++i) {
    for (Eigen::Index j = 0; j < gram_.cols(); ++j) {
      if (i != j && gram_(i, j) != Complex(0.0)) return false;
    }
  }
  return true;
}

HermitianNorm HermitianNorm::Scaled(double factor) const {
  if (!(factor > 0.0)) throw Error(ErrorKind::kInvalidArgument, "scale factor must be positive");
  return HermitianNorm(gram_ * (factor * factor), lower_ * factor);
}

Apartment Apartment::FromBasis(Matrix basis) {
  if (basis.rows() != basis.cols() || basis.rows() == 0) {
    throw Error(ErrorKind::kSingularBasis, "basis matrix must be square and non-empty");
  }
  // Columns are equilibrated first: invertibility and the reported condition
  // number should not depend on the lengths of the basis vectors, which can
  // span many orders of magnitude (e.g. orthonormal bases for tiny Grams).
  Eigen::VectorXd column_scale(basis.cols());
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    const double length = basis.col(j).norm();
    if (!(length > 0.0) || !std::isfinite(length)) {
      throw Error(ErrorKind::kSingularBasis, "basis vector " + std::to_string(j) + " is zero or non-finite");
    }
    column_scale(j) = 1.0 / length;
  }
  const Matrix equilibrated = basis * column_scale.cast<Complex>().asDiagonal();
  Eigen::FullPivLU<Matrix> lu(equilibrated);
  if (!lu.isInvertible()) throw Error(ErrorKind::kSingularBasis, "basis vectors are linearly dependent");
  const double rcond = lu.rcond();
  if (!(rcond > 0.0)) throw Error(ErrorKind::kSingularBasis, "basis is numerically singular");
  Matrix inverse = column_scale.cast<Complex>().asDiagonal() * lu.inverse();
  return Apartment(std::move(basis), std::move(inverse), 1.0 / rcond);
}

Apartment Apartment::Standard(int dim) { return FromBasis(Matrix::Identity(dim, dim)); }

bool Apartment::IsOrthogonalFor(const HermitianNorm& norm) const {
  if (norm.dim() != dim()) return false;
  const Matrix gram = basis_.adjoint() * norm.gram() * basis_;
  for (Eigen::Index i = 0; i < gram.rows(); ++i) {
    for (Eigen::Index j = 0; j < gram.cols(); ++j) {
      if (i == j) continue;
      const double scale = std::sqrt(std::abs(gram(i, i)) * std::abs(gram(j, j)));
      if (std::abs(gram(i, j)) > Tolerance::kJointDiagonal * scale) return false;
    }
  }
  return true;
}

JointDiagonalization Diagonalize(const HermitianNorm& norm, const HermitianNorm& other) {
  CheckSameDim(norm, other);
  const Eigen::Index n = norm.dim();
  const auto lower = norm.cholesky().triangularView<Eigen::Lower>();
  // C = L^{-1} G' L^{-*}, using that G' is Hermitian.
  const Matrix half = lower.solve(other.gram());
  const Matrix reduced = Symmetrized(lower.solve(Matrix(half.adjoint())));
  Eigen::SelfAdjointEigenSolver<Matrix> solver(reduced);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::kNotPositiveDefinite, "Hermitian eigensolver did not converge");
  }

  JointDiagonalization joint;
  joint.mu.resize(static_cast<std::size_t>(n));
  Matrix eigenvectors(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    // Eigen sorts ascending; we keep successive minima descending.
    const Eigen::Index src = n - 1 - j;
    joint.mu[static_cast<std::size_t>(j)] = solver.eigenvalues()(src);
    eigenvectors.col(j) = solver.eigenvectors().col(src);
  }
  for (double mu : joint.mu) {
    if (!(mu > 0.0)) throw Error(ErrorKind::kNotPositiveDefinite, "non-positive generalized eigenvalue");
  }
  joint.basis = norm.cholesky().adjoint().triangularView<Eigen::Upper>().solve(eigenvectors);

  // Re-orthonormalize each cluster of (numerically) repeated eigenvalues
  // under the first norm with modified Gram-Schmidt.
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n) {
      const double a = joint.mu[static_cast<std::size_t>(end - 1)];
      const double b = joint.mu[static_cast<std::size_t>(end)];
      if (std::abs(a - b) > Tolerance::kCluster * std::max(std::abs(a), std::abs(b))) break;
      ++end;
    }
    for (Eigen::Index j = start; j < end; ++j) {
      Vector v = joint.basis.col(j);
      for (Eigen::Index i = start; i < j; ++i) {
        const Vector u = joint.basis.col(i);
        v -= norm.Inner(u, v) * u;
      }
      joint.basis.col(j) = v / norm(v);
    }
    start = end;
  }
  joint.inverse = joint.basis.adjoint() * norm.gram();
  return joint;
}

RelativeSpectrum SuccessiveMinima(const HermitianNorm& norm, const HermitianNorm& other) {
  const JointDiagonalization joint = Diagonalize(norm, other);
  RelativeSpectrum spectrum;
  spectrum.values.reserve(joint.mu.size());
  for (double mu : joint.mu) spectrum.values.push_back(0.5 * std::log(mu));
  return spectrum;
}

double DpFromSpectrum(const RelativeSpectrum& spectrum, double p) {
  CheckExponent(p);
  if (spectrum.values.empty()) return 0.0;
  if (std::isinf(p)) {
    double worst = 0.0;
    for (double v : spectrum.values) worst = std::max(worst, std::abs(v));
    return worst;
  }
  double sum = 0.0;
  for (double v : spectrum.values) sum += std::pow(std::abs(v), p);
  return std::pow(sum / static_cast<double>(spectrum.values.size()), 1.0 / p);
}

double DpDistance(const HermitianNorm& norm, const HermitianNorm& other, double p) {
  CheckExponent(p);
  return DpFromSpectrum(SuccessiveMinima(norm, other), p);
}

Apartment CommonOrthogonalBasis(const HermitianNorm& norm, const HermitianNorm& other) {
  return Apartment::FromBasis(Diagonalize(norm, other).basis);
}

HermitianNorm Geodesic(const HermitianNorm& norm, const HermitianNorm& other, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "geodesic parameter must lie in [0, 1]");
  }
  CheckSameDim(norm, other);
  if (t == 0.0) return norm;
  if (t == 1.0) return other;
  const JointDiagonalization joint = Diagonalize(norm, other);
  Eigen::VectorXd squared(norm.dim());
  for (int i = 0; i < norm.dim(); ++i) squared(i) = std::pow(joint.mu[static_cast<std::size_t>(i)], t);
  return FromJointDiagonal(norm, joint, squared);
}

double RelativeVolume(const HermitianNorm& norm, const HermitianNorm& other) {
  const RelativeSpectrum spectrum = SuccessiveMinima(norm, other);
  double sum = 0.0;
  for (double v : spectrum.values) sum += v;
  return sum / static_cast<double>(spectrum.values.size());
}

HermitianNorm MaxNorm(const HermitianNorm& norm, const HermitianNorm& other) {
  const JointDiagonalization joint = Diagonalize(norm, other);
  Eigen::VectorXd squared(norm.dim());
  for (int i = 0; i < norm.dim(); ++i) squared(i) = std::max(1.0, joint.mu[static_cast<std::size_t>(i)]);
  return FromJointDiagonal(norm, joint, squared);
}

HermitianNorm RescaleInApartment(const HermitianNorm& norm, const Apartment& apartment,
                                 std::span<const double> a) {
  if (apartment.dim() != norm.dim() || static_cast<int>(a.size()) != norm.dim()) {
    throw Error(ErrorKind::kDimensionMismatch, "apartment, norm and rescaling vector must share a dimension");
  }
  if (!apartment.IsOrthogonalFor(norm)) {
    throw Error(ErrorKind::kNotInApartment, "basis is not orthogonal for the norm");
  }
  const Matrix& basis = apartment.basis();
  Eigen::VectorXd squared(norm.dim());
  for (int i = 0; i < norm.dim(); ++i) {
    const double norm_sq = norm.Inner(basis.col(i), basis.col(i)).real();
    squared(i) = norm_sq * std::exp(-2.0 * a[static_cast<std::size_t>(i)]);
  }
  const Matrix& inverse = apartment.inverse();
  const Matrix gram = inverse.adjoint() * squared.cast<Complex>().asDiagonal() * inverse;
  return HermitianNorm::FromGram(Symmetrized(gram));
}

}  // namespace flatcone
