#ifndef FLATCONE_MODEL_P1_HPP_
#define FLATCONE_MODEL_P1_HPP_

#include <span>
#include <vector>

#include "flatcone/graded.hpp"
#include "flatcone/nonarch.hpp"
#include "flatcone/norms.hpp"
#include "flatcone/rational.hpp"

// Torus-invariant model: X = P^1, L = O(1), V_k = polynomials of degree <= k
// in the affine coordinate z with the monomial basis z^0, ..., z^k. A metric
// is encoded by a convex potential u of t = log|z|^2 with |s|^2_{k phi} =
// |s(z)|^2 e^{-k u(t)}; the reference volume form is the probability
// Fubini-Study form e^t (1 + e^t)^{-2} dt.
namespace flatcone::p1 {

class TorusMetric {
 public:
  enum class Kind { kFubiniStudy, kPLPotential };

  // u(t) = log(1 + e^t) + offset.
  static TorusMetric FubiniStudy(double offset = 0.0);
  // Piecewise-linear u with kinks at `breakpoints` (strictly increasing) and
  // slopes s_0 <= ... <= s_m on the m + 1 pieces, s_0 = 0, s_m = 1, all in
  // [0, 1]; u = offset to the left of the first kink. Throws InvalidArgument.
  static TorusMetric PLPotential(std::vector<double> breakpoints, std::vector<double> slopes, double offset = 0.0);

  Kind kind() const { return kind_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& slopes() const { return slopes_; }
  double offset() const { return offset_; }

  double Potential(double t) const;
  // Right derivative u'(t+).
  double Slope(double t) const;
  // u*(x) = sup_t (x t - u(t)) for x in [0, 1], in closed form.
  double LegendreTransform(double x) const;

  // Adds c to the metric weight in the |s| e^{-k phi} convention, i.e.
  // u -> u + 2c; the L^2 norms of every section scale by e^{-kc}.
  TorusMetric ShiftedWeight(double c) const;

 private:
  TorusMetric(Kind kind, std::vector<double> breakpoints, std::vector<double> slopes, std::vector<double> knots,
              double offset)
      : kind_(kind), breakpoints_(std::move(breakpoints)), slopes_(std::move(slopes)),
        knot_values_(std::move(knots)), offset_(offset) {}

  Kind kind_;
  std::vector<double> breakpoints_;
  std::vector<double> slopes_;
  std::vector<double> knot_values_;  // u at each breakpoint
  double offset_;
};

struct QuadratureControl {
  double relative_tolerance = 1e-10;
  int max_depth = 15;
  // Integration stops where the log-integrand is this far below its peak
  // (e^{-40} < 1e-17).
  double log_tail_drop = 40.0;
};

// log G_ii for i = 0..k, G_ii = int e^{(i+1)t - k u(t)} (1 + e^t)^{-2} dt by
// adaptive Gauss-Kronrod quadrature. Throws QuadratureNonConvergent naming
// the offending (k, i).
std::vector<double> L2LogGramDiagonal(int k, const TorusMetric& metric, const QuadratureControl& control = {});

// The diagonal Hermitian norm with entries G_ii (off-diagonals vanish by
// torus invariance).
HermitianNorm L2Gram(int k, const TorusMetric& metric, const QuadratureControl& control = {});

// log ||z^i||_{k phi, inf} = (1/2) sup_t (i t - k u(t)).
double LogSupNormMonomial(int k, const TorusMetric& metric, int i);
double SupNormMonomial(int k, const TorusMetric& metric, int i);

// u_k(t) = k^{-1} log sum_i e^{i t} / G_ii. Throws InvalidArgument for a
// non-diagonal norm or k < 1.
double FsWeight(const HermitianNorm& norm, int k, double t);
// Same from log G_ii, which stays accurate for large k.
double FsWeightFromLogGram(std::span<const double> log_gram, int k, double t);

enum class FiltrationKind { kVanishingOrder, kWeighted };

// NA norm on the monomial basis with a_i = i, or a_i = weights[i].
NANorm StandardFiltration(int k, FiltrationKind kind, std::span<const double> weights = {});

// Graded versions (n = 1). Vanishing order and a_i = c i are multiplicative
// on monomials.
GradedNA VanishingOrderFiltration();
GradedNA LinearFiltration(double slope);
GradedNA TrivialFiltration();
ExactGradedNA ExactVanishingOrderFiltration();
ExactGradedNA ExactLinearFiltration(const Rational& slope);

// k -> (L^2 norm of the metric, monomial basis).
GradedHermitian L2Norms(const TorusMetric& metric, const QuadratureControl& control = {});

// k -> log sup norms of the monomials.
DiagonalLogNorms SupNormLogs(const TorusMetric& metric);

// Coefficient convolution V_m x V_n -> V_{m+n}; zero coefficients are skipped.
template <typename T>
std::vector<T> RingMultiply(std::span<const T> s, std::span<const T> t) {
  if (s.empty() || t.empty()) return {};
  std::vector<T> product(s.size() + t.size() - 1, T(0));
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == T(0)) continue;
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (t[j] == T(0)) continue;
      product[i + j] += s[i] * t[j];
    }
  }
  return product;
}

Vector RingMultiply(const Vector& s, const Vector& t);

RingProduct MonomialRing();
ExactRingProduct ExactMonomialRing();

struct QuantisationEstimate {
  std::vector<PerKRecord> per_k;  // k^{-1} d_p(L^2_k(phi), L^2_k(psi))
  double final_estimate;
};

// Per-degree quantised distances; successive minima are
// (1/2) log(G^psi_ii / G^phi_ii) since both Gram matrices are diagonal.
QuantisationEstimate MetricDistanceViaQuantisation(const TorusMetric& phi, const TorusMetric& psi, double p,
                                                   std::span<const int> k_list,
                                                   const QuadratureControl& control = {});

// Limit oracle (int_0^1 |phi*(x) - psi*(x)|^p dx)^{1/p}, where phi* = u*/2
// is the Legendre transform of the metric weight in log|z| coordinates.
double ToricDistance(const TorusMetric& phi, const TorusMetric& psi, double p);

}  // namespace flatcone::p1

#endif  // FLATCONE_MODEL_P1_HPP_
