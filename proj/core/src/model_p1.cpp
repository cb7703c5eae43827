#include "flatcone/model_p1.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "flatcone/error.hpp"
#include "flatcone/parallel.hpp"

namespace flatcone::p1 {
namespace {

double Softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

double Logistic(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// x log x with 0 log 0 = 0.
double XLogX(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void CheckDegree(int k) {
  if (k < 0) throw Error(ErrorKind::kInvalidArgument, "degree must be >= 0");
}

// Log of the L^2 integrand for z^i in degree k: (i+1)t - k u(t) - 2 log(1+e^t).
struct LogIntegrand {
  const TorusMetric& metric;
  int k;
  int i;

  double operator()(double t) const { return (i + 1) * t - k * metric.Potential(t) - 2.0 * Softplus(t); }
  double Derivative(double t) const { return (i + 1) - k * metric.Slope(t) - 2.0 * Logistic(t); }
};

// Maximizer of the concave log-integrand by bisection on its (decreasing)
// derivative.
double PeakLocation(const LogIntegrand& h) {
  double lo = -1.0;
  double hi = 1.0;
  while (h.Derivative(lo) <= 0.0) lo *= 2.0;
  while (h.Derivative(hi) >= 0.0) hi *= 2.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (h.Derivative(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double TailPoint(const LogIntegrand& h, double peak, double peak_value, double direction, double drop) {
  double step = 1.0;
  double t = peak + direction * step;
  while (h(t) > peak_value - drop) {
    step *= 2.0;
    t = peak + direction * step;
  }
  return t;
}

double LogGramEntry(int k, const TorusMetric& metric, int i, const QuadratureControl& control) {
  const LogIntegrand h{metric, k, i};
  const double peak = PeakLocation(h);
  const double peak_value = h(peak);
  const double lower = TailPoint(h, peak, peak_value, -1.0, control.log_tail_drop);
  const double upper = TailPoint(h, peak, peak_value, 1.0, control.log_tail_drop);

  // The peak and tail points often land within rounding of a kink. Such
  // points are dropped in favour of the kink: G-K cannot resolve a piece a
  // few ulps wide and would recurse to max_depth on it.
  std::vector<double> cuts;
  for (double b : metric.breakpoints()) {
    if (b > lower && b < upper) cuts.push_back(b);
  }
  const auto near_cut = [&](double t) {
    return std::any_of(cuts.begin(), cuts.end(),
                       [&](double c) { return std::abs(c - t) <= 1e-9 * (1.0 + std::abs(c)); });
  };
  for (double t : {lower, upper, peak}) {
    if (!near_cut(t)) cuts.push_back(t);
  }
  std::sort(cuts.begin(), cuts.end());

  const auto scaled = [&](double t) { return std::exp(h(t) - peak_value); };
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t j = 1; j < cuts.size(); ++j) {
    double error = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        scaled, cuts[j - 1], cuts[j], static_cast<unsigned>(control.max_depth), 0.01 * control.relative_tolerance,
        &error);
    total_error += error;
  }
  if (!(total > 0.0) || !(total_error <= control.relative_tolerance * total)) {
    throw Error(ErrorKind::kQuadratureNonConvergent,
                "L2 Gram entry (k=" + std::to_string(k) + ", i=" + std::to_string(i) + ") did not converge");
  }
  return peak_value + std::log(total);
}

}  // namespace

TorusMetric TorusMetric::FubiniStudy(double offset) {
  if (!std::isfinite(offset)) throw Error(ErrorKind::kInvalidArgument, "offset must be finite");
  return TorusMetric(Kind::kFubiniStudy, {}, {}, {}, offset);
}

TorusMetric TorusMetric::PLPotential(std::vector<double> breakpoints, std::vector<double> slopes, double offset) {
  if (breakpoints.empty()) throw Error(ErrorKind::kInvalidArgument, "a PL potential needs at least one kink");
  if (slopes.size() != breakpoints.size() + 1) {
    throw Error(ErrorKind::kInvalidArgument, "a PL potential needs one more slope than kinks");
  }
  if (!std::isfinite(offset)) throw Error(ErrorKind::kInvalidArgument, "offset must be finite");
  for (std::size_t j = 0; j < breakpoints.size(); ++j) {
    if (!std::isfinite(breakpoints[j])) throw Error(ErrorKind::kInvalidArgument, "kinks must be finite");
    if (j > 0 && !(breakpoints[j - 1] < breakpoints[j])) {
      throw Error(ErrorKind::kInvalidArgument, "kinks must be strictly increasing");
    }
  }
  for (std::size_t j = 0; j < slopes.size(); ++j) {
    if (!(slopes[j] >= 0.0 && slopes[j] <= 1.0)) throw Error(ErrorKind::kInvalidArgument, "slopes must lie in [0, 1]");
    if (j > 0 && slopes[j] < slopes[j - 1]) throw Error(ErrorKind::kInvalidArgument, "slopes must be nondecreasing");
  }
  if (slopes.front() != 0.0 || slopes.back() != 1.0) {
    throw Error(ErrorKind::kInvalidArgument, "asymptotic slopes must be 0 (left) and 1 (right)");
  }
  std::vector<double> knots(breakpoints.size());
  knots[0] = offset;
  for (std::size_t j = 1; j < breakpoints.size(); ++j) {
    knots[j] = knots[j - 1] + slopes[j] * (breakpoints[j] - breakpoints[j - 1]);
  }
  return TorusMetric(Kind::kPLPotential, std::move(breakpoints), std::move(slopes), std::move(knots), offset);
}

double TorusMetric::Potential(double t) const {
  if (kind_ == Kind::kFubiniStudy) return Softplus(t) + offset_;
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  const auto j = static_cast<std::size_t>(it - breakpoints_.begin());
  if (j == 0) return offset_;
  return knot_values_[j - 1] + slopes_[j] * (t - breakpoints_[j - 1]);
}

double TorusMetric::Slope(double t) const {
  if (kind_ == Kind::kFubiniStudy) return Logistic(t);
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  return slopes_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

double TorusMetric::LegendreTransform(double x) const {
  if (!(x >= -1e-12 && x <= 1.0 + 1e-12)) {
    throw Error(ErrorKind::kOutOfDomain, "Legendre transform is finite only on [0, 1]");
  }
  x = std::clamp(x, 0.0, 1.0);
  if (kind_ == Kind::kFubiniStudy) return XLogX(x) + XLogX(1.0 - x) - offset_;
  // x t - u(t) is concave and piecewise linear: its sup sits at a kink.
  double best = -kInfinity;
  for (std::size_t j = 0; j < breakpoints_.size(); ++j) best = std::max(best, x * breakpoints_[j] - knot_values_[j]);
  return best;
}

TorusMetric TorusMetric::ShiftedWeight(double c) const {
  if (kind_ == Kind::kFubiniStudy) return FubiniStudy(offset_ + 2.0 * c);
  return PLPotential(breakpoints_, slopes_, offset_ + 2.0 * c);
}

std::vector<double> L2LogGramDiagonal(int k, const TorusMetric& metric, const QuadratureControl& control) {
  CheckDegree(k);
  std::vector<double> log_gram(static_cast<std::size_t>(k) + 1);
  ParallelFor(log_gram.size(), [&](std::size_t i) {
    log_gram[i] = LogGramEntry(k, metric, static_cast<int>(i), control);
  });
  return log_gram;
}

HermitianNorm L2Gram(int k, const TorusMetric& metric, const QuadratureControl& control) {
  std::vector<double> diagonal = L2LogGramDiagonal(k, metric, control);
  for (double& g : diagonal) g = std::exp(g);
  return HermitianNorm::FromDiagonal(diagonal);
}

double LogSupNormMonomial(int k, const TorusMetric& metric, int i) {
  CheckDegree(k);
  if (i < 0 || i > k) throw Error(ErrorKind::kInvalidArgument, "monomial index must lie in [0, k]");
  if (k == 0) return 0.0;
  return 0.5 * k * metric.LegendreTransform(static_cast<double>(i) / k);
}

double SupNormMonomial(int k, const TorusMetric& metric, int i) { return std::exp(LogSupNormMonomial(k, metric, i)); }

double FsWeightFromLogGram(std::span<const double> log_gram, int k, double t) {
  if (k < 1) throw Error(ErrorKind::kInvalidArgument, "Fubini-Study weight needs k >= 1");
  double peak = -kInfinity;
  for (std::size_t i = 0; i < log_gram.size(); ++i) peak = std::max(peak, static_cast<double>(i) * t - log_gram[i]);
  double sum = 0.0;
  for (std::size_t i = 0; i < log_gram.size(); ++i) sum += std::exp(static_cast<double>(i) * t - log_gram[i] - peak);
  return (peak + std::log(sum)) / k;
}

double FsWeight(const HermitianNorm& norm, int k, double t) {
  if (!norm.IsDiagonal()) throw Error(ErrorKind::kInvalidArgument, "Fubini-Study weight needs a diagonal Gram matrix");
  std::vector<double> log_gram(static_cast<std::size_t>(norm.dim()));
  for (int i = 0; i < norm.dim(); ++i) log_gram[static_cast<std::size_t>(i)] = std::log(norm.gram()(i, i).real());
  return FsWeightFromLogGram(log_gram, k, t);
}

NANorm StandardFiltration(int k, FiltrationKind kind, std::span<const double> weights) {
  CheckDegree(k);
  const auto n = static_cast<std::size_t>(k) + 1;
  if (kind == FiltrationKind::kVanishingOrder) {
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = static_cast<double>(i);
    return NANorm::FromWeights(std::move(values));
  }
  if (weights.size() != n) {
    throw Error(ErrorKind::kLengthMismatch, "weighted filtration needs k + 1 = " + std::to_string(n) + " weights");
  }
  return NANorm::FromWeights(std::vector<double>(weights.begin(), weights.end()));
}

GradedNA VanishingOrderFiltration() {
  return GradedNA([](int k) { return StandardFiltration(k, FiltrationKind::kVanishingOrder); }, 1, true);
}

GradedNA LinearFiltration(double slope) {
  return GradedNA(
      [slope](int k) {
        std::vector<double> values(static_cast<std::size_t>(k) + 1);
        for (std::size_t i = 0; i < values.size(); ++i) values[i] = slope * static_cast<double>(i);
        return NANorm::FromWeights(std::move(values));
      },
      1, true);
}

GradedNA TrivialFiltration() {
  return GradedNA([](int k) { return NANorm::Trivial(k + 1); }, 1, true);
}

ExactGradedNA ExactVanishingOrderFiltration() { return ExactLinearFiltration(Rational(1)); }

ExactGradedNA ExactLinearFiltration(const Rational& slope) {
  return ExactGradedNA(
      [slope](int k) {
        std::vector<Rational> values;
        for (int i = 0; i <= k; ++i) values.push_back(slope * i);
        return ExactNANorm(std::move(values));
      },
      1, true);
}

GradedHermitian L2Norms(const TorusMetric& metric, const QuadratureControl& control) {
  return GradedHermitian([metric, control](int k) {
    return HermitianPiece{L2Gram(k, metric, control), Apartment::Standard(k + 1)};
  });
}

DiagonalLogNorms SupNormLogs(const TorusMetric& metric) {
  return [metric](int k) {
    std::vector<double> logs(static_cast<std::size_t>(k) + 1);
    for (int i = 0; i <= k; ++i) logs[static_cast<std::size_t>(i)] = LogSupNormMonomial(k, metric, i);
    return logs;
  };
}

Vector RingMultiply(const Vector& s, const Vector& t) {
  const std::vector<Complex> a(s.data(), s.data() + s.size());
  const std::vector<Complex> b(t.data(), t.data() + t.size());
  const std::vector<Complex> c = RingMultiply<Complex>(a, b);
  return Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(c.size()));
}

RingProduct MonomialRing() {
  return [](const Vector& s, const Vector& t) { return RingMultiply(s, t); };
}

ExactRingProduct ExactMonomialRing() {
  return [](std::span<const Rational> s, std::span<const Rational> t) { return RingMultiply<Rational>(s, t); };
}

QuantisationEstimate MetricDistanceViaQuantisation(const TorusMetric& phi, const TorusMetric& psi, double p,
                                                   std::span<const int> k_list, const QuadratureControl& control) {
  CheckExponent(p);
  CheckDegreeList(k_list);
  QuantisationEstimate estimate;
  estimate.per_k.resize(k_list.size());
  for (std::size_t j = 0; j < k_list.size(); ++j) {
    const int k = k_list[j];
    const std::vector<double> log_phi = L2LogGramDiagonal(k, phi, control);
    const std::vector<double> log_psi = L2LogGramDiagonal(k, psi, control);
    RelativeSpectrum spectrum;
    for (std::size_t i = 0; i < log_phi.size(); ++i) spectrum.values.push_back(0.5 * (log_psi[i] - log_phi[i]));
    std::sort(spectrum.values.begin(), spectrum.values.end(), std::greater<>());
    const double value = DpFromSpectrum(spectrum, p) / k;
    const double previous = j == 0 ? std::numeric_limits<double>::quiet_NaN() : estimate.per_k[j - 1].value;
    estimate.per_k[j] = PerKRecord{k, value, value - previous};
  }
  estimate.final_estimate = estimate.per_k.back().value;
  return estimate;
}

double ToricDistance(const TorusMetric& phi, const TorusMetric& psi, double p) {
  CheckExponent(p);
  const auto difference = [&](double x) {
    return 0.5 * std::abs(phi.LegendreTransform(x) - psi.LegendreTransform(x));
  };
  // u* is piecewise linear between consecutive slopes of a PL potential.
  std::vector<double> cuts{0.0, 1.0};
  for (const TorusMetric* metric : {&phi, &psi}) {
    for (double s : metric->slopes()) {
      if (s > 0.0 && s < 1.0) cuts.push_back(s);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (std::isinf(p)) {
    double worst = 0.0;
    for (std::size_t j = 1; j < cuts.size(); ++j) {
      for (int s = 0; s <= 1000; ++s) worst = std::max(worst, difference(cuts[j - 1] + (cuts[j] - cuts[j - 1]) * s / 1000.0));
    }
    return worst;
  }
  boost::math::quadrature::tanh_sinh<double> integrator;
  double total = 0.0;
  for (std::size_t j = 1; j < cuts.size(); ++j) {
    total += integrator.integrate([&](double x) { return std::pow(difference(x), p); }, cuts[j - 1], cuts[j]);
  }
  return std::pow(total, 1.0 / p);
}

}  // namespace flatcone::p1
