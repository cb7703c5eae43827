#include "flatcone/convex.hpp"

#include <array>
#include <numeric>

namespace flatcone {
namespace {

constexpr double kProbabilityMassTolerance = 1e-10;

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 4> kGaussNodes = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                               0.9602898564975363};
constexpr std::array<double, 4> kGaussWeights = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                                 0.1012285362903763};

// Integral of |h|^p over [a, b] for h linear without a sign change inside.
double PowerIntegral(double a, double b, double ha, double hb, double p) {
  const double u = std::abs(ha);
  const double v = std::abs(hb);
  const double width = b - a;
  if (std::abs(v - u) > 1e-4 * std::max(u, v)) {
    return width / (p + 1.0) * (std::pow(v, p + 1.0) - std::pow(u, p + 1.0)) / (v - u);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < kGaussNodes.size(); ++i) {
    for (double sign : {-1.0, 1.0}) {
      const double s = 0.5 * (1.0 + sign * kGaussNodes[i]);
      sum += kGaussWeights[i] * std::pow(std::abs(ha + (hb - ha) * s), p);
    }
  }
  return 0.5 * width * sum;
}

}  // namespace

PLFunction ConeCombine(ConeOp op, const PLFunction& f, const PLFunction* g, double c) {
  switch (op) {
    case ConeOp::kSum:
      if (g == nullptr) throw Error(ErrorKind::kInvalidArgument, "sum needs two functions");
      return Sum(f, *g);
    case ConeOp::kScale:
      return Scale(f, c);
    case ConeOp::kPointwiseMax:
      if (g == nullptr) throw Error(ErrorKind::kInvalidArgument, "pointwise max needs two functions");
      return PointwiseMax(f, *g);
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown cone operation");
}

std::string_view ToString(Normalization normalization) {
  return normalization == Normalization::kRaw ? "raw" : "probability";
}

Normalization ParseNormalization(std::string_view text) {
  if (text == "raw") return Normalization::kRaw;
  if (text == "probability") return Normalization::kProbability;
  throw Error(ErrorKind::kInvalidArgument, "normalization must be 'raw' or 'probability'");
}

DiscreteMeasure DiscreteMeasure::Make(std::vector<double> atoms, std::vector<double> weights,
                                      Normalization normalization,
                                      std::optional<std::pair<double, double>> support) {
  if (atoms.size() != weights.size()) throw Error(ErrorKind::kLengthMismatch, "atoms and weights differ in length");
  if (atoms.empty()) throw Error(ErrorKind::kInvalidArgument, "a measure needs at least one atom");
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!std::isfinite(atoms[i]) || !std::isfinite(weights[i])) {
      throw Error(ErrorKind::kInvalidArgument, "atoms and weights must be finite");
    }
    if (weights[i] < 0.0) throw Error(ErrorKind::kInvalidArgument, "weights must be nonnegative");
  }
  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return atoms[i] < atoms[j]; });
  std::vector<double> sorted_atoms;
  std::vector<double> sorted_weights;
  for (std::size_t i : order) {
    sorted_atoms.push_back(atoms[i]);
    sorted_weights.push_back(weights[i]);
  }
  std::pair<double, double> interval = support.value_or(std::make_pair(sorted_atoms.front(), sorted_atoms.back()));
  if (interval.first > interval.second) throw Error(ErrorKind::kInvalidArgument, "empty support interval");
  if (sorted_atoms.front() < interval.first || sorted_atoms.back() > interval.second) {
    throw Error(ErrorKind::kOutOfDomain, "atom outside the declared support");
  }
  double mass = 0.0;
  for (double w : sorted_weights) mass += w;
  if (normalization == Normalization::kProbability && std::abs(mass - 1.0) > kProbabilityMassTolerance) {
    throw Error(ErrorKind::kInvalidArgument, "probability measure must have mass 1");
  }
  return DiscreteMeasure(std::move(sorted_atoms), std::move(sorted_weights), normalization, interval, mass);
}

DiscreteMeasure DiscreteMeasure::Normalized() const {
  if (!(mass_ > 0.0)) throw Error(ErrorKind::kInvalidArgument, "cannot normalize a zero measure");
  std::vector<double> weights = weights_;
  for (double& w : weights) w /= mass_;
  return Make(atoms_, std::move(weights), Normalization::kProbability, support_);
}

double DiscreteMeasure::Cdf(double x) const {
  double total = 0.0;
  for (std::size_t i = 0; i < atoms_.size() && atoms_[i] <= x; ++i) total += weights_[i];
  return total / mass_;
}

double KolmogorovDistance(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  std::vector<double> points = a.atoms();
  points.insert(points.end(), b.atoms().begin(), b.atoms().end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  // Both distribution functions are right-continuous steps, so the supremum
  // is attained at an atom.
  double worst = 0.0;
  std::size_t ia = 0;
  std::size_t ib = 0;
  double ca = 0.0;
  double cb = 0.0;
  for (double x : points) {
    while (ia < a.atoms().size() && a.atoms()[ia] <= x) ca += a.weights()[ia++];
    while (ib < b.atoms().size() && b.atoms()[ib] <= x) cb += b.weights()[ib++];
    worst = std::max(worst, std::abs(ca / a.mass() - cb / b.mass()));
  }
  return worst;
}

double KolmogorovDistanceToUniform(const DiscreteMeasure& measure, double lower, double upper) {
  if (!(upper > lower)) throw Error(ErrorKind::kInvalidArgument, "uniform reference needs lower < upper");
  const auto uniform = [&](double x) { return std::clamp((x - lower) / (upper - lower), 0.0, 1.0); };
  const auto& atoms = measure.atoms();
  double worst = uniform(atoms.front());  // F = 0 before the first atom
  double cumulative = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    cumulative += measure.weights()[i];
    const bool last_at_x = i + 1 == atoms.size() || atoms[i + 1] > atoms[i];
    if (!last_at_x) continue;
    const double step = cumulative / measure.mass();
    const double next = i + 1 < atoms.size() ? uniform(atoms[i + 1]) : 1.0;
    worst = std::max({worst, std::abs(step - uniform(atoms[i])), std::abs(step - next)});
  }
  return worst;
}

LpValue LpDistance(const PLFunction& f, const PLFunction& g, const DiscreteMeasure& measure, double p) {
  if (!(p >= 1.0)) throw Error(ErrorKind::kInvalidArgument, "exponent p must be >= 1");
  const bool probability = measure.normalization() == Normalization::kProbability;
  const auto& atoms = measure.atoms();
  const auto& weights = measure.weights();
  if (std::isinf(p)) {
    double worst = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (weights[i] > 0.0) worst = std::max(worst, std::abs(f(atoms[i]) - g(atoms[i])));
    }
    return {worst, probability};
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    sum += weights[i] * std::pow(std::abs(f(atoms[i]) - g(atoms[i])), p);
  }
  if (probability) sum /= measure.mass();
  return {std::pow(sum, 1.0 / p), probability};
}

double LpDistanceUniform(const PLFunction& f, const PLFunction& g, double lower, double upper, double p) {
  if (!(p >= 1.0)) throw Error(ErrorKind::kInvalidArgument, "exponent p must be >= 1");
  if (!(upper > lower)) throw Error(ErrorKind::kInvalidArgument, "uniform reference needs lower < upper");
  std::vector<double> xs{lower, upper};
  for (const auto* h : {&f, &g}) {
    for (double x : h->breakpoints()) {
      if (x > lower && x < upper) xs.push_back(x);
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  double total = 0.0;
  double worst = 0.0;
  for (std::size_t j = 1; j < xs.size(); ++j) {
    const double a = xs[j - 1];
    const double b = xs[j];
    const double ha = f(a) - g(a);
    const double hb = f(b) - g(b);
    worst = std::max({worst, std::abs(ha), std::abs(hb)});
    if (std::isinf(p)) continue;
    if ((ha < 0.0 && hb > 0.0) || (ha > 0.0 && hb < 0.0)) {
      const double c = a + (b - a) * (ha / (ha - hb));
      total += PowerIntegral(a, c, ha, 0.0, p) + PowerIntegral(c, b, 0.0, hb, p);
    } else {
      total += PowerIntegral(a, b, ha, hb, p);
    }
  }
  if (std::isinf(p)) return worst;
  return std::pow(total / (upper - lower), 1.0 / p);
}

}  // namespace flatcone
