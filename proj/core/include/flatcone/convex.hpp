#ifndef FLATCONE_CONVEX_HPP_
#define FLATCONE_CONVEX_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "flatcone/error.hpp"
#include "flatcone/rational.hpp"

namespace flatcone {

// Piecewise-linear function on [x_0, x_m], given by its values at strictly
// increasing breakpoints. Instances are always convex; Make() additionally
// enforces "decreasing" unless asked not to. Scalar is double or Rational;
// the Rational instantiation performs every check and evaluation exactly.
template <typename Scalar>
class BasicPLFunction {
 public:
  // Evaluation within this distance outside the domain clamps to the nearest
  // endpoint (double only).
  static constexpr double kClampDistance = 1e-9;
  static constexpr double kSlopeSlack = 1e-12;

  struct Evaluation {
    Scalar value;
    bool clamped = false;
  };

  // Throws UnsortedBreakpoints, LengthMismatch, NotConvex, NotDecreasing,
  // InvalidArgument (non-finite data).
  static BasicPLFunction Make(std::vector<Scalar> breakpoints, std::vector<Scalar> values,
                              bool require_decreasing = true);
  static BasicPLFunction Constant(const Scalar& lower, const Scalar& upper, const Scalar& value) {
    return Affine(lower, upper, Scalar(0), value);
  }
  // x -> intercept + slope * x on [lower, upper].
  static BasicPLFunction Affine(const Scalar& lower, const Scalar& upper, const Scalar& slope,
                                const Scalar& intercept) {
    if (lower == upper) return Make({lower}, {intercept + slope * lower}, false);
    return Make({lower, upper}, {intercept + slope * lower, intercept + slope * upper}, false);
  }

  const std::vector<Scalar>& breakpoints() const { return breakpoints_; }
  const std::vector<Scalar>& values() const { return values_; }
  const Scalar& lower() const { return breakpoints_.front(); }
  const Scalar& upper() const { return breakpoints_.back(); }
  int pieces() const { return static_cast<int>(breakpoints_.size()) - 1; }

  std::vector<Scalar> Slopes() const;
  bool IsDecreasing() const { return decreasing_; }
  // sup |f|, attained at a breakpoint.
  Scalar SupAbs() const;

  // Throws OutOfDomain when x is outside the domain (beyond the clamp distance
  // for double).
  Evaluation Evaluate(const Scalar& x) const;
  Scalar operator()(const Scalar& x) const { return Evaluate(x).value; }

  BasicPLFunction<double> ToDouble() const;

 private:
  BasicPLFunction(std::vector<Scalar> breakpoints, std::vector<Scalar> values, bool decreasing)
      : breakpoints_(std::move(breakpoints)), values_(std::move(values)), decreasing_(decreasing) {}

  std::vector<Scalar> breakpoints_;
  std::vector<Scalar> values_;
  bool decreasing_;
};

using PLFunction = BasicPLFunction<double>;
using RationalPLFunction = BasicPLFunction<Rational>;

// Cone operations. Each result is revalidated; "decreasing" is required of
// the result exactly when both inputs are decreasing.
template <typename Scalar>
BasicPLFunction<Scalar> Sum(const BasicPLFunction<Scalar>& f, const BasicPLFunction<Scalar>& g);
// Throws NegativeScale for c < 0.
template <typename Scalar>
BasicPLFunction<Scalar> Scale(const BasicPLFunction<Scalar>& f, const Scalar& c);
// Crossing points of f - g become breakpoints.
template <typename Scalar>
BasicPLFunction<Scalar> PointwiseMax(const BasicPLFunction<Scalar>& f, const BasicPLFunction<Scalar>& g);

enum class ConeOp { kSum, kScale, kPointwiseMax };

// Dispatcher over the three operations; `g` is required for kSum and
// kPointwiseMax, `c` for kScale.
PLFunction ConeCombine(ConeOp op, const PLFunction& f, const PLFunction* g = nullptr, double c = 1.0);

enum class Normalization { kRaw, kProbability };

std::string_view ToString(Normalization normalization);
Normalization ParseNormalization(std::string_view text);

// Atoms with nonnegative weights on R. `raw` measures carry k^{-n} weights;
// `probability` measures have mass one.
class DiscreteMeasure {
 public:
  // Throws LengthMismatch, InvalidArgument (negative weight, empty support),
  // OutOfDomain (atom outside the declared support).
  static DiscreteMeasure Make(std::vector<double> atoms, std::vector<double> weights,
                              Normalization normalization,
                              std::optional<std::pair<double, double>> support = std::nullopt);

  const std::vector<double>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }
  Normalization normalization() const { return normalization_; }
  double mass() const { return mass_; }
  // Closed interval containing every atom.
  double support_lower() const { return support_.first; }
  double support_upper() const { return support_.second; }

  // Same atoms, weights divided by the mass.
  DiscreteMeasure Normalized() const;
  // Distribution function of the normalized measure, right-continuous.
  double Cdf(double x) const;

 private:
  DiscreteMeasure(std::vector<double> atoms, std::vector<double> weights, Normalization normalization,
                  std::pair<double, double> support, double mass)
      : atoms_(std::move(atoms)), weights_(std::move(weights)), normalization_(normalization),
        support_(support), mass_(mass) {}

  std::vector<double> atoms_;  // sorted ascending
  std::vector<double> weights_;
  Normalization normalization_;
  std::pair<double, double> support_;
  double mass_;
};

// sup_x |F_a(x) - F_b(x)| between the normalized distribution functions.
double KolmogorovDistance(const DiscreteMeasure& a, const DiscreteMeasure& b);
// Same against the uniform probability measure on [lower, upper].
double KolmogorovDistanceToUniform(const DiscreteMeasure& measure, double lower, double upper);

struct LpValue {
  double value;
  // False when the measure was `raw`: the integral is then taken against the
  // weights as they are.
  bool probability;
};

// (sum_i w_i |f(x_i) - g(x_i)|^p / mass)^{1/p} for probability measures,
// (sum_i w_i |f - g|^p)^{1/p} for raw ones; p = infinity gives the max over
// atoms of positive weight. Throws InvalidArgument (p < 1), OutOfDomain.
LpValue LpDistance(const PLFunction& f, const PLFunction& g, const DiscreteMeasure& measure, double p);

// L^p distance against the uniform probability measure on [lower, upper],
// integrated piece by piece in closed form.
double LpDistanceUniform(const PLFunction& f, const PLFunction& g, double lower, double upper, double p);

// ---------------------------------------------------------------------------
// Template implementation.

namespace detail {

template <typename Scalar>
constexpr bool kIsFloat = std::is_floating_point_v<Scalar>;

template <typename Scalar>
Scalar Abs(const Scalar& x) {
  return x < 0 ? Scalar(-x) : x;
}

template <typename Scalar>
bool DomainsMatch(const BasicPLFunction<Scalar>& f, const BasicPLFunction<Scalar>& g) {
  if constexpr (kIsFloat<Scalar>) {
    const double scale = std::max({1.0, std::abs(f.lower()), std::abs(f.upper())});
    return std::abs(f.lower() - g.lower()) <= 1e-12 * scale && std::abs(f.upper() - g.upper()) <= 1e-12 * scale;
  } else {
    return f.lower() == g.lower() && f.upper() == g.upper();
  }
}

// Sorted union of both breakpoint sets; near-duplicates (double) are merged.
template <typename Scalar>
std::vector<Scalar> MergedBreakpoints(const BasicPLFunction<Scalar>& f, const BasicPLFunction<Scalar>& g) {
  std::vector<Scalar> merged = f.breakpoints();
  merged.insert(merged.end(), g.breakpoints().begin(), g.breakpoints().end());
  std::sort(merged.begin(), merged.end());
  std::vector<Scalar> unique;
  for (const Scalar& x : merged) {
    if constexpr (kIsFloat<Scalar>) {
      const double tolerance = 1e-12 * std::max(1.0, std::abs(f.upper() - f.lower()));
      if (!unique.empty() && std::abs(x - unique.back()) <= tolerance) continue;
    } else {
      if (!unique.empty() && x == unique.back()) continue;
    }
    unique.push_back(x);
  }
  // Keep the exact endpoints of f.
  unique.front() = f.lower();
  unique.back() = f.upper();
  return unique;
}

}  // namespace detail

template <typename Scalar>
BasicPLFunction<Scalar> BasicPLFunction<Scalar>::Make(std::vector<Scalar> breakpoints, std::vector<Scalar> values,
                                                      bool require_decreasing) {
  if (breakpoints.empty()) throw Error(ErrorKind::kInvalidArgument, "a PL function needs at least one breakpoint");
  if (breakpoints.size() != values.size()) {
    throw Error(ErrorKind::kLengthMismatch, "breakpoints and values differ in length");
  }
  if constexpr (detail::kIsFloat<Scalar>) {
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
      if (!std::isfinite(breakpoints[i]) || !std::isfinite(values[i])) {
        throw Error(ErrorKind::kInvalidArgument, "PL data must be finite");
      }
    }
  }
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i - 1] < breakpoints[i])) {
      throw Error(ErrorKind::kUnsortedBreakpoints, "breakpoints must be strictly increasing at index " + std::to_string(i));
    }
  }
  BasicPLFunction candidate(std::move(breakpoints), std::move(values), false);
  const std::vector<Scalar> slopes = candidate.Slopes();
  // Float mode: relative slack plus the rounding error of each slope, which
  // is computed from value differences and blows up on very short pieces.
  std::vector<Scalar> noise(slopes.size(), Scalar(0));
  Scalar slack(0);
  if constexpr (detail::kIsFloat<Scalar>) {
    double largest = 1.0;
    for (double s : slopes) largest = std::max(largest, std::abs(s));
    slack = kSlopeSlack * largest;
    const auto& xs = candidate.breakpoints_;
    const auto& ys = candidate.values_;
    for (std::size_t j = 0; j < slopes.size(); ++j) {
      const double magnitude = std::abs(ys[j]) + std::abs(ys[j + 1]) + std::abs(slopes[j]) * (std::abs(xs[j]) + std::abs(xs[j + 1]));
      noise[j] = 8.0 * std::numeric_limits<double>::epsilon() * magnitude / (xs[j + 1] - xs[j]);
    }
  }
  for (std::size_t j = 1; j < slopes.size(); ++j) {
    if (slopes[j] - slopes[j - 1] < -(slack + noise[j] + noise[j - 1])) {
      throw Error(ErrorKind::kNotConvex, "slopes decrease after breakpoint " + std::to_string(j));
    }
  }
  bool decreasing = true;
  for (std::size_t j = 0; j < slopes.size(); ++j) {
    if (slopes[j] > slack + noise[j]) decreasing = false;
  }
  if (require_decreasing && !decreasing) throw Error(ErrorKind::kNotDecreasing, "function has a positive slope");
  candidate.decreasing_ = decreasing;
  return candidate;
}

template <typename Scalar>
std::vector<Scalar> BasicPLFunction<Scalar>::Slopes() const {
  std::vector<Scalar> slopes;
  for (std::size_t j = 1; j < breakpoints_.size(); ++j) {
    slopes.push_back((values_[j] - values_[j - 1]) / (breakpoints_[j] - breakpoints_[j - 1]));
  }
  return slopes;
}

template <typename Scalar>
Scalar BasicPLFunction<Scalar>::SupAbs() const {
  Scalar best(0);
  for (const Scalar& v : values_) best = std::max(best, detail::Abs(v));
  return best;
}

template <typename Scalar>
typename BasicPLFunction<Scalar>::Evaluation BasicPLFunction<Scalar>::Evaluate(const Scalar& x) const {
  Evaluation result{Scalar(0), false};
  Scalar point = x;
  if (point < lower() || point > upper()) {
    if constexpr (detail::kIsFloat<Scalar>) {
      const double distance = point < lower() ? lower() - point : point - upper();
      if (!(distance <= kClampDistance)) {
        throw Error(ErrorKind::kOutOfDomain, "x = " + std::to_string(point) + " is outside [" +
                                                 std::to_string(lower()) + ", " + std::to_string(upper()) + "]");
      }
      point = point < lower() ? lower() : upper();
      result.clamped = true;
    } else {
      throw Error(ErrorKind::kOutOfDomain, "x = " + flatcone::ToString(point) + " is outside the domain");
    }
  }
  if (breakpoints_.size() == 1) {
    result.value = values_.front();
    return result;
  }
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), point);
  std::size_t j = static_cast<std::size_t>(it - breakpoints_.begin());
  if (j >= breakpoints_.size()) j = breakpoints_.size() - 1;
  if (j == 0) j = 1;
  const Scalar& x0 = breakpoints_[j - 1];
  const Scalar& x1 = breakpoints_[j];
  if (point == x1) {
    result.value = values_[j];
  } else {
    result.value = values_[j - 1] + (values_[j] - values_[j - 1]) * ((point - x0) / (x1 - x0));
  }
  return result;
}

template <typename Scalar>
BasicPLFunction<double> BasicPLFunction<Scalar>::ToDouble() const {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& x : breakpoints_) xs.push_back(flatcone::ToDouble(x));
  for (const auto& y : values_) ys.push_back(flatcone::ToDouble(y));
  return BasicPLFunction<double>::Make(std::move(xs), std::move(ys), decreasing_);
}

template <typename Scalar>
BasicPLFunction<Scalar> Sum(const BasicPLFunction<Scalar>& f, const BasicPLFunction<Scalar>& g) {
  if (!detail::DomainsMatch(f, g)) throw Error(ErrorKind::kDomainMismatch, "summands live on different intervals");
  std::vector<Scalar> xs = detail::MergedBreakpoints(f, g);
  std::vector<Scalar> ys;
  ys.reserve(xs.size());
  for (const Scalar& x : xs) ys.push_back(f(x) + g(x));
  return BasicPLFunction<Scalar>::Make(std::move(xs), std::move(ys), f.IsDecreasing() && g.IsDecreasing());
}

template <typename Scalar>
BasicPLFunction<Scalar> Scale(const BasicPLFunction<Scalar>& f, const Scalar& c) {
  if (c < 0) throw Error(ErrorKind::kNegativeScale, "cone elements may only be scaled by c >= 0");
  std::vector<Scalar> ys;
  for (const Scalar& y : f.values()) ys.push_back(c * y);
  return BasicPLFunction<Scalar>::Make(f.breakpoints(), std::move(ys), f.IsDecreasing());
}

template <typename Scalar>
BasicPLFunction<Scalar> PointwiseMax(const BasicPLFunction<Scalar>& f, const BasicPLFunction<Scalar>& g) {
  if (!detail::DomainsMatch(f, g)) throw Error(ErrorKind::kDomainMismatch, "arguments live on different intervals");
  const std::vector<Scalar> merged = detail::MergedBreakpoints(f, g);
  std::vector<Scalar> xs;
  for (std::size_t j = 0; j < merged.size(); ++j) {
    if (j > 0) {
      const Scalar& a = merged[j - 1];
      const Scalar& b = merged[j];
      const Scalar ha = f(a) - g(a);
      const Scalar hb = f(b) - g(b);
      if ((ha < 0 && hb > 0) || (ha > 0 && hb < 0)) {
        const Scalar crossing = a + (b - a) * (ha / (ha - hb));
        if (a < crossing && crossing < b) xs.push_back(crossing);
      }
    }
    xs.push_back(merged[j]);
  }
  std::vector<Scalar> ys;
  ys.reserve(xs.size());
  for (const Scalar& x : xs) ys.push_back(std::max(f(x), g(x)));
  return BasicPLFunction<Scalar>::Make(std::move(xs), std::move(ys), f.IsDecreasing() && g.IsDecreasing());
}

}  // namespace flatcone

#endif  // FLATCONE_CONVEX_HPP_
