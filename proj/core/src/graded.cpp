#include "flatcone/graded.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "flatcone/error.hpp"

namespace flatcone {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename Record>
void FillSuccessiveDifferences(std::vector<Record>& records) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].diagnostic = i == 0 ? kNaN : records[i].value - records[i - 1].value;
  }
}

std::vector<PerKRecord> PerDegree(std::span<const int> k_list, const std::function<double(int)>& value) {
  CheckDegreeList(k_list);
  std::vector<PerKRecord> records(k_list.size());
  ParallelFor(k_list.size(), [&](std::size_t i) {
    const int k = k_list[i];
    records[i] = PerKRecord{k, value(k), kNaN};
  });
  FillSuccessiveDifferences(records);
  return records;
}

std::string DescribePair(int m, int n, const std::string& s, const std::string& t) {
  std::ostringstream out;
  out << "m=" << m << " n=" << n << " s=" << s << " t=" << t;
  return out.str();
}

std::vector<Rational> ExactUnit(int dim, int i) {
  std::vector<Rational> v(static_cast<std::size_t>(dim), Rational(0));
  v[static_cast<std::size_t>(i)] = 1;
  return v;
}

void Record(SubmultiplicativityReport& report, double margin, const std::string& description) {
  ++report.pairs_checked;
  if (margin < report.worst_margin) {
    report.worst_margin = margin;
    report.worst_pair = description;
  }
}

void Record(ExactSubmultiplicativityReport& report, const Rational& margin, const std::string& description) {
  ++report.pairs_checked;
  if (!report.any_checked || margin < report.worst_margin) {
    report.worst_margin = margin;
    report.worst_pair = description;
    report.any_checked = true;
  }
}

void Merge(SubmultiplicativityReport& into, const SubmultiplicativityReport& from) {
  into.pairs_checked += from.pairs_checked;
  if (from.worst_margin < into.worst_margin) {
    into.worst_margin = from.worst_margin;
    into.worst_pair = from.worst_pair;
  }
}

void Merge(ExactSubmultiplicativityReport& into, const ExactSubmultiplicativityReport& from) {
  into.pairs_checked += from.pairs_checked;
  if (from.any_checked && (!into.any_checked || from.worst_margin < into.worst_margin)) {
    into.worst_margin = from.worst_margin;
    into.worst_pair = from.worst_pair;
    into.any_checked = true;
  }
}

// Margin log(||s|| ||t|| / ||st||) = LogValue(st) - LogValue(s) - LogValue(t).
double Margin(const NANorm& fm, const NANorm& fn, const NANorm& fmn, const Vector& s, const Vector& t,
              const Vector& st) {
  const double ls = fm.LogValue(s);
  const double lt = fn.LogValue(t);
  const double lst = fmn.LogValue(st);
  if (std::isinf(lst)) return kInfinity;  // zero product satisfies the bound
  return lst - ls - lt;
}

// Random section in F's orthogonal basis with a random nonempty support.
Vector RandomSection(const NANorm& f, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  std::bernoulli_distribution keep(0.5);
  const int dim = f.dim();
  Vector coords = Vector::Zero(dim);
  std::uniform_int_distribution<int> pick(0, dim - 1);
  coords(pick(rng)) = Complex(gauss(rng), gauss(rng));
  for (int i = 0; i < dim; ++i) {
    if (keep(rng)) coords(i) = Complex(gauss(rng), gauss(rng));
  }
  return f.basis() * coords;
}

std::vector<Rational> RandomExactSection(int dim, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coefficient(-5, 5);
  std::bernoulli_distribution keep(0.5);
  std::uniform_int_distribution<int> pick(0, dim - 1);
  std::vector<Rational> coords(static_cast<std::size_t>(dim), Rational(0));
  int anchor = pick(rng);
  int value = 0;
  while (value == 0) value = coefficient(rng);
  coords[static_cast<std::size_t>(anchor)] = value;
  for (int i = 0; i < dim; ++i) {
    if (i != anchor && keep(rng)) coords[static_cast<std::size_t>(i)] = coefficient(rng);
  }
  return coords;
}

std::string Describe(const std::vector<Rational>& coords) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < coords.size(); ++i) out << (i ? "," : "") << coords[i];
  out << "]";
  return out.str();
}

std::pair<int, int> RandomDegreePair(int max_total, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> total_dist(2, max_total);
  const int total = total_dist(rng);
  std::uniform_int_distribution<int> m_dist(1, total - 1);
  const int m = m_dist(rng);
  return {m, total - m};
}

ExactSubmultiplicativityReport CheckExactBasisPairs(const ExactGradedNA& filtration, const ExactRingProduct& ring,
                                                    int m, int n) {
  ExactSubmultiplicativityReport report;
  const ExactNANorm& fm = filtration.norm(m);
  const ExactNANorm& fn = filtration.norm(n);
  const ExactNANorm& fmn = filtration.norm(m + n);
  for (int i = 0; i < fm.dim(); ++i) {
    const auto s = ExactUnit(fm.dim(), i);
    for (int j = 0; j < fn.dim(); ++j) {
      const auto t = ExactUnit(fn.dim(), j);
      const auto st = ring(s, t);
      const auto lst = fmn.LogValue(st);
      if (!lst) continue;
      Record(report, *lst - fm.values()[static_cast<std::size_t>(i)] - fn.values()[static_cast<std::size_t>(j)],
             DescribePair(m, n, "e" + std::to_string(i), "e" + std::to_string(j)));
    }
  }
  return report;
}

void CheckExactSample(const ExactGradedNA& filtration, const ExactRingProduct& ring, int m, int n,
                      std::mt19937_64& rng, ExactSubmultiplicativityReport& report) {
  const ExactNANorm& fm = filtration.norm(m);
  const ExactNANorm& fn = filtration.norm(n);
  const ExactNANorm& fmn = filtration.norm(m + n);
  const auto s = RandomExactSection(fm.dim(), rng);
  const auto t = RandomExactSection(fn.dim(), rng);
  const auto st = ring(s, t);
  const auto lst = fmn.LogValue(st);
  if (!lst) return;
  Record(report, *lst - *fm.LogValue(s) - *fn.LogValue(t), DescribePair(m, n, Describe(s), Describe(t)));
}

SubmultiplicativityReport CheckBasisPairs(const GradedNA& filtration, const RingProduct& ring, int m, int n) {
  SubmultiplicativityReport report;
  const NANorm& fm = filtration.norm(m);
  const NANorm& fn = filtration.norm(n);
  const NANorm& fmn = filtration.norm(m + n);
  for (int i = 0; i < fm.dim(); ++i) {
    const Vector s = fm.basis().col(i);
    for (int j = 0; j < fn.dim(); ++j) {
      const Vector t = fn.basis().col(j);
      Record(report, Margin(fm, fn, fmn, s, t, ring(s, t)),
             DescribePair(m, n, "v" + std::to_string(i), "v" + std::to_string(j)));
    }
  }
  return report;
}

void CheckSample(const GradedNA& filtration, const RingProduct& ring, int m, int n, std::mt19937_64& rng,
                 SubmultiplicativityReport& report) {
  const NANorm& fm = filtration.norm(m);
  const NANorm& fn = filtration.norm(n);
  const NANorm& fmn = filtration.norm(m + n);
  const Vector s = RandomSection(fm, rng);
  const Vector t = RandomSection(fn, rng);
  Record(report, Margin(fm, fn, fmn, s, t, ring(s, t)), DescribePair(m, n, "random", "random"));
}

void RequireDecreasing(const PLFunction& f, bool multiplicative, bool allow_nondecreasing) {
  if (!f.IsDecreasing() && !(multiplicative && allow_nondecreasing)) {
    throw Error(ErrorKind::kNotDecreasing,
                "modification requires a decreasing function unless the filtration is multiplicative "
                "and allow_nondecreasing is set");
  }
}

}  // namespace

GradedHermitian GradedHermitian::Rescaled(double t) const {
  GradedHermitian source = *this;
  return GradedHermitian([source, t](int k) {
    const HermitianPiece& piece = source.piece(k);
    return HermitianPiece{piece.norm.Scaled(std::exp(k * t)), piece.basis};
  });
}

GradedNA ExactGradedNA::ToGradedNA() const {
  ExactGradedNA source = *this;
  return GradedNA([source](int k) { return source.norm(k).ToNANorm(); }, dim_exponent_, multiplicative_);
}

void CheckDegreeList(std::span<const int> k_list) {
  if (k_list.empty()) throw Error(ErrorKind::kInvalidArgument, "degree list is empty");
  for (std::size_t i = 0; i < k_list.size(); ++i) {
    if (k_list[i] < 1) throw Error(ErrorKind::kInvalidArgument, "degrees must be >= 1");
    if (i > 0 && k_list[i] <= k_list[i - 1]) {
      throw Error(ErrorKind::kInvalidArgument, "degree list must be strictly increasing");
    }
  }
}

DiscreteMeasure DhMeasureAtK(const GradedNA& filtration, int k, Normalization normalization) {
  if (k < 1) throw Error(ErrorKind::kInvalidArgument, "degree must be >= 1");
  const NANorm& norm = filtration.norm(k);
  const auto n = static_cast<std::size_t>(norm.dim());
  std::vector<double> atoms;
  atoms.reserve(n);
  for (double a : norm.values()) atoms.push_back(a / k);
  const double weight = normalization == Normalization::kRaw ? std::pow(static_cast<double>(k), -filtration.dim_exponent())
                                                             : 1.0 / static_cast<double>(n);
  std::vector<double> weights(n, weight);
  return DiscreteMeasure::Make(std::move(atoms), std::move(weights), normalization);
}

DhLimitEstimate EstimateDhLimit(const GradedNA& filtration, std::span<const int> k_list) {
  CheckDegreeList(k_list);
  std::vector<DiscreteMeasure> measures;
  for (int k : k_list) measures.push_back(DhMeasureAtK(filtration, k, Normalization::kProbability));
  DhLimitEstimate estimate{measures.back(), {}};
  for (std::size_t i = 1; i < measures.size(); ++i) {
    estimate.kolmogorov.push_back(PerKRecord{k_list[i], KolmogorovDistance(measures[i - 1], measures[i]), kNaN});
  }
  FillSuccessiveDifferences(estimate.kolmogorov);
  return estimate;
}

SubmultiplicativityReport CheckSubmultiplicativeNA(const GradedNA& filtration, const RingProduct& ring, int m, int n,
                                                   int samples, std::uint64_t seed) {
  if (m < 1 || n < 1) throw Error(ErrorKind::kInvalidArgument, "degrees must be >= 1");
  SubmultiplicativityReport report = CheckBasisPairs(filtration, ring, m, n);
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) CheckSample(filtration, ring, m, n, rng, report);
  return report;
}

ExactSubmultiplicativityReport CheckSubmultiplicativeNA(const ExactGradedNA& filtration,
                                                        const ExactRingProduct& ring, int m, int n, int samples,
                                                        std::uint64_t seed) {
  if (m < 1 || n < 1) throw Error(ErrorKind::kInvalidArgument, "degrees must be >= 1");
  ExactSubmultiplicativityReport report = CheckExactBasisPairs(filtration, ring, m, n);
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) CheckExactSample(filtration, ring, m, n, rng, report);
  return report;
}

ExactSubmultiplicativityReport CheckSubmultiplicativeUpTo(const ExactGradedNA& filtration,
                                                          const ExactRingProduct& ring, int max_total, int samples,
                                                          std::uint64_t seed) {
  if (max_total < 2) throw Error(ErrorKind::kInvalidArgument, "max_total must be >= 2");
  ExactSubmultiplicativityReport report;
  for (int total = 2; total <= max_total; ++total) {
    for (int m = 1; m < total; ++m) Merge(report, CheckExactBasisPairs(filtration, ring, m, total - m));
  }
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const auto [m, n] = RandomDegreePair(max_total, rng);
    CheckExactSample(filtration, ring, m, n, rng, report);
  }
  return report;
}

SubmultiplicativityReport CheckSubmultiplicativeUpTo(const GradedNA& filtration, const RingProduct& ring,
                                                     int max_total, int samples, std::uint64_t seed) {
  if (max_total < 2) throw Error(ErrorKind::kInvalidArgument, "max_total must be >= 2");
  SubmultiplicativityReport report;
  for (int total = 2; total <= max_total; ++total) {
    for (int m = 1; m < total; ++m) Merge(report, CheckBasisPairs(filtration, ring, m, total - m));
  }
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const auto [m, n] = RandomDegreePair(max_total, rng);
    CheckSample(filtration, ring, m, n, rng, report);
  }
  return report;
}

double CheckBoundedNA(const GradedNA& filtration, std::span<const int> k_list) {
  CheckDegreeList(k_list);
  double delta = 0.0;
  for (int k : k_list) {
    for (double a : filtration.norm(k).values()) delta = std::max(delta, std::abs(a) / k);
  }
  return delta;
}

GradedNA ModifyNA(const GradedNA& filtration, const PLFunction& f, bool allow_nondecreasing) {
  RequireDecreasing(f, filtration.multiplicative_on_basis(), allow_nondecreasing);
  GradedNA source = filtration;
  return GradedNA(
      [source, f](int k) {
        const NANorm& norm = source.norm(k);
        std::vector<double> values;
        values.reserve(norm.values().size());
        for (double a : norm.values()) values.push_back(a - k * f(a / k));
        return NANorm::FromBasis(norm.basis(), std::move(values));
      },
      filtration.dim_exponent(), false);
}

ExactGradedNA ModifyNA(const ExactGradedNA& filtration, const RationalPLFunction& f, bool allow_nondecreasing) {
  if (!f.IsDecreasing() && !(filtration.multiplicative_on_basis() && allow_nondecreasing)) {
    throw Error(ErrorKind::kNotDecreasing,
                "modification requires a decreasing function unless the filtration is multiplicative "
                "and allow_nondecreasing is set");
  }
  ExactGradedNA source = filtration;
  return ExactGradedNA(
      [source, f](int k) {
        const ExactNANorm& norm = source.norm(k);
        std::vector<Rational> values;
        values.reserve(norm.values().size());
        const Rational degree(k);
        for (const Rational& a : norm.values()) values.push_back(a - degree * f(a / degree));
        return ExactNANorm(std::move(values));
      },
      filtration.dim_exponent(), false);
}

HermitianPiece ModifyHermitianAt(const HermitianNorm& norm, const NANorm& filtration, const PLFunction& f, int k) {
  if (k < 1) throw Error(ErrorKind::kInvalidArgument, "degree must be >= 1");
  Apartment joint = AdaptJointBasis(norm, filtration);
  std::vector<double> rescale(static_cast<std::size_t>(norm.dim()));
  for (int i = 0; i < norm.dim(); ++i) {
    const double a = filtration.LogValue(joint.column(i));
    // RescaleInApartment multiplies ||J_i|| by e^{-r_i}; we want e^{k f}.
    rescale[static_cast<std::size_t>(i)] = -k * f(a / k);
  }
  HermitianNorm modified = RescaleInApartment(norm, joint, rescale);
  return HermitianPiece{std::move(modified), std::move(joint)};
}

GradedHermitian ModifyHermitian(const GradedHermitian& norms, const GradedNA& filtration, const PLFunction& f) {
  GradedHermitian source = norms;
  GradedNA filter = filtration;
  return GradedHermitian([source, filter, f](int k) {
    const HermitianNorm& norm = source.norm(k);
    const NANorm& na = filter.norm(k);
    if (norm.dim() != na.dim()) {
      throw Error(ErrorKind::kDimensionMismatch, "degree " + std::to_string(k) + ": norm and filtration differ in dimension");
    }
    return ModifyHermitianAt(norm, na, f, k);
  });
}

std::vector<PerKRecord> AsymptoticDp(const GradedHermitian& a, const GradedHermitian& b, double p,
                                     std::span<const int> k_list) {
  CheckExponent(p);
  return PerDegree(k_list, [&](int k) { return DpDistance(a.norm(k), b.norm(k), p) / k; });
}

std::vector<VolumeRecord> AsymptoticVol(const GradedHermitian& a, const GradedHermitian& b,
                                        std::span<const int> k_list) {
  CheckDegreeList(k_list);
  std::vector<VolumeRecord> records(k_list.size());
  ParallelFor(k_list.size(), [&](std::size_t i) {
    const int k = k_list[i];
    const HermitianNorm& na = a.norm(k);
    const HermitianNorm& nb = b.norm(k);
    const HermitianNorm joint_max = MaxNorm(na, nb);
    const double residual =
        std::abs(DpDistance(na, nb, 1.0) - DpDistance(na, joint_max, 1.0) - DpDistance(nb, joint_max, 1.0));
    records[i] = VolumeRecord{k, RelativeVolume(na, nb) / k, kNaN, residual / k};
  });
  FillSuccessiveDifferences(records);
  return records;
}

std::vector<PerKRecord> BernsteinMarkovGap(const GradedHermitian& a, const GradedHermitian& b,
                                           std::span<const int> k_list) {
  return PerDegree(k_list, [&](int k) { return DpDistance(a.norm(k), b.norm(k), kInfinity) / k; });
}

std::vector<PerKRecord> BernsteinMarkovGap(const GradedHermitian& a, const DiagonalLogNorms& b,
                                           std::span<const int> k_list) {
  return PerDegree(k_list, [&](int k) {
    const HermitianPiece& piece = a.piece(k);
    const int n = piece.norm.dim();
    if (!piece.norm.IsDiagonal() || !piece.basis.basis().isIdentity(0.0)) {
      throw Error(ErrorKind::kNonDiagonalPair,
                  "degree " + std::to_string(k) + ": Hermitian side is not diagonal on the monomial basis");
    }
    const std::vector<double> log_other = b(k);
    if (static_cast<int>(log_other.size()) != n) {
      throw Error(ErrorKind::kDimensionMismatch, "degree " + std::to_string(k) + ": basis sizes differ");
    }
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const double log_hermitian = 0.5 * std::log(piece.norm.gram()(i, i).real());
      worst = std::max(worst, std::abs(log_hermitian - log_other[static_cast<std::size_t>(i)]));
    }
    return worst / k;
  });
}

}  // namespace flatcone
