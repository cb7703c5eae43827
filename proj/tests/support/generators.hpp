#ifndef FLATCONE_TESTS_GENERATORS_HPP_
#define FLATCONE_TESTS_GENERATORS_HPP_

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "flatcone/convex.hpp"
#include "flatcone/norms.hpp"
#include "flatcone/rational.hpp"

namespace flatcone::testing {

using Rng = std::mt19937_64;

inline Vector RandomVector(Rng& rng, int dim) {
  std::normal_distribution<double> normal;
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(normal(rng), normal(rng));
  return v;
}

inline Matrix RandomMatrix(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(normal(rng), normal(rng));
  }
  return m;
}

// A A^* + shift I with a random scale spread, so minima are not all tiny.
inline HermitianNorm RandomHermitian(Rng& rng, int dim) {
  const Matrix a = RandomMatrix(rng, dim, dim);
  std::uniform_real_distribution<double> log_scale(-1.5, 1.5);
  Matrix gram = a * a.adjoint() + 0.2 * Matrix::Identity(dim, dim);
  gram *= std::exp(log_scale(rng));
  return HermitianNorm::FromGram(0.5 * (gram + gram.adjoint()));
}

inline Matrix RandomBasis(Rng& rng, int dim) {
  return Matrix::Identity(dim, dim) * 2.0 + 0.6 * RandomMatrix(rng, dim, dim);
}

inline std::vector<double> RandomValues(Rng& rng, int dim, double spread = 3.0) {
  std::uniform_real_distribution<double> uniform(-spread, spread);
  std::vector<double> a(static_cast<std::size_t>(dim));
  for (double& x : a) x = uniform(rng);
  return a;
}

// Convex decreasing PL function on [lower, upper] with `pieces` pieces.
inline PLFunction RandomConvexDecreasing(Rng& rng, double lower, double upper, int pieces) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> xs{lower, upper};
  for (int j = 1; j < pieces; ++j) xs.push_back(lower + (upper - lower) * (0.05 + 0.9 * unit(rng)));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<double> slopes;
  for (std::size_t j = 1; j < xs.size(); ++j) slopes.push_back(-3.0 * unit(rng));
  std::sort(slopes.begin(), slopes.end());
  std::vector<double> ys{2.0 * unit(rng) - 1.0};
  for (std::size_t j = 1; j < xs.size(); ++j) ys.push_back(ys.back() + slopes[j - 1] * (xs[j] - xs[j - 1]));
  return PLFunction::Make(std::move(xs), std::move(ys));
}

// Rational convex decreasing PL function on [0, 1]: breakpoints on a 1/12
// grid, slopes with small denominators.
inline RationalPLFunction RandomRationalConvexDecreasing(Rng& rng, int pieces) {
  std::uniform_int_distribution<int> grid(1, 11);
  std::vector<int> cuts;
  while (static_cast<int>(cuts.size()) < pieces - 1) {
    const int c = grid(rng);
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<Rational> xs{Rational(0)};
  for (int c : cuts) xs.emplace_back(c, 12);
  xs.emplace_back(1);
  std::uniform_int_distribution<int> numerator(0, 40);
  std::uniform_int_distribution<int> denominator(1, 7);
  std::vector<Rational> slopes;
  for (std::size_t j = 1; j < xs.size(); ++j) slopes.push_back(-Rational(numerator(rng), denominator(rng)));
  std::sort(slopes.begin(), slopes.end());
  std::vector<Rational> ys{Rational(numerator(rng) - 20, denominator(rng))};
  for (std::size_t j = 1; j < xs.size(); ++j) ys.push_back(ys.back() + slopes[j - 1] * (xs[j] - xs[j - 1]));
  return RationalPLFunction::Make(std::move(xs), std::move(ys));
}

inline double RelativeGap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace flatcone::testing

#endif  // FLATCONE_TESTS_GENERATORS_HPP_
