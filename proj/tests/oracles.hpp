#ifndef WHICHWAY_TESTS_ORACLES_HPP
#define WHICHWAY_TESTS_ORACLES_HPP

// Independent oracles used by the tests. Everything here is deliberately
// written against first principles (characteristic polynomials, bisection,
// brute-force quadrature) rather than through the library's own code
// paths, so the two routes can check each other.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "whichway/linalg.hpp"

namespace oracles {

inline constexpr double kPi = std::numbers::pi;

/// Real roots of x^3 + p2 x^2 + p1 x + p0 = 0 via Cardano/trigonometric
/// form (all roots real for Hermitian characteristic polynomials).
inline std::vector<double> cubic_real_roots(double p2, double p1, double p0) {
  const double q = (3.0 * p1 - p2 * p2) / 9.0;
  const double r = (9.0 * p2 * p1 - 27.0 * p0 - 2.0 * p2 * p2 * p2) / 54.0;
  const double shift = -p2 / 3.0;
  const double disc = q * q * q + r * r;
  std::vector<double> roots;
  if (disc > 1e-30) {
    // One real root (should not happen for Hermitian input, kept anyway).
    const double s = std::cbrt(r + std::sqrt(disc));
    const double t = std::cbrt(r - std::sqrt(disc));
    roots = {shift + s + t};
  } else {
    const double mq = std::max(-q, 0.0);
    const double theta = std::acos(std::clamp(
        r / std::max(std::sqrt(mq * mq * mq), 1e-300), -1.0, 1.0));
    for (int k = 0; k < 3; ++k) {
      roots.push_back(shift + 2.0 * std::sqrt(mq) * std::cos((theta + 2.0 * kPi * k) / 3.0));
    }
  }
  std::sort(roots.rbegin(), roots.rend());
  return roots;
}

/// Eigenvalues of a 3x3 Hermitian matrix via its characteristic polynomial,
/// sorted descending.
inline std::vector<double> eig3_charpoly(const whichway::Mat& m) {
  const auto re = [](const std::complex<double>& z) { return z.real(); };
  const double tr = re(m(0, 0) + m(1, 1) + m(2, 2));
  // Sum of principal 2x2 minors.
  double m2 = 0.0;
  const int idx[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (const auto& ij : idx) {
    const int i = ij[0], j = ij[1];
    m2 += re(m(i, i) * m(j, j) - m(i, j) * m(j, i));
  }
  const double det =
      re(m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)));
  // det(lambda I - M) = lambda^3 - tr lambda^2 + m2 lambda - det
  return cubic_real_roots(-tr, m2, -det);
}

/// Monotone-bracket bisection: root of f in [lo, hi] where the sign flips.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-13) {
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((flo <= 0.0) == (fm <= 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Adaptive-ish Simpson quadrature with a fixed fine grid; good to ~1e-12
/// for the smooth integrands used here.
inline double simpson(const std::function<double(double)>& f, double lo, double hi,
                      int panels = 20000) {
  if (panels % 2) ++panels;
  const double h = (hi - lo) / panels;
  double acc = f(lo) + f(hi);
  for (int k = 1; k < panels; ++k) {
    acc += f(lo + k * h) * (k % 2 ? 4.0 : 2.0);
  }
  return acc * h / 3.0;
}

/// Empirical Kolmogorov-Smirnov distance against the uniform CDF on [0, 2pi).
inline double ks_uniform(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = samples[i] / (2.0 * kPi);
    d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    d = std::max(d, std::abs(cdf - static_cast<double>(i + 1) / n));
  }
  return d;
}

}  // namespace oracles

#endif
