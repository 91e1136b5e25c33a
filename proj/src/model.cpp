#include "whichway/model.hpp"

#include <cmath>
#include <numbers>

namespace whichway {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

DetectorCoupling make_coupling(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw BoundaryError("make_coupling: beta must be in [0,1], got " +
                        std::to_string(beta));
  }
  DetectorCoupling c;
  c.beta = beta;
  c.alpha = std::sqrt(std::max(0.0, 1.0 - beta * beta));
  c.visibility = c.alpha * c.alpha;
  return c;
}

DetectorCoupling coupling_for_visibility(double visibility) {
  if (!(visibility >= 0.0 && visibility <= 1.0)) {
    throw BoundaryError("coupling_for_visibility: V must be in [0,1], got " +
                        std::to_string(visibility));
  }
  return make_coupling(std::sqrt(std::max(0.0, 1.0 - visibility)));
}

WwdStatePair wwd_states(const DetectorCoupling& c) {
  WwdStatePair pair;
  pair.chi_a.resize(kWwdDim);
  pair.chi_b.resize(kWwdDim);
  pair.chi_a << c.alpha, c.beta, 0.0;
  pair.chi_b << c.alpha, 0.0, c.beta;
  return pair;
}

JointState joint_state(const DetectorCoupling& c) {
  const WwdStatePair pair = wwd_states(c);
  JointState s;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < kWwdDim; ++k) {
    s.amplitudes(0, k) = inv_sqrt2 * pair.chi_a(k);
    s.amplitudes(1, k) = inv_sqrt2 * pair.chi_b(k);
  }
  return s;
}

Mat rho_wwd(const JointState& s) {
  Mat rho = Mat::Zero(kWwdDim, kWwdDim);
  for (int path = 0; path < 2; ++path) {
    for (int i = 0; i < kWwdDim; ++i)
      for (int j = 0; j < kWwdDim; ++j)
        rho(i, j) += s.amplitudes(path, i) * std::conj(s.amplitudes(path, j));
  }
  return rho;
}

Mat rho_qo(const JointState& s) {
  Mat rho = Mat::Zero(2, 2);
  for (int k = 0; k < kWwdDim; ++k) {
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q)
        rho(p, q) += s.amplitudes(p, k) * std::conj(s.amplitudes(q, k));
  }
  return rho;
}

double pattern(double delta, double visibility) {
  if (!(visibility >= 0.0 && visibility <= 1.0)) {
    throw BoundaryError("pattern: V must be in [0,1]");
  }
  return (1.0 + visibility * std::cos(delta)) / kTwoPi;
}

double click_probability(double delta, double visibility) {
  return 0.5 * (1.0 + visibility * std::cos(delta));
}

Vec conditional_wwd_state(double delta, const JointState& s) {
  const Complex phase = std::exp(Complex(0.0, -delta));
  Vec v(kWwdDim);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < kWwdDim; ++k) {
    v(k) = inv_sqrt2 * (s.amplitudes(0, k) + phase * s.amplitudes(1, k));
  }
  return v;
}

double sample_delta(double visibility, SplitRng& rng) {
  if (!(visibility >= 0.0 && visibility <= 1.0)) {
    throw BoundaryError("sample_delta: V must be in [0,1]");
  }
  const double u = rng.uniform();
  // Invert F(delta) = (delta + V sin delta)/(2 pi) = u. F is monotone;
  // Newton steps safeguarded by a maintained bracket, converged when the
  // step (or the bracket) is below 1e-12.
  const double target = u * kTwoPi;
  double lo = 0.0, hi = kTwoPi;
  double x = target;  // exact for V = 0, good start otherwise
  for (int iter = 0; iter < 200; ++iter) {
    const double f = x + visibility * std::sin(x) - target;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double fp = 1.0 + visibility * std::cos(x);
    double next = (fp > 1e-12) ? x - f / fp : 0.5 * (lo + hi);
    if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
    const bool done = std::abs(next - x) <= 1e-13 || hi - lo <= 1e-12;
    x = next;
    if (done) break;
  }
  return x;
}

}  // namespace whichway
