#include "whichway/knowledge.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace whichway {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kClickFloor = 1e-12;

GuessQuality quality_from_overlaps(double pa, double pb) {
  if ((pa <= 1e-30 && pb <= 1e-30) || std::abs(pa - pb) <= kTieTol) {
    return {0.5, Path::Tie};
  }
  if (pa > pb) return {pa / (pa + pb), Path::A};
  return {pb / (pa + pb), Path::B};
}

void require_wwd_vector(const Vec& w) {
  if (w.size() != kWwdDim) {
    throw DimensionMismatchError("readout vector must have dim 3");
  }
}

}  // namespace

GuessQuality guess_quality(const Vec& w, const WwdStatePair& pair) {
  require_wwd_vector(w);
  const double pa = std::norm(w.dot(pair.chi_a));
  const double pb = std::norm(w.dot(pair.chi_b));
  return quality_from_overlaps(pa, pb);
}

namespace detail {

void compute_overlaps(const OrthonormalBasis& basis, const WwdStatePair& pair,
                      BasisOverlaps& out) {
  out.n = basis.dim();
  if (out.n != kWwdDim) {
    throw DimensionMismatchError("readout basis must have 3 vectors");
  }
  for (int i = 0; i < out.n; ++i) {
    const Vec& w = basis.vectors[i];
    require_wwd_vector(w);
    out.a[i] = w.dot(pair.chi_a);
    out.b[i] = w.dot(pair.chi_b);
    out.q[i] = quality_from_overlaps(std::norm(out.a[i]), std::norm(out.b[i])).q;
  }
}

double knowledge_at_overlaps(const BasisOverlaps& ov, double delta, double visibility) {
  if (click_probability(delta, visibility) <= kClickFloor) {
    throw DarkFringeError("knowledge_at: detection probability vanishes at this phase");
  }
  // <psi_delta, W_i|Psi> = (a_i + e^{-i delta} b_i)/2; the conditional
  // probabilities are normalized by their own sum.
  const Complex phase = std::exp(Complex(0.0, -delta));
  double sum = 0.0, weighted = 0.0;
  for (int i = 0; i < ov.n; ++i) {
    const double w2 = std::norm(ov.a[i] + phase * ov.b[i]);
    sum += w2;
    weighted += w2 * ov.q[i];
  }
  return 2.0 * weighted / sum - 1.0;
}

}  // namespace detail

std::vector<ReadoutOutcome> readout_probs(const OrthonormalBasis& basis,
                                          const DetectorCoupling& c) {
  const WwdStatePair pair = wwd_states(c);
  const Mat rho = rho_wwd(joint_state(c));
  std::vector<ReadoutOutcome> outcomes(basis.dim());
  for (int i = 0; i < basis.dim(); ++i) {
    const Vec& w = basis.vectors[i];
    require_wwd_vector(w);
    ReadoutOutcome& o = outcomes[i];
    o.index = i;
    o.probability = std::real(w.dot((rho * w).eval()));
    const GuessQuality gq = guess_quality(w, pair);
    o.guess_quality = gq.q;
    o.guessed_path = gq.path;
  }
  return outcomes;
}

KnowledgeValue knowledge_avg(const OrthonormalBasis& basis, const DetectorCoupling& c) {
  double likelihood = 0.0;
  for (const ReadoutOutcome& o : readout_probs(basis, c)) {
    likelihood += o.probability * o.guess_quality;
  }
  return {likelihood, 2.0 * likelihood - 1.0};
}

std::vector<ReadoutOutcome> conditional_probs(const OrthonormalBasis& basis,
                                              double delta, const DetectorCoupling& c) {
  if (click_probability(delta, c.visibility) <= kClickFloor) {
    throw DarkFringeError("conditional_probs: QO is never found at this phase");
  }
  const WwdStatePair pair = wwd_states(c);
  detail::BasisOverlaps ov;
  detail::compute_overlaps(basis, pair, ov);

  const Complex phase = std::exp(Complex(0.0, -delta));
  std::array<double, kWwdDim> w2{};
  double sum = 0.0;
  for (int i = 0; i < ov.n; ++i) {
    w2[i] = 0.25 * std::norm(ov.a[i] + phase * ov.b[i]);
    sum += w2[i];
  }

  std::vector<ReadoutOutcome> outcomes(ov.n);
  for (int i = 0; i < ov.n; ++i) {
    ReadoutOutcome& o = outcomes[i];
    o.index = i;
    o.probability = w2[i] / sum;
    const GuessQuality gq = quality_from_overlaps(std::norm(ov.a[i]), std::norm(ov.b[i]));
    o.guess_quality = gq.q;
    o.guessed_path = gq.path;
  }
  return outcomes;
}

KnowledgeValue knowledge_at(const OrthonormalBasis& basis, double delta,
                            const DetectorCoupling& c) {
  detail::BasisOverlaps ov;
  detail::compute_overlaps(basis, wwd_states(c), ov);
  const double k = detail::knowledge_at_overlaps(ov, delta, c.visibility);
  return {0.5 * (k + 1.0), k};
}

OrthonormalBasis natural_basis() {
  OrthonormalBasis basis;
  basis.vectors.resize(kWwdDim);
  for (int i = 0; i < kWwdDim; ++i) {
    basis.vectors[i] = Vec::Zero(kWwdDim);
    basis.vectors[i](i) = 1.0;
  }
  return basis;
}

OrthonormalBasis canonical_basis(const DetectorCoupling& c) {
  const WwdStatePair pair = wwd_states(c);
  const Mat e = pair.chi_a * pair.chi_a.adjoint() - pair.chi_b * pair.chi_b.adjoint();
  return hermitian_eig(e).eigenvectors;
}

double natural_k_closed(double visibility) { return 1.0 - visibility; }

double canonical_k_closed(double visibility) {
  return std::sqrt(std::max(0.0, 1.0 - visibility * visibility));
}

double natural_k_at_closed(double delta, double visibility) {
  const double denom = 1.0 + visibility * std::cos(delta);
  if (denom <= kClickFloor) {
    throw DarkFringeError("natural_k_at_closed: dark fringe");
  }
  return (1.0 - visibility) / denom;
}

namespace {

// Composite Simpson on [lo, hi] with `panels` panels (made even).
double simpson(const std::function<double(double)>& g, double lo, double hi, int panels) {
  if (panels % 2 != 0) ++panels;
  const double h = (hi - lo) / panels;
  double acc = 0.0;
  for (int k = 0; k <= panels; ++k) {
    const double x = (k == panels) ? hi : lo + k * h;
    const double y = g(x);
    if (!std::isfinite(y)) {
      throw NonFiniteError("phase_average: non-finite integrand at delta = " +
                           std::to_string(x));
    }
    const double w = (k == 0 || k == panels) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    acc += w * y;
  }
  return acc * h / 3.0;
}

}  // namespace

double phase_average(const std::function<double(double)>& k_of_delta,
                     double visibility, std::span<const double> breakpoints) {
  std::vector<double> nodes{0.0};
  for (double b : breakpoints) {
    if (b > 0.0 && b < kTwoPi) nodes.push_back(b);
  }
  nodes.push_back(kTwoPi);
  std::sort(nodes.begin(), nodes.end());

  const auto integrand = [&](double d) {
    const double p = pattern(d, visibility);
    try {
      return k_of_delta(d) * p;
    } catch (const DarkFringeError&) {
      // K is undefined only where the weight vanishes (V = 1, delta = pi);
      // the product has limit 0 there.
      if (click_probability(d, visibility) <= 1e-12) return 0.0;
      throw;
    }
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (nodes[i + 1] - nodes[i] < 1e-15) continue;
    total += simpson(integrand, nodes[i], nodes[i + 1], 4096);
  }
  return total;
}

}  // namespace whichway
