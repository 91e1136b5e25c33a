#ifndef WHICHWAY_KNOWLEDGE_HPP
#define WHICHWAY_KNOWLEDGE_HPP

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "whichway/linalg.hpp"
#include "whichway/model.hpp"

namespace whichway {

enum class Path { A, B, Tie };

/// One readout outcome of a detector observable: its occurrence
/// probability (unconditional p_i or phase-conditional p_i(delta)) and
/// the best-guess quality q_i = max overlap / total overlap.
struct ReadoutOutcome {
  int index = 0;
  double probability = 0.0;    // in [0,1]; sums to 1 over a basis
  double guess_quality = 0.5;  // in [0.5,1]
  Path guessed_path = Path::Tie;
};

/// Likelihood of a correct path guess and its rescaling K = 2L - 1.
struct KnowledgeValue {
  double likelihood;  // in [0.5, 1]
  double knowledge;   // in [0, 1]
};

struct GuessQuality {
  double q;
  Path path;
};

// Squared-overlap tie tolerance: below numerical noise the two overlaps
// count as equal and the guess carries no information (q = 0.5).
inline constexpr double kTieTol = 1e-12;

/// Best-guess quality of a single readout vector w (unit norm, dim 3):
/// q = max(|<w|chi_a>|^2, |<w|chi_b>|^2) / (|<w|chi_a>|^2 + |<w|chi_b>|^2).
/// Overlaps tied within kTieTol, or both below 1e-30, give q = 0.5 / Tie
/// (such outcomes are weighted by p_i = 0 anyway).
GuessQuality guess_quality(const Vec& w, const WwdStatePair& pair);

/// Readout probabilities p_i = <W_i| rho_WWD |W_i> with guess data attached.
std::vector<ReadoutOutcome> readout_probs(const OrthonormalBasis& basis,
                                          const DetectorCoupling& c);

/// Phase-averaged knowledge of a fixed observable: K = 2 sum_i p_i q_i - 1.
KnowledgeValue knowledge_avg(const OrthonormalBasis& basis, const DetectorCoupling& c);

/// Conditional readout probabilities at a fixed detection phase,
/// p_i(delta) = |<psi_delta, W_i|Psi>|^2 / sum_j |<psi_delta, W_j|Psi>|^2.
/// Throws DarkFringeError when the click probability (1 + V cos delta)/2
/// is at or below 1e-12 (the object is never detected there).
std::vector<ReadoutOutcome> conditional_probs(const OrthonormalBasis& basis,
                                              double delta, const DetectorCoupling& c);

/// Phase-dependent knowledge K(delta) = 2 sum_i p_i(delta) q_i - 1.
KnowledgeValue knowledge_at(const OrthonormalBasis& basis, double delta,
                            const DetectorCoupling& c);

/// Local per-qubit readout basis {|00>, |10>, |01>} in the fixed order.
OrthonormalBasis natural_basis();

/// Eigenbasis of |chi_a><chi_a| - |chi_b><chi_b|, the fixed-basis optimum.
OrthonormalBasis canonical_basis(const DetectorCoupling& c);

// Closed forms.
double natural_k_closed(double visibility);                     // 1 - V
double canonical_k_closed(double visibility);                   // sqrt(1 - V^2)
double natural_k_at_closed(double delta, double visibility);    // (1-V)/(1+V cos d)

/// Alias: the canonical knowledge is the distinguishability.
inline double distinguishability(double visibility) { return canonical_k_closed(visibility); }

/// Pattern-weighted phase average integral over one period:
/// int_0^{2pi} K(delta) P(delta) d delta, composite Simpson with 4096
/// panels per smooth piece. `breakpoints` lists interior kink locations
/// (e.g. delta_star and 2pi - delta_star for the switched protocol).
/// Throws NonFiniteError on NaN/Inf integrand samples.
double phase_average(const std::function<double(double)>& k_of_delta,
                     double visibility, std::span<const double> breakpoints = {});

namespace detail {

/// Precomputed per-vector overlap data used by the evaluation kernels.
struct BasisOverlaps {
  // a_i = <W_i|chi_a>, b_i = <W_i|chi_b>, per basis vector.
  std::array<Complex, kWwdDim> a, b;
  std::array<double, kWwdDim> q;  // guess qualities
  int n = 0;
};

void compute_overlaps(const OrthonormalBasis& basis, const WwdStatePair& pair,
                      BasisOverlaps& out);

/// K(delta) for precomputed overlaps; single code path shared by
/// knowledge_at and the feed-forward optimizer's inner loop.
double knowledge_at_overlaps(const BasisOverlaps& ov, double delta, double visibility);

}  // namespace detail

}  // namespace whichway

#endif
