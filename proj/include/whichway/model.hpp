#ifndef WHICHWAY_MODEL_HPP
#define WHICHWAY_MODEL_HPP

#include "whichway/linalg.hpp"
#include "whichway/rng.hpp"

namespace whichway {

/// Detector-qubit interaction strength and the quantities derived from it.
/// alpha^2 + beta^2 = 1; the interference visibility is V = alpha^2.
/// Both amplitudes are stored real and non-negative: a relative phase
/// between the two detector states only shifts the pattern and carries no
/// additional physics.
struct DetectorCoupling {
  double beta;        // interaction strength, in [0,1]
  double alpha;       // sqrt(1 - beta^2)
  double visibility;  // alpha^2
};

/// Throws BoundaryError unless 0 <= beta <= 1.
DetectorCoupling make_coupling(double beta);

/// Coupling for a requested visibility V = 1 - beta^2.
DetectorCoupling coupling_for_visibility(double visibility);

// Fixed ordering of the populated detector subspace: |00>, |10>, |01>.
// The |11> direction is never occupied and is dropped.
inline constexpr int kWwdDim = 3;

/// The two detector states chi_a = (alpha, beta, 0), chi_b = (alpha, 0, beta)
/// in the fixed subspace order.
struct WwdStatePair {
  Vec chi_a;  // dim 3, unit norm
  Vec chi_b;  // dim 3, unit norm
};

WwdStatePair wwd_states(const DetectorCoupling& c);

/// Normalized state of path qubit x detector after the interaction:
/// (|a> chi_a + |b> chi_b)/sqrt(2). Row = path (0 = a, 1 = b),
/// column = detector subspace index.
struct JointState {
  Eigen::Matrix<Complex, 2, kWwdDim> amplitudes;
};

JointState joint_state(const DetectorCoupling& c);

/// Reduced detector state, 3x3: (|chi_a><chi_a| + |chi_b><chi_b|)/2.
Mat rho_wwd(const JointState& s);

/// Reduced path-qubit state, 2x2; off-diagonal magnitude V/2.
Mat rho_qo(const JointState& s);

/// Detection probability density over one period:
/// P(delta) = (1 + V cos delta) / (2 pi).
double pattern(double delta, double visibility);

/// Projection of the joint state onto the phase state
/// |psi_delta> = (|a> + e^{i delta} |b>)/sqrt(2); returns the unnormalized
/// conditional detector vector (chi_a + e^{-i delta} chi_b)/2, whose
/// squared norm is the click probability (1 + V cos delta)/2.
Vec conditional_wwd_state(double delta, const JointState& s);

/// Click probability (1 + V cos delta)/2 of the fixed-delta projection.
double click_probability(double delta, double visibility);

/// Draw a phase in [0, 2pi) distributed as the interference pattern, by
/// inverting the cumulative F(delta) = (delta + V sin delta)/(2 pi) with
/// safeguarded Newton bracketing to 1e-12.
double sample_delta(double visibility, SplitRng& rng);

}  // namespace whichway

#endif
