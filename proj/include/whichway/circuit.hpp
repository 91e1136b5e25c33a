#ifndef WHICHWAY_CIRCUIT_HPP
#define WHICHWAY_CIRCUIT_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include "whichway/feedforward.hpp"
#include "whichway/knowledge.hpp"

namespace whichway {

// Three-qubit register, tensor order (QO, WWD_a, WWD_b) with the QO as
// the most significant qubit: basis index = qo*4 + a*2 + b.
inline constexpr int kNumQubits = 3;
inline constexpr int kQubitB = 0;
inline constexpr int kQubitA = 1;
inline constexpr int kQubitQo = 2;

using State8 = Eigen::Matrix<Complex, 8, 1>;

struct CircuitState {
  State8 amplitudes = State8::Zero();
  std::vector<std::pair<std::string, int>> classical_record;

  static CircuitState ground() {
    CircuitState s;
    s.amplitudes(0) = 1.0;
    return s;
  }

  double norm_sq() const { return amplitudes.squaredNorm(); }
};

struct Gate {
  enum class Kind { Hadamard, PauliX, ControlledRy, Phase };
  Kind kind;
  int q0 = 0;          // target (Hadamard/PauliX/Phase) or control (ControlledRy)
  int q1 = 0;          // target of ControlledRy
  double angle = 0.0;  // rotation angle (ControlledRy) or phase (Phase)

  static Gate hadamard(int q) { return {Kind::Hadamard, q, 0, 0.0}; }
  static Gate pauli_x(int q) { return {Kind::PauliX, q, 0, 0.0}; }
  static Gate controlled_ry(int control, int target, double angle) {
    return {Kind::ControlledRy, control, target, angle};
  }
  static Gate phase(int q, double phi) { return {Kind::Phase, q, 0, phi}; }
};

/// Apply a unitary gate in place. Throws BoundaryError on a bad qubit index.
void apply_gate(CircuitState& state, const Gate& gate);

/// Slit passage plus detector interaction of strength beta = sin(theta):
/// H on the QO, then an X-conjugated controlled R_y(2 theta) onto WWD_a
/// (sensitive to path a = |0>) and a plain one onto WWD_b. Verifies that
/// the |11> detector direction stays unpopulated.
CircuitState prepare_interaction(double theta);

/// Measure one qubit in the computational basis; collapses and records.
int measure_qubit(CircuitState& state, int qubit, SplitRng& rng,
                  const std::string& label = "qubit");

/// Measure the detector pair in a 3-outcome basis of the populated
/// subspace (vectors in the fixed order |00>, |10>, |01>). Outcome
/// sampled by the Born rule; state collapses onto basis vector x QO.
/// Throws InternalConsistencyError if the outcome probabilities fail to
/// sum to 1 within 1e-10 (e.g. leaked |11> amplitude).
int measure_wwd(CircuitState& state, const OrthonormalBasis& basis, SplitRng& rng);

/// Project the QO onto the psi_delta / orthogonal port pair: Phase(-delta)
/// then Hadamard on the QO, then a computational measurement. Returns 0
/// for the psi_delta port.
int measure_phase_port(CircuitState& state, double delta, SplitRng& rng);

enum class MeasurementOrder { QoFirst, WwdFirst };

/// Empirical counts from repeated single-shot runs.
struct ShotTally {
  long long total = 0;
  // Key layout by run type:
  //   guessing game:     {wwd outcome, guessed path (0=A,1=B), true path}
  //   phase-conditioned: {wwd outcome, -1, port (0 = psi_delta)}
  //   feed-forward demo: {wwd outcome, guessed path, grid index}
  std::map<std::array<int, 3>, long long> counts;
  bool starved = false;      // conditional sample count fell below 100
  double k_estimate = 0.0;   // protocol-level knowledge estimate
  double k_std_error = 0.0;  // standard error of k_estimate

  long long accepted() const;                  // shots in the psi_delta port
  std::array<double, 3> empirical_p() const;   // outcome frequencies
  std::array<double, 3> empirical_q() const;   // per-outcome correct-guess rate
  std::array<double, 3> conditional_p() const; // outcome freq given port 0
};

/// Full which-way guessing game: prepare, read the detector in `basis`,
/// guess the path by the argmax rule, then measure the true path.
ShotTally run_guessing_game(double theta, const OrthonormalBasis& basis,
                            long long shots, SplitRng& rng);

/// Phase-conditioned statistics at fixed delta: project the QO onto the
/// psi_delta port and read the detector, in either subsystem order (the
/// joint statistics must not depend on it).
ShotTally run_phase_conditioned(double theta, const OrthonormalBasis& basis,
                                double delta, long long shots, SplitRng& rng,
                                MeasurementOrder order = MeasurementOrder::QoFirst);

/// Monte Carlo run of the feed-forward protocol: draw delta from the
/// pattern, retry the fixed-delta port projection until it clicks (screen
/// detection), read the detector in the nearest-grid-point basis of
/// `curve`, and score with the analytic guess quality of the observed
/// outcome. k_estimate converges to the curve's pattern-weighted average
/// within statistical plus grid tolerance.
ShotTally run_feedforward_demo(double theta, const KnowledgeCurve& curve,
                               long long shots, SplitRng& rng);

}  // namespace whichway

#endif
