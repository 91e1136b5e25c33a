#include "whichway/circuit.hpp"

#include <cmath>
#include <numbers>

namespace whichway {

namespace {

constexpr int kDim = 8;
constexpr double kInvSqrt2 = 0.70710678118654752440;

// Detector-subspace component -> two-qubit index (a*2 + b),
// in the fixed order |00>, |10>, |01>.
constexpr int kSubspaceToPair[kWwdDim] = {0, 2, 1};
constexpr int kPairEleven = 3;

void require_qubit(int q) {
  if (q < 0 || q >= kNumQubits) {
    throw BoundaryError("invalid qubit index " + std::to_string(q));
  }
}

}  // namespace

void apply_gate(CircuitState& state, const Gate& gate) {
  State8& amp = state.amplitudes;
  switch (gate.kind) {
    case Gate::Kind::Hadamard: {
      require_qubit(gate.q0);
      const int mask = 1 << gate.q0;
      for (int i = 0; i < kDim; ++i) {
        if (i & mask) continue;
        const Complex lo = amp(i), hi = amp(i | mask);
        amp(i) = kInvSqrt2 * (lo + hi);
        amp(i | mask) = kInvSqrt2 * (lo - hi);
      }
      break;
    }
    case Gate::Kind::PauliX: {
      require_qubit(gate.q0);
      const int mask = 1 << gate.q0;
      for (int i = 0; i < kDim; ++i) {
        if (i & mask) continue;
        std::swap(amp(i), amp(i | mask));
      }
      break;
    }
    case Gate::Kind::ControlledRy: {
      require_qubit(gate.q0);
      require_qubit(gate.q1);
      if (gate.q0 == gate.q1) {
        throw BoundaryError("controlled rotation needs distinct qubits");
      }
      const int cmask = 1 << gate.q0;
      const int tmask = 1 << gate.q1;
      const double c = std::cos(0.5 * gate.angle);
      const double s = std::sin(0.5 * gate.angle);
      for (int i = 0; i < kDim; ++i) {
        if (!(i & cmask) || (i & tmask)) continue;
        const Complex lo = amp(i), hi = amp(i | tmask);
        amp(i) = c * lo - s * hi;
        amp(i | tmask) = s * lo + c * hi;
      }
      break;
    }
    case Gate::Kind::Phase: {
      require_qubit(gate.q0);
      const int mask = 1 << gate.q0;
      const Complex rot = std::exp(Complex(0.0, gate.angle));
      for (int i = 0; i < kDim; ++i) {
        if (i & mask) amp(i) *= rot;
      }
      break;
    }
  }
}

CircuitState prepare_interaction(double theta) {
  CircuitState state = CircuitState::ground();
  apply_gate(state, Gate::hadamard(kQubitQo));
  // Path a = |0> marks WWD_a; conjugate the control with bit flips.
  apply_gate(state, Gate::pauli_x(kQubitQo));
  apply_gate(state, Gate::controlled_ry(kQubitQo, kQubitA, 2.0 * theta));
  apply_gate(state, Gate::pauli_x(kQubitQo));
  apply_gate(state, Gate::controlled_ry(kQubitQo, kQubitB, 2.0 * theta));

  if (std::abs(state.norm_sq() - 1.0) > 1e-13) {
    throw InternalConsistencyError("prepare_interaction: norm drift");
  }
  const double leak = std::norm(state.amplitudes(kPairEleven)) +
                      std::norm(state.amplitudes(4 | kPairEleven));
  if (leak > 1e-12) {
    throw InternalConsistencyError("prepare_interaction: |11> detector leakage");
  }
  return state;
}

int measure_qubit(CircuitState& state, int qubit, SplitRng& rng,
                  const std::string& label) {
  require_qubit(qubit);
  State8& amp = state.amplitudes;
  const int mask = 1 << qubit;
  double p1 = 0.0;
  for (int i = 0; i < kDim; ++i) {
    if (i & mask) p1 += std::norm(amp(i));
  }
  const double total = state.norm_sq();
  if (std::abs(total - 1.0) > 1e-10) {
    throw InternalConsistencyError("measure_qubit: state norm " + std::to_string(total));
  }
  const int outcome = (rng.uniform() < p1) ? 1 : 0;
  const double p = outcome ? p1 : 1.0 - p1;
  const double scale = 1.0 / std::sqrt(p);
  for (int i = 0; i < kDim; ++i) {
    if (((i & mask) != 0) != (outcome != 0)) {
      amp(i) = 0.0;
    } else {
      amp(i) *= scale;
    }
  }
  state.classical_record.emplace_back(label, outcome);
  return outcome;
}

int measure_wwd(CircuitState& state, const OrthonormalBasis& basis, SplitRng& rng) {
  if (basis.dim() != kWwdDim) {
    throw DimensionMismatchError("measure_wwd: basis must have 3 vectors");
  }
  State8& amp = state.amplitudes;

  // Outcome amplitudes per QO branch: A[i][qo] = <W_i (x) qo | psi>.
  Complex a[kWwdDim][2];
  double probs[kWwdDim];
  double total = 0.0;
  for (int i = 0; i < kWwdDim; ++i) {
    const Vec& w = basis.vectors[i];
    probs[i] = 0.0;
    for (int qo = 0; qo < 2; ++qo) {
      Complex acc = 0.0;
      for (int k = 0; k < kWwdDim; ++k) {
        acc += std::conj(w(k)) * amp(qo * 4 + kSubspaceToPair[k]);
      }
      a[i][qo] = acc;
      probs[i] += std::norm(acc);
    }
    total += probs[i];
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw InternalConsistencyError(
        "measure_wwd: outcome probabilities sum to " + std::to_string(total) +
        " (amplitude outside the measured subspace?)");
  }

  const double u = rng.uniform() * total;
  int outcome = kWwdDim - 1;
  double cumulative = 0.0;
  for (int i = 0; i < kWwdDim; ++i) {
    cumulative += probs[i];
    if (u < cumulative) {
      outcome = i;
      break;
    }
  }

  const Vec& w = basis.vectors[outcome];
  const double scale = 1.0 / std::sqrt(probs[outcome]);
  for (int qo = 0; qo < 2; ++qo) {
    for (int k = 0; k < kWwdDim; ++k) {
      amp(qo * 4 + kSubspaceToPair[k]) = w(k) * (a[outcome][qo] * scale);
    }
    amp(qo * 4 + kPairEleven) = 0.0;
  }
  state.classical_record.emplace_back("wwd", outcome);
  return outcome;
}

int measure_phase_port(CircuitState& state, double delta, SplitRng& rng) {
  apply_gate(state, Gate::phase(kQubitQo, -delta));
  apply_gate(state, Gate::hadamard(kQubitQo));
  return measure_qubit(state, kQubitQo, rng, "port");
}

long long ShotTally::accepted() const {
  long long n = 0;
  for (const auto& [key, count] : counts) {
    if (key[2] == 0) n += count;
  }
  return n;
}

std::array<double, 3> ShotTally::empirical_p() const {
  std::array<double, 3> p{};
  for (const auto& [key, count] : counts) p[key[0]] += count;
  for (double& x : p) x /= static_cast<double>(total);
  return p;
}

std::array<double, 3> ShotTally::empirical_q() const {
  std::array<double, 3> correct{};
  std::array<double, 3> seen{};
  for (const auto& [key, count] : counts) {
    seen[key[0]] += count;
    if (key[1] == key[2]) correct[key[0]] += count;
  }
  std::array<double, 3> q{};
  for (int i = 0; i < 3; ++i) q[i] = seen[i] > 0 ? correct[i] / seen[i] : 0.5;
  return q;
}

std::array<double, 3> ShotTally::conditional_p() const {
  std::array<double, 3> p{};
  double n = 0.0;
  for (const auto& [key, count] : counts) {
    if (key[2] == 0) {
      p[key[0]] += count;
      n += count;
    }
  }
  if (n > 0) {
    for (double& x : p) x /= n;
  }
  return p;
}

ShotTally run_guessing_game(double theta, const OrthonormalBasis& basis,
                            long long shots, SplitRng& rng) {
  if (shots < 1) throw BoundaryError("run_guessing_game: shots must be >= 1");
  const CircuitState prepared = prepare_interaction(theta);
  const DetectorCoupling c = make_coupling(std::sin(theta));
  const WwdStatePair pair = wwd_states(c);

  // Guess rule per outcome, fixed before the runs. A tied outcome carries
  // no information; guessing path a is as good as anything.
  int guess_for[kWwdDim];
  for (int i = 0; i < kWwdDim; ++i) {
    const GuessQuality gq = guess_quality(basis.vectors[i], pair);
    guess_for[i] = (gq.path == Path::B) ? 1 : 0;
  }

  ShotTally tally;
  tally.total = shots;
  long long n_correct = 0;
  for (long long s = 0; s < shots; ++s) {
    CircuitState state = prepared;
    const int outcome = measure_wwd(state, basis, rng);
    const int guess = guess_for[outcome];
    const int path = measure_qubit(state, kQubitQo, rng, "path");
    if (guess == path) ++n_correct;
    ++tally.counts[{outcome, guess, path}];
  }
  const double frac = static_cast<double>(n_correct) / static_cast<double>(shots);
  tally.k_estimate = 2.0 * frac - 1.0;
  tally.k_std_error =
      2.0 * std::sqrt(std::max(frac * (1.0 - frac), 1e-12) / static_cast<double>(shots));
  return tally;
}

ShotTally run_phase_conditioned(double theta, const OrthonormalBasis& basis,
                                double delta, long long shots, SplitRng& rng,
                                MeasurementOrder order) {
  if (shots < 1) throw BoundaryError("run_phase_conditioned: shots must be >= 1");
  const DetectorCoupling c = make_coupling(std::sin(theta));
  if (click_probability(delta, c.visibility) <= 1e-6) {
    throw DarkFringeError("run_phase_conditioned: click probability below 1e-6");
  }
  const CircuitState prepared = prepare_interaction(theta);
  const WwdStatePair pair = wwd_states(c);

  std::array<double, kWwdDim> q{};
  for (int i = 0; i < kWwdDim; ++i) q[i] = guess_quality(basis.vectors[i], pair).q;

  ShotTally tally;
  tally.total = shots;
  double q_sum = 0.0, q_sq_sum = 0.0;
  for (long long s = 0; s < shots; ++s) {
    CircuitState state = prepared;
    int port, outcome;
    if (order == MeasurementOrder::QoFirst) {
      port = measure_phase_port(state, delta, rng);
      outcome = measure_wwd(state, basis, rng);
    } else {
      outcome = measure_wwd(state, basis, rng);
      port = measure_phase_port(state, delta, rng);
    }
    ++tally.counts[{outcome, -1, port}];
    if (port == 0) {
      q_sum += q[outcome];
      q_sq_sum += q[outcome] * q[outcome];
    }
  }
  const long long n_acc = tally.accepted();
  tally.starved = n_acc < 100;
  if (n_acc > 0) {
    const double mean = q_sum / static_cast<double>(n_acc);
    const double var = std::max(q_sq_sum / static_cast<double>(n_acc) - mean * mean, 0.0);
    tally.k_estimate = 2.0 * mean - 1.0;
    tally.k_std_error = 2.0 * std::sqrt(var / static_cast<double>(n_acc));
  }
  return tally;
}

ShotTally run_feedforward_demo(double theta, const KnowledgeCurve& curve,
                               long long shots, SplitRng& rng) {
  if (shots < 1) throw BoundaryError("run_feedforward_demo: shots must be >= 1");
  if (curve.bases.size() != curve.deltas.size() || curve.bases.empty()) {
    throw BoundaryError("run_feedforward_demo: curve carries no bases");
  }
  const DetectorCoupling c = make_coupling(std::sin(theta));
  const CircuitState prepared = prepare_interaction(theta);
  const WwdStatePair pair = wwd_states(c);

  const int n_grid = static_cast<int>(curve.deltas.size());
  const double step = 2.0 * std::numbers::pi / n_grid;

  // Analytic guess qualities and guesses per (grid point, outcome).
  std::vector<std::array<double, kWwdDim>> q(n_grid);
  std::vector<std::array<int, kWwdDim>> guess(n_grid);
  for (int g = 0; g < n_grid; ++g) {
    for (int i = 0; i < kWwdDim; ++i) {
      const GuessQuality gq = guess_quality(curve.bases[g].vectors[i], pair);
      q[g][i] = gq.q;
      guess[g][i] = (gq.path == Path::B) ? 1 : 0;
    }
  }

  ShotTally tally;
  tally.total = shots;
  double q_sum = 0.0, q_sq_sum = 0.0;
  for (long long s = 0; s < shots; ++s) {
    const double delta = sample_delta(c.visibility, rng);
    // Screen detection at this delta: retry the port projection until it
    // clicks; the conditional detector state is the same either way.
    CircuitState state;
    for (int tries = 0;; ++tries) {
      state = prepared;
      if (measure_phase_port(state, delta, rng) == 0) break;
      if (tries > 100000) {
        throw InternalConsistencyError("run_feedforward_demo: port never clicks");
      }
    }
    const int g = static_cast<int>(std::llround(delta / step)) % n_grid;
    const int outcome = measure_wwd(state, curve.bases[g], rng);
    ++tally.counts[{outcome, guess[g][outcome], g}];
    q_sum += q[g][outcome];
    q_sq_sum += q[g][outcome] * q[g][outcome];
  }
  const double mean = q_sum / static_cast<double>(shots);
  const double var = std::max(q_sq_sum / static_cast<double>(shots) - mean * mean, 0.0);
  tally.k_estimate = 2.0 * mean - 1.0;
  tally.k_std_error = 2.0 * std::sqrt(var / static_cast<double>(shots));
  tally.starved = shots < 100;
  return tally;
}

}  // namespace whichway
