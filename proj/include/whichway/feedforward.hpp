#ifndef WHICHWAY_FEEDFORWARD_HPP
#define WHICHWAY_FEEDFORWARD_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "whichway/knowledge.hpp"

namespace whichway {

enum class Protocol { Natural, Canonical, Simplified, FeedForward };

/// K(delta) sampled on a phase grid, with the observable that produced
/// each point kept alongside when the protocol optimizes per phase.
struct KnowledgeCurve {
  double visibility = 0.0;
  std::vector<double> deltas;  // strictly increasing in [0, 2pi)
  std::vector<double> values;  // K(delta_k), in [0,1]
  Protocol protocol = Protocol::Natural;
  std::vector<OrthonormalBasis> bases;  // per point; filled for FeedForward
};

/// One visibility row of the duality-excess sweep. All averages are
/// pattern-weighted trapezoid sums on the same phase grid, so the
/// dominance chain kbar_ff >= kbar_simplified >= kbar_canonical holds
/// exactly, not just statistically.
struct SweepRecord {
  double visibility = 0.0;
  double kbar_canonical = 0.0;
  double kbar_simplified = 0.0;
  double kbar_ff = 0.0;
  double excess_simplified = 0.0;  // kbar_simplified^2 + V^2
  double excess_ff = 0.0;          // kbar_ff^2 + V^2
};

struct SweepSummary {
  double v_argmax_simplified = 0.0;  // grid argmax of excess_simplified
  double max_excess_simplified = 0.0;
  double v_argmax_ff = 0.0;  // grid argmax of excess_ff
  double max_excess_ff = 0.0;
  // Closed-form polish (golden-section) of the simplified excess.
  double v_argmax_simplified_closed = 0.0;
  double max_excess_simplified_closed = 0.0;
};

struct OptimizerConfig {
  int samples_per_delta = 50000;
  int delta_points = 50;
  std::uint64_t seed = 0;
  bool refine = false;
  int refine_iters = 200;
};

/// Crossing phase of the natural and canonical knowledge curves in (0, pi):
/// cos(delta_star) = (sqrt((1-V)/(1+V)) - 1)/V. Throws BoundaryError at
/// V in {0,1} where the crossing is undefined.
double delta_star(double visibility);

/// Switched protocol: max of the natural and canonical closed forms.
/// Equals canonical on [0, d*] u [2pi - d*, 2pi], natural in between.
double simplified_k_at(double delta, double visibility);

/// Closed-form pattern-weighted average of simplified_k_at:
/// (1/2pi) [2 sqrt(1-V^2)(d* + V sin d*) + 2(1-V)(pi - d*)].
/// Limits at the boundary: V=0 -> 1, V=1 -> 0.
double simplified_avg_closed(double visibility);

struct BasisKnowledge {
  OrthonormalBasis basis;
  double k = 0.0;
};

/// Best observable at a fixed phase over the candidate set
/// {natural, canonical} u samples_per_delta Haar-random bases; seeding
/// with the two analytic bases makes K_FF >= max(K_nat, K_can) exact.
/// Candidates are drawn sequentially from `rng`, so a larger budget sees
/// a superset of a smaller one (monotone under a common seed). With
/// cfg.refine, a derivative-free polish is applied to the incumbent.
BasisKnowledge optimize_basis_at(double delta, const DetectorCoupling& c,
                                 const OptimizerConfig& cfg, SplitRng& rng);

/// Feed-forward knowledge on a uniform grid of cfg.delta_points phases in
/// [0, 2pi). Each grid point draws its own stream derived from
/// (cfg.seed, V, point index) and points run in parallel.
KnowledgeCurve ff_curve(double visibility, const OptimizerConfig& cfg);

/// Closed-form curve (Natural, Canonical or Simplified) on the same grid.
KnowledgeCurve closed_curve(Protocol protocol, double visibility, int delta_points);

/// Pattern-weighted average of a sampled curve: periodic trapezoid sum of
/// K(delta_k) P(delta_k) on the curve's own grid. Grid-induced error is
/// about 5e-3 at the default 50 points (the protocol switch kink is
/// under-resolved); use more points when tighter accuracy is needed.
double ff_average(const KnowledgeCurve& curve);

/// Per-visibility averages and duality excesses.
std::vector<SweepRecord> sweep_visibility(std::span<const double> v_grid,
                                          const OptimizerConfig& cfg);

SweepSummary summarize_sweep(std::span<const SweepRecord> records);

/// Maximize f over [lo, hi] by golden-section search; returns argmax.
double golden_section_max(const std::function<double(double)>& f, double lo,
                          double hi, double tol = 1e-10);

}  // namespace whichway

#endif
