#include "whichway/feedforward.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "whichway/parallel.hpp"

namespace whichway {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double delta_star(double visibility) {
  if (!(visibility > 0.0 && visibility < 1.0)) {
    throw BoundaryError("delta_star: crossing undefined at V in {0,1}");
  }
  const double c =
      (std::sqrt((1.0 - visibility) / (1.0 + visibility)) - 1.0) / visibility;
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double simplified_k_at(double delta, double visibility) {
  if (!(visibility >= 0.0 && visibility <= 1.0)) {
    throw BoundaryError("simplified_k_at: V must be in [0,1]");
  }
  const double canonical = canonical_k_closed(visibility);
  double natural;
  try {
    natural = natural_k_at_closed(delta, visibility);
  } catch (const DarkFringeError&) {
    // V = 1 at the dark fringe: no detections occur, the canonical branch
    // (= 0 there) is the defined value of the switch.
    return canonical;
  }
  return std::max(natural, canonical);
}

double simplified_avg_closed(double visibility) {
  if (visibility <= 0.0) return 1.0;
  if (visibility >= 1.0) return 0.0;
  const double ds = delta_star(visibility);
  const double canonical = canonical_k_closed(visibility);
  return (2.0 * canonical * (ds + visibility * std::sin(ds)) +
          2.0 * (1.0 - visibility) * (std::numbers::pi - ds)) /
         kTwoPi;
}

BasisKnowledge optimize_basis_at(double delta, const DetectorCoupling& c,
                                 const OptimizerConfig& cfg, SplitRng& rng) {
  const WwdStatePair pair = wwd_states(c);

  detail::BasisOverlaps ov;
  const auto evaluate = [&](const OrthonormalBasis& basis) {
    detail::compute_overlaps(basis, pair, ov);
    return detail::knowledge_at_overlaps(ov, delta, c.visibility);
  };

  // Seed with the two analytic candidates so the feed-forward knowledge
  // dominates both exactly, then random-search the basis manifold.
  BasisKnowledge best{natural_basis(), 0.0};
  best.k = evaluate(best.basis);
  {
    OrthonormalBasis canonical = canonical_basis(c);
    const double k = evaluate(canonical);
    if (k > best.k) best = {std::move(canonical), k};
  }

  OrthonormalBasis trial;
  for (int s = 0; s < cfg.samples_per_delta; ++s) {
    haar_random_basis_into(kWwdDim, rng, trial);
    const double k = evaluate(trial);
    if (k > best.k) {
      best.basis = trial;
      best.k = k;
    }
  }

  if (cfg.refine) {
    // Derivative-free polish: conjugate the incumbent frame by small
    // unitaries exp(i eps H) with random Hermitian generators, shrinking
    // eps on stalls. Moving the projector triple directly quotients out
    // the per-vector phases, which the objective ignores anyway.
    SplitRng walk = rng.derive(0x9E3779B9, std::bit_cast<std::uint64_t>(delta));
    double eps = 0.1;
    int stall = 0;
    for (int it = 0; it < cfg.refine_iters && eps > 1e-10; ++it) {
      Mat h(kWwdDim, kWwdDim);
      for (int i = 0; i < kWwdDim; ++i) {
        h(i, i) = walk.gaussian();
        for (int j = i + 1; j < kWwdDim; ++j) {
          h(i, j) = 0.5 * Complex(walk.gaussian(), walk.gaussian());
          h(j, i) = std::conj(h(i, j));
        }
      }
      const EigResult eig = hermitian_eig(h);
      Mat u = Mat::Zero(kWwdDim, kWwdDim);
      for (int k = 0; k < kWwdDim; ++k) {
        const Complex rot = std::exp(Complex(0.0, eps * eig.eigenvalues[k]));
        u += rot * eig.eigenvectors.vectors[k] * eig.eigenvectors.vectors[k].adjoint();
      }
      trial.vectors.resize(kWwdDim);
      for (int i = 0; i < kWwdDim; ++i) trial.vectors[i] = u * best.basis.vectors[i];
      const double k = evaluate(trial);
      if (k > best.k) {
        best.basis = trial;
        best.k = k;
        stall = 0;
      } else if (++stall >= 8) {
        eps *= 0.5;
        stall = 0;
      }
    }
  }
  return best;
}

namespace {

std::vector<double> uniform_grid(int points) {
  if (points < 2) throw BoundaryError("delta grid needs at least 2 points");
  std::vector<double> grid(points);
  for (int k = 0; k < points; ++k) grid[k] = kTwoPi * k / points;
  return grid;
}

}  // namespace

KnowledgeCurve ff_curve(double visibility, const OptimizerConfig& cfg) {
  const DetectorCoupling c = coupling_for_visibility(visibility);
  KnowledgeCurve curve;
  curve.visibility = visibility;
  curve.protocol = Protocol::FeedForward;
  curve.deltas = uniform_grid(cfg.delta_points);
  curve.values.resize(cfg.delta_points);
  curve.bases.resize(cfg.delta_points);

  // Stream id mixes the visibility bits so every (V, grid point) pair is
  // an independent reproducible task regardless of scheduling.
  const SplitRng master(cfg.seed);
  const std::uint64_t vbits = std::bit_cast<std::uint64_t>(visibility);
  parallel_for(cfg.delta_points, [&](int k) {
    SplitRng task = master.derive(vbits, static_cast<std::uint64_t>(k));
    BasisKnowledge bk = optimize_basis_at(curve.deltas[k], c, cfg, task);
    curve.values[k] = bk.k;
    curve.bases[k] = std::move(bk.basis);
  });
  return curve;
}

KnowledgeCurve closed_curve(Protocol protocol, double visibility, int delta_points) {
  KnowledgeCurve curve;
  curve.visibility = visibility;
  curve.protocol = protocol;
  curve.deltas = uniform_grid(delta_points);
  curve.values.resize(delta_points);
  for (int k = 0; k < delta_points; ++k) {
    const double d = curve.deltas[k];
    switch (protocol) {
      case Protocol::Natural:
        curve.values[k] = natural_k_at_closed(d, visibility);
        break;
      case Protocol::Canonical:
        curve.values[k] = canonical_k_closed(visibility);
        break;
      case Protocol::Simplified:
        curve.values[k] = simplified_k_at(d, visibility);
        break;
      case Protocol::FeedForward:
        throw BoundaryError("closed_curve: feed-forward has no closed form");
    }
  }
  return curve;
}

double ff_average(const KnowledgeCurve& curve) {
  const std::size_t n = curve.deltas.size();
  if (n < 2) throw BoundaryError("ff_average: curve needs at least 2 points");
  // Uniform grid over one period without the duplicate endpoint: the
  // periodic trapezoid rule reduces to a plain weighted mean.
  const double h = kTwoPi / static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += curve.values[k] * pattern(curve.deltas[k], curve.visibility);
  }
  return acc * h;
}

std::vector<SweepRecord> sweep_visibility(std::span<const double> v_grid,
                                          const OptimizerConfig& cfg) {
  std::vector<SweepRecord> records(v_grid.size());
  for (std::size_t i = 0; i < v_grid.size(); ++i) {
    const double v = v_grid[i];
    SweepRecord& r = records[i];
    r.visibility = v;
    r.kbar_canonical = ff_average(closed_curve(Protocol::Canonical, v, cfg.delta_points));
    r.kbar_simplified = ff_average(closed_curve(Protocol::Simplified, v, cfg.delta_points));
    r.kbar_ff = ff_average(ff_curve(v, cfg));
    r.excess_simplified = r.kbar_simplified * r.kbar_simplified + v * v;
    r.excess_ff = r.kbar_ff * r.kbar_ff + v * v;
  }
  return records;
}

SweepSummary summarize_sweep(std::span<const SweepRecord> records) {
  SweepSummary s;
  for (const SweepRecord& r : records) {
    if (r.excess_simplified > s.max_excess_simplified) {
      s.max_excess_simplified = r.excess_simplified;
      s.v_argmax_simplified = r.visibility;
    }
    if (r.excess_ff > s.max_excess_ff) {
      s.max_excess_ff = r.excess_ff;
      s.v_argmax_ff = r.visibility;
    }
  }
  const auto closed_excess = [](double v) {
    const double k = simplified_avg_closed(v);
    return k * k + v * v;
  };
  s.v_argmax_simplified_closed = golden_section_max(closed_excess, 1e-9, 1.0 - 1e-9);
  s.max_excess_simplified_closed = closed_excess(s.v_argmax_simplified_closed);
  return s;
}

double golden_section_max(const std::function<double(double)>& f, double lo,
                          double hi, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace whichway
