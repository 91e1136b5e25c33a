// Command-line front end: phase sweeps, visibility sweeps with duality
// excesses, Monte Carlo circuit validation and the analytic invariant
// suite. Every run emits a manifest sufficient to reproduce it bit for
// bit with the same build.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "output.hpp"
#include "whichway/circuit.hpp"
#include "whichway/feedforward.hpp"
#include "whichway/knowledge.hpp"
#include "whichway/model.hpp"

namespace {

using namespace whichway;
using cli::Json;
using cli::num12;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Exit-code taxonomy, fixed for scripting.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitStarved = 4;
constexpr int kExitVerifyFailed = 5;

std::uint64_t env_default_seed() {
  if (const char* env = std::getenv("WHICHWAY_SEED")) {
    char* end = nullptr;
    const unsigned long long parsed = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return parsed;
  }
  return 1;
}

double elapsed_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void require_visibility_domain(double v) {
  if (v >= 1.0) {
    throw DarkFringeError(
        "V = 1 produces a dark fringe at delta = pi; phase-resolved "
        "protocols are undefined there");
  }
}

std::vector<double> parse_v_grid(const std::string& spec) {
  std::vector<double> grid;
  if (spec.find(':') != std::string::npos) {
    double start = 0.0, stop = 0.0, step = 0.0;
    char c1 = 0, c2 = 0;
    std::istringstream ss(spec);
    if (!(ss >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' ||
        step <= 0.0) {
      throw CLI::ValidationError("--v-grid", "expected start:stop:step or a comma list");
    }
    const int count = static_cast<int>(std::floor((stop - start) / step + 0.5)) + 1;
    for (int i = 0; i < count; ++i) grid.push_back(start + i * step);
  } else {
    std::istringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      try {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
        grid.push_back(v);
      } catch (const std::exception&) {
        throw CLI::ValidationError("--v-grid", "not a number: " + item);
      }
    }
  }
  if (grid.empty()) {
    throw CLI::ValidationError("--v-grid", "empty grid");
  }
  for (double v : grid) {
    if (v < 0.0 || v > 1.0) {
      throw CLI::ValidationError("--v-grid", "visibilities must lie in [0, 1)");
    }
  }
  return grid;
}

OrthonormalBasis load_basis(const std::string& spec, const DetectorCoupling& c) {
  if (spec == "natural") return natural_basis();
  if (spec == "canonical") return canonical_basis(c);
  std::ifstream in(spec);
  if (!in) {
    throw CLI::ValidationError("--basis", "no such basis: " + spec +
                                              " (expected natural, canonical or a "
                                              "JSON file)");
  }
  Json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw CLI::ValidationError("--basis", std::string("bad JSON: ") + e.what());
  }
  if (!doc.contains("vectors") || !doc["vectors"].is_array() ||
      doc["vectors"].size() != 3) {
    throw CLI::ValidationError("--basis", "expected {\"vectors\": [3 x 3 x [re,im]]}");
  }
  OrthonormalBasis basis;
  basis.vectors.resize(3);
  for (int i = 0; i < 3; ++i) {
    const auto& row = doc["vectors"][i];
    if (!row.is_array() || row.size() != 3) {
      throw CLI::ValidationError("--basis", "each vector needs 3 components");
    }
    basis.vectors[i] = Vec::Zero(3);
    for (int k = 0; k < 3; ++k) {
      const auto& z = row[k];
      if (!z.is_array() || z.size() != 2) {
        throw CLI::ValidationError("--basis", "components are [re, im] pairs");
      }
      basis.vectors[i](k) = Complex(z[0].get<double>(), z[1].get<double>());
    }
  }
  if (gram_deviation(basis) > 1e-12) {
    throw CLI::ValidationError("--basis", "vectors are not orthonormal (tol 1e-12)");
  }
  return basis;
}

// ---------------------------------------------------------------------
// sweep-delta

struct SweepDeltaOpts {
  double visibility = 0.5;
  std::string protocols = "natural,canonical,simplified,ff";
  int delta_points = 50;
  int samples = 50000;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  std::string plot;
};

int cmd_sweep_delta(const SweepDeltaOpts& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  require_visibility_domain(opt.visibility);

  std::set<std::string> wanted;
  {
    std::istringstream ss(opt.protocols);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      if (item != "natural" && item != "canonical" && item != "simplified" &&
          item != "ff") {
        throw CLI::ValidationError("--protocols", "unknown protocol: " + item);
      }
      wanted.insert(item);
    }
  }

  std::vector<double> deltas(opt.delta_points);
  for (int k = 0; k < opt.delta_points; ++k) deltas[k] = kTwoPi * k / opt.delta_points;

  std::optional<KnowledgeCurve> nat, canon, simp, ff;
  if (wanted.count("natural"))
    nat = closed_curve(Protocol::Natural, opt.visibility, opt.delta_points);
  if (wanted.count("canonical"))
    canon = closed_curve(Protocol::Canonical, opt.visibility, opt.delta_points);
  if (wanted.count("simplified"))
    simp = closed_curve(Protocol::Simplified, opt.visibility, opt.delta_points);
  if (wanted.count("ff")) {
    OptimizerConfig cfg;
    cfg.samples_per_delta = opt.samples;
    cfg.delta_points = opt.delta_points;
    cfg.seed = opt.seed;
    ff = ff_curve(opt.visibility, cfg);
  }

  const auto cell = [&](const std::optional<KnowledgeCurve>& c, int k) {
    return c ? num12(c->values[k]) : std::string();
  };

  std::vector<std::string> outputs;
  if (opt.format == "csv") {
    std::ostringstream csv;
    csv << "delta_rad,k_natural,k_canonical,k_simplified,k_ff\n";
    for (int k = 0; k < opt.delta_points; ++k) {
      csv << num12(deltas[k]) << ',' << cell(nat, k) << ',' << cell(canon, k) << ','
          << cell(simp, k) << ',' << cell(ff, k) << '\n';
    }
    cli::write_text_file(opt.out, csv.str());
  } else {
    Json doc;
    doc["visibility"] = opt.visibility;
    doc["rows"] = Json::array();
    for (int k = 0; k < opt.delta_points; ++k) {
      Json row;
      row["delta_rad"] = deltas[k];
      row["k_natural"] = nat ? Json(nat->values[k]) : Json(nullptr);
      row["k_canonical"] = canon ? Json(canon->values[k]) : Json(nullptr);
      row["k_simplified"] = simp ? Json(simp->values[k]) : Json(nullptr);
      row["k_ff"] = ff ? Json(ff->values[k]) : Json(nullptr);
      doc["rows"].push_back(row);
    }
    cli::write_text_file(opt.out, doc.dump(2) + "\n");
  }
  outputs.push_back(opt.out);

  if (!opt.plot.empty()) {
    std::vector<cli::SvgSeries> series;
    if (canon) series.push_back({"canonical", "#1f77b4", false, false, deltas, canon->values});
    if (nat) series.push_back({"natural", "#d62728", true, false, deltas, nat->values});
    if (simp) series.push_back({"simplified", "#2ca02c", false, false, deltas, simp->values});
    if (ff) series.push_back({"feed-forward", "#17202a", false, true, deltas, ff->values});
    cli::write_text_file(
        opt.plot, cli::render_svg("phase-dependent knowledge, V = " + num12(opt.visibility),
                                  "delta (rad)", "K(delta)", 0.0, kTwoPi, 0.0, 1.05,
                                  series));
    outputs.push_back(opt.plot);
  }

  Json params;
  params["visibility"] = opt.visibility;
  params["protocols"] = opt.protocols;
  params["delta_points"] = opt.delta_points;
  params["samples"] = opt.samples;
  params["seed"] = opt.seed;
  params["out"] = opt.out;
  params["format"] = opt.format;
  params["plot"] = opt.plot;
  cli::write_manifest(cli::with_suffix(opt.out, ".manifest.json"), "sweep-delta", params,
                      opt.seed, elapsed_since(t0), outputs);
  return kExitOk;
}

// ---------------------------------------------------------------------
// sweep-visibility

struct SweepVisOpts {
  std::string v_grid = "0:0.95:0.05";
  int delta_points = 50;
  int samples = 50000;
  std::uint64_t seed = 1;
  std::string out;
  std::string plot;
};

int cmd_sweep_visibility(const SweepVisOpts& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> grid = parse_v_grid(opt.v_grid);
  for (double v : grid) require_visibility_domain(v);

  OptimizerConfig cfg;
  cfg.samples_per_delta = opt.samples;
  cfg.delta_points = opt.delta_points;
  cfg.seed = opt.seed;
  const std::vector<SweepRecord> records = sweep_visibility(grid, cfg);
  const SweepSummary summary = summarize_sweep(records);

  std::ostringstream csv;
  csv << "visibility,kbar_canonical,kbar_simplified,kbar_ff,excess_simplified,"
         "excess_ff\n";
  for (const SweepRecord& r : records) {
    csv << num12(r.visibility) << ',' << num12(r.kbar_canonical) << ','
        << num12(r.kbar_simplified) << ',' << num12(r.kbar_ff) << ','
        << num12(r.excess_simplified) << ',' << num12(r.excess_ff) << '\n';
  }
  cli::write_text_file(opt.out, csv.str());
  std::vector<std::string> outputs{opt.out};

  Json summary_json;
  summary_json["argmax"] = {
      {"excess_simplified",
       {{"visibility", summary.v_argmax_simplified},
        {"excess", summary.max_excess_simplified}}},
      {"excess_ff",
       {{"visibility", summary.v_argmax_ff}, {"excess", summary.max_excess_ff}}},
      {"excess_simplified_closed_form",
       {{"visibility", summary.v_argmax_simplified_closed},
        {"excess", summary.max_excess_simplified_closed}}}};
  const std::string summary_path = cli::with_suffix(opt.out, ".summary.json");
  cli::write_text_file(summary_path, summary_json.dump(2) + "\n");
  outputs.push_back(summary_path);

  if (!opt.plot.empty()) {
    std::vector<double> vs, e_s, e_f, base;
    for (const SweepRecord& r : records) {
      vs.push_back(r.visibility);
      e_s.push_back(r.excess_simplified);
      e_f.push_back(r.excess_ff);
      base.push_back(r.kbar_canonical * r.kbar_canonical + r.visibility * r.visibility);
    }
    const std::vector<cli::SvgSeries> series = {
        {"canonical baseline", "#1f77b4", false, false, vs, base},
        {"simplified", "#2ca02c", true, false, vs, e_s},
        {"feed-forward", "#17202a", false, true, vs, e_f}};
    const double v_hi = *std::max_element(vs.begin(), vs.end());
    cli::write_text_file(opt.plot,
                         cli::render_svg("duality excess vs visibility", "V",
                                         "Kbar^2 + V^2", 0.0, std::max(1.0, v_hi),
                                         0.95, 1.05, series));
    outputs.push_back(opt.plot);
  }

  Json params;
  params["v_grid"] = opt.v_grid;
  params["delta_points"] = opt.delta_points;
  params["samples"] = opt.samples;
  params["seed"] = opt.seed;
  params["out"] = opt.out;
  params["plot"] = opt.plot;
  cli::write_manifest(cli::with_suffix(opt.out, ".manifest.json"), "sweep-visibility",
                      params, opt.seed, elapsed_since(t0), outputs);
  return kExitOk;
}

// ---------------------------------------------------------------------
// montecarlo

struct MonteCarloOpts {
  double theta = -1.0;
  double visibility = -1.0;
  std::string basis = "natural";
  double delta = std::nan("");
  long long shots = 1000000;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_montecarlo(const MonteCarloOpts& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  double theta;
  if (opt.theta >= 0.0 && opt.visibility >= 0.0) {
    throw CLI::ValidationError("--theta/--visibility", "give exactly one of the two");
  } else if (opt.theta >= 0.0) {
    theta = opt.theta;
  } else if (opt.visibility >= 0.0) {
    theta = std::asin(std::sqrt(std::max(0.0, 1.0 - opt.visibility)));
  } else {
    throw CLI::ValidationError("--theta/--visibility", "one of the two is required");
  }
  const DetectorCoupling c = make_coupling(std::sin(theta));
  const OrthonormalBasis basis = load_basis(opt.basis, c);
  const bool with_delta = !std::isnan(opt.delta);

  const auto analytic_p = readout_probs(basis, c);
  const double analytic_k = knowledge_avg(basis, c).knowledge;

  SplitRng rng(opt.seed);
  SplitRng game_rng = rng.derive(1);
  const ShotTally game = run_guessing_game(theta, basis, opt.shots, game_rng);
  const auto p_hat = game.empirical_p();
  const auto q_hat = game.empirical_q();

  const auto binom_z = [](double phat, double p, double n) {
    const double sigma = std::sqrt(std::max(p * (1.0 - p) / n, 1e-300));
    return (phat - p) / sigma;
  };

  Json report;
  report["tool"] = cli::kToolName;
  report["version"] = cli::kToolVersion;
  report["theta"] = theta;
  report["visibility"] = c.visibility;
  report["basis"] = opt.basis;
  report["shots"] = opt.shots;
  report["seed"] = opt.seed;

  Json analytic;
  analytic["p"] = Json::array();
  analytic["q"] = Json::array();
  for (const auto& o : analytic_p) {
    analytic["p"].push_back(o.probability);
    analytic["q"].push_back(o.guess_quality);
  }
  analytic["k"] = analytic_k;

  Json empirical;
  empirical["p"] = {p_hat[0], p_hat[1], p_hat[2]};
  empirical["q"] = {q_hat[0], q_hat[1], q_hat[2]};
  empirical["k"] = game.k_estimate;
  empirical["k_std_error"] = game.k_std_error;

  Json z;
  z["p"] = Json::array();
  z["q"] = Json::array();
  const double n = static_cast<double>(opt.shots);
  for (int i = 0; i < 3; ++i) {
    z["p"].push_back(binom_z(p_hat[i], analytic_p[i].probability, n));
    const double n_i = p_hat[i] * n;
    const double qa = analytic_p[i].guess_quality;
    z["q"].push_back((n_i > 0 && qa > 0.0 && qa < 1.0)
                         ? binom_z(q_hat[i], qa, n_i)
                         : 0.0);
  }
  z["k"] = game.k_std_error > 0 ? (game.k_estimate - analytic_k) / game.k_std_error
                                : 0.0;

  bool starved = false;
  if (with_delta) {
    const auto analytic_cond = conditional_probs(basis, opt.delta, c);
    double k_at = 0.0;
    for (const auto& o : analytic_cond) k_at += o.probability * o.guess_quality;
    k_at = 2.0 * k_at - 1.0;

    SplitRng phase_rng = rng.derive(2);
    const ShotTally phase =
        run_phase_conditioned(theta, basis, opt.delta, opt.shots, phase_rng);
    starved = phase.starved;
    const auto pd_hat = phase.conditional_p();
    const double n_acc = static_cast<double>(phase.accepted());

    report["delta"] = opt.delta;
    analytic["p_delta"] = Json::array();
    for (const auto& o : analytic_cond) analytic["p_delta"].push_back(o.probability);
    analytic["k_delta"] = k_at;
    analytic["click_probability"] = click_probability(opt.delta, c.visibility);

    empirical["p_delta"] = {pd_hat[0], pd_hat[1], pd_hat[2]};
    empirical["k_delta"] = phase.k_estimate;
    empirical["k_delta_std_error"] = phase.k_std_error;
    empirical["accepted_shots"] = phase.accepted();
    empirical["starved"] = phase.starved;

    z["p_delta"] = Json::array();
    for (int i = 0; i < 3; ++i) {
      z["p_delta"].push_back(
          n_acc > 0 ? binom_z(pd_hat[i], analytic_cond[i].probability, n_acc) : 0.0);
    }
    z["k_delta"] = phase.k_std_error > 0
                       ? (phase.k_estimate - k_at) / phase.k_std_error
                       : 0.0;
  }

  report["analytic"] = analytic;
  report["empirical"] = empirical;
  report["z_scores"] = z;
  cli::write_text_file(opt.out, report.dump(2) + "\n");

  Json params;
  params["theta"] = opt.theta;
  params["visibility"] = opt.visibility;
  params["basis"] = opt.basis;
  params["delta"] = with_delta ? Json(opt.delta) : Json(nullptr);
  params["shots"] = opt.shots;
  params["seed"] = opt.seed;
  params["out"] = opt.out;
  cli::write_manifest(cli::with_suffix(opt.out, ".manifest.json"), "montecarlo", params,
                      opt.seed, elapsed_since(t0), {opt.out});

  if (starved) {
    std::fprintf(stderr,
                 "montecarlo: conditional sample count below 100, estimates "
                 "unreliable\n");
    return kExitStarved;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------
// verify

struct VerifyOpts {
  std::uint64_t seed = 1;
  bool full = false;
  std::string out;
  bool inject_failure = false;
};

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

int cmd_verify(const VerifyOpts& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<CheckResult> results;
  const auto add = [&](const std::string& name, bool pass, const std::string& detail) {
    results.push_back({name, pass, detail});
    std::printf("[%s] %-34s %s\n", pass ? "ok" : "FAIL", name.c_str(), detail.c_str());
  };
  const auto numstr = [](double x) { return num12(x); };

  {
    double worst = 0.0;
    for (int i = 1; i <= 9; ++i) {
      const double v = 0.1 * i;
      const DetectorCoupling c = coupling_for_visibility(v);
      worst = std::max(worst, std::abs(knowledge_avg(natural_basis(), c).knowledge -
                                       natural_k_closed(v)));
      worst = std::max(worst, std::abs(knowledge_avg(canonical_basis(c), c).knowledge -
                                       canonical_k_closed(v)));
    }
    add("closed-form equivalence", worst <= 1e-10, "max dev " + numstr(worst));
  }

  {
    const int grid = opt.full ? 1000 : 200;
    const int n_v = opt.full ? 9 : 5;
    double worst = 0.0;
    for (int i = 1; i <= n_v; ++i) {
      const double v = i / static_cast<double>(n_v + 1);
      const DetectorCoupling c = coupling_for_visibility(v);
      const OrthonormalBasis nat = natural_basis();
      const OrthonormalBasis canon = canonical_basis(c);
      for (int k = 0; k < grid; ++k) {
        const double d = kTwoPi * k / grid;
        worst = std::max(worst, std::abs(knowledge_at(nat, d, c).knowledge -
                                         natural_k_at_closed(d, v)));
        worst = std::max(worst, std::abs(knowledge_at(canon, d, c).knowledge -
                                         canonical_k_closed(v)));
      }
    }
    add("phase-dependent closed forms", worst <= 1e-9, "max dev " + numstr(worst));
  }

  {
    SplitRng rng(opt.seed);
    const int n_bases = opt.full ? 10000 : 1500;
    long long violations = 0;
    for (int s = 0; s < n_bases; ++s) {
      const OrthonormalBasis w = haar_random_basis(3, rng);
      for (int i = 1; i <= 9; ++i) {
        const double v = 0.1 * i;
        const double k = knowledge_avg(w, coupling_for_visibility(v)).knowledge;
        if (k * k + v * v > 1.0 + 1e-9) ++violations;
      }
    }
    add("duality bound", violations == 0,
        std::to_string(n_bases) + " bases x 9 V, " + std::to_string(violations) +
            " violations");
  }

  {
    SplitRng rng(opt.seed + 1);
    const int n_bases = opt.full ? 100 : 8;
    const std::vector<double> vs =
        opt.full ? std::vector<double>{0.1, 0.3, 0.5, 0.7, 0.9}
                 : std::vector<double>{0.3, 0.7};
    double worst = 0.0;
    for (double v : vs) {
      const DetectorCoupling c = coupling_for_visibility(v);
      for (int s = 0; s < n_bases; ++s) {
        const OrthonormalBasis w = haar_random_basis(3, rng);
        const double avg = phase_average(
            [&](double d) { return knowledge_at(w, d, c).knowledge; }, v);
        worst = std::max(worst, std::abs(avg - knowledge_avg(w, c).knowledge));
      }
    }
    add("phase-average identity", worst <= 1e-7, "max dev " + numstr(worst));
  }

  {
    double worst = 0.0;
    for (double v : {0.25, 0.5, 0.75, 0.95}) {
      const double ds = delta_star(v);
      worst = std::max(worst,
                       std::abs(natural_k_at_closed(ds, v) - canonical_k_closed(v)));
    }
    add("knowledge-curve crossing", worst <= 1e-10, "max dev " + numstr(worst));
  }

  {
    double worst = 0.0;
    for (int i = 1; i <= 20; ++i) {
      const double v = i / 21.0;
      const double ds = delta_star(v);
      const double breaks[] = {ds, kTwoPi - ds};
      const double quad =
          phase_average([&](double d) { return simplified_k_at(d, v); }, v, breaks);
      worst = std::max(worst, std::abs(quad - simplified_avg_closed(v)));
    }
    add("switched-protocol closed average", worst <= 1e-8, "max dev " + numstr(worst));
  }

  {
    double worst = 0.0;
    const int pair_index[3] = {0, 2, 1};
    for (double theta : {0.0, std::numbers::pi / 6, std::numbers::pi / 4,
                         std::numbers::pi / 3, std::numbers::pi / 2}) {
      const CircuitState s = prepare_interaction(theta);
      const JointState js = joint_state(make_coupling(std::sin(theta)));
      for (int p = 0; p < 2; ++p) {
        for (int k = 0; k < 3; ++k) {
          worst = std::max(worst, std::abs(s.amplitudes(p * 4 + pair_index[k]) -
                                           js.amplitudes(p, k)));
        }
      }
    }
    add("circuit/model equivalence", worst <= 1e-12, "max dev " + numstr(worst));
  }

  {
    SplitRng rng(opt.seed + 2);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const DetectorCoupling c = make_coupling(rng.uniform());
      const double d = rng.uniform(0.0, kTwoPi);
      const Vec cond = conditional_wwd_state(d, joint_state(c));
      const OrthonormalBasis w = haar_random_basis(3, rng);
      double sum = 0.0;
      for (const Vec& wi : w.vectors) sum += std::norm(wi.dot(cond));
      worst = std::max(worst, std::abs(sum - click_probability(d, c.visibility)));
    }
    add("order invariance (analytic)", worst <= 1e-12, "max dev " + numstr(worst));
  }

  {
    const long long shots = opt.full ? 100000 : 20000;
    const double theta = std::asin(std::sqrt(0.5));
    const DetectorCoupling c = make_coupling(std::sin(theta));
    const double delta = 1.1;
    const OrthonormalBasis basis = natural_basis();
    const double click = click_probability(delta, c.visibility);
    const auto cond = conditional_probs(basis, delta, c);
    const auto uncond = readout_probs(basis, c);
    double worst_z = 0.0;
    for (MeasurementOrder order :
         {MeasurementOrder::QoFirst, MeasurementOrder::WwdFirst}) {
      SplitRng rng(opt.seed + 3 + (order == MeasurementOrder::WwdFirst ? 1 : 0));
      const ShotTally t = run_phase_conditioned(theta, basis, delta, shots, rng, order);
      for (int i = 0; i < 3; ++i) {
        const double joint0 = click * cond[i].probability;
        const double joint1 = uncond[i].probability - joint0;
        const auto it0 = t.counts.find({i, -1, 0});
        const auto it1 = t.counts.find({i, -1, 1});
        const double n0 = it0 == t.counts.end() ? 0.0 : double(it0->second);
        const double n1 = it1 == t.counts.end() ? 0.0 : double(it1->second);
        const double s0 = std::sqrt(std::max(joint0 * (1 - joint0) * shots, 1e-12));
        const double s1 = std::sqrt(std::max(joint1 * (1 - joint1) * shots, 1e-12));
        worst_z = std::max(worst_z, std::abs(n0 - joint0 * shots) / s0);
        worst_z = std::max(worst_z, std::abs(n1 - joint1 * shots) / s1);
      }
    }
    add("order invariance (Monte Carlo)", worst_z <= 4.0,
        "worst z " + numstr(worst_z) + " at " + std::to_string(shots) + " shots");
  }

  {
    const long long shots = opt.full ? 200000 : 20000;
    const double theta = std::asin(std::sqrt(0.5));
    const DetectorCoupling c = make_coupling(std::sin(theta));
    double worst_z = 0.0;
    int basis_id = 0;
    for (const OrthonormalBasis& basis : {natural_basis(), canonical_basis(c)}) {
      SplitRng rng(opt.seed + 10 + basis_id++);
      const ShotTally t = run_guessing_game(theta, basis, shots, rng);
      const double k = knowledge_avg(basis, c).knowledge;
      worst_z = std::max(worst_z, std::abs(t.k_estimate - k) / t.k_std_error);
    }
    add("Born-rule knowledge estimate", worst_z <= 4.0,
        "worst z " + numstr(worst_z) + " at " + std::to_string(shots) + " shots");
  }

  if (opt.inject_failure) {
    add("injected failure (test hook)", false, "requested via --inject-failure");
  }

  bool all_pass = true;
  for (const CheckResult& r : results) all_pass = all_pass && r.pass;

  if (!opt.out.empty()) {
    Json report;
    report["tool"] = cli::kToolName;
    report["version"] = cli::kToolVersion;
    report["mode"] = opt.full ? "full" : "quick";
    report["seed"] = opt.seed;
    report["all_passed"] = all_pass;
    report["checks"] = Json::array();
    for (const CheckResult& r : results) {
      report["checks"].push_back(
          {{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    }
    cli::write_text_file(opt.out, report.dump(2) + "\n");
    Json params;
    params["seed"] = opt.seed;
    params["mode"] = opt.full ? "full" : "quick";
    params["out"] = opt.out;
    cli::write_manifest(cli::with_suffix(opt.out, ".manifest.json"), "verify", params,
                        opt.seed, elapsed_since(t0), {opt.out});
  }

  std::printf("%s\n", all_pass ? "all checks passed" : "verification FAILED");
  return all_pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-way interferometer with a two-qubit which-way detector: "
               "knowledge functionals, feed-forward protocols, circuit-level "
               "Monte Carlo validation"};
  app.require_subcommand(1);
  const std::uint64_t default_seed = env_default_seed();

  SweepDeltaOpts sd;
  sd.seed = default_seed;
  CLI::App* sweep_delta =
      app.add_subcommand("sweep-delta", "phase-resolved knowledge curves");
  sweep_delta->add_option("--visibility", sd.visibility, "interference visibility V")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  sweep_delta->add_option("--protocols", sd.protocols,
                          "comma list of natural,canonical,simplified,ff");
  sweep_delta->add_option("--delta-points", sd.delta_points, "phase grid size")
      ->check(CLI::Range(2, 1000000));
  sweep_delta->add_option("--samples", sd.samples, "random bases per phase point")
      ->check(CLI::Range(0, 100000000));
  sweep_delta->add_option("--seed", sd.seed, "master seed");
  sweep_delta->add_option("--out", sd.out, "output file")->required();
  sweep_delta->add_option("--format", sd.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep_delta->add_option("--plot", sd.plot, "optional SVG plot path");

  SweepVisOpts sv;
  sv.seed = default_seed;
  CLI::App* sweep_vis = app.add_subcommand(
      "sweep-visibility", "phase-averaged knowledge and duality excess");
  sweep_vis->add_option("--v-grid", sv.v_grid, "start:stop:step or comma list");
  sweep_vis->add_option("--delta-points", sv.delta_points, "phase grid size")
      ->check(CLI::Range(2, 1000000));
  sweep_vis->add_option("--samples", sv.samples, "random bases per phase point")
      ->check(CLI::Range(0, 100000000));
  sweep_vis->add_option("--seed", sv.seed, "master seed");
  sweep_vis->add_option("--out", sv.out, "output CSV")->required();
  sweep_vis->add_option("--plot", sv.plot, "optional SVG plot path");

  MonteCarloOpts mc;
  mc.seed = default_seed;
  CLI::App* montecarlo = app.add_subcommand(
      "montecarlo", "gate-level shot simulation vs analytic probabilities");
  montecarlo->add_option("--theta", mc.theta, "interaction angle, beta = sin(theta)")
      ->check(CLI::Range(0.0, std::numbers::pi / 2));
  montecarlo->add_option("--visibility", mc.visibility, "visibility V = cos^2(theta)")
      ->check(CLI::Range(0.0, 1.0));
  montecarlo->add_option("--basis", mc.basis, "natural, canonical or a JSON file");
  montecarlo->add_option("--delta", mc.delta,
                         "optional detection phase for conditional statistics");
  montecarlo->add_option("--shots", mc.shots, "number of shots (>= 100)")
      ->check(CLI::Range(100LL, 1000000000LL));
  montecarlo->add_option("--seed", mc.seed, "master seed");
  montecarlo->add_option("--out", mc.out, "output JSON report")->required();

  VerifyOpts vf;
  vf.seed = default_seed;
  CLI::App* verify = app.add_subcommand("verify", "run the analytic invariant suite");
  verify->add_option("--seed", vf.seed, "master seed");
  verify->add_flag("--full", vf.full, "extended budgets (10^4-basis duality sweep)");
  verify->add_flag("--quick", [](std::int64_t) {}, "default budgets (< 10 s)");
  verify->add_option("--out", vf.out, "optional JSON report path");
  verify->add_flag("--inject-failure", vf.inject_failure, "force one failing check")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (sweep_delta->parsed()) return cmd_sweep_delta(sd);
    if (sweep_vis->parsed()) return cmd_sweep_visibility(sv);
    if (montecarlo->parsed()) return cmd_montecarlo(mc);
    if (verify->parsed()) return cmd_verify(vf);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "%s: %s\n", cli::kToolName, e.what());
    return kExitUsage;
  } catch (const DarkFringeError& e) {
    std::fprintf(stderr, "%s: %s\n", cli::kToolName, e.what());
    return kExitDomain;
  } catch (const BoundaryError& e) {
    std::fprintf(stderr, "%s: %s\n", cli::kToolName, e.what());
    return kExitDomain;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s: %s\n", cli::kToolName, e.what());
    return 1;
  }
  return kExitOk;
}
