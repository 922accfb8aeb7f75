#include "verification.hpp"

#include "cli.hpp"

#include "telegame/analysis.hpp"
#include "telegame/channel.hpp"
#include "telegame/error.hpp"
#include "telegame/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace telegame::cli {

namespace {

constexpr double kGridMin = 0.5;
constexpr double kGridMax = 50.0;
constexpr std::size_t kGridPoints = 500;
constexpr double kPipelineTolerance = 1e-10;
constexpr double kCovTolerance = 1e-12;
constexpr double kThresholdLow = 5.70;
constexpr double kThresholdHigh = 5.82;
constexpr double kSpreadLimit = 1e-9;

std::vector<double> alpha_grid() {
  std::vector<double> grid(kGridPoints);
  for (std::size_t k = 0; k < kGridPoints; ++k) {
    grid[k] = kGridMin + (kGridMax - kGridMin) * static_cast<double>(k) /
                             static_cast<double>(kGridPoints - 1);
  }
  return grid;
}

std::string fmt(double v) { return format_number(v); }

class Collector {
 public:
  void add(int criterion, std::string name, bool passed, std::string detail) {
    results_.push_back({criterion, std::move(name), passed, std::move(detail)});
  }
  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  std::vector<CheckResult> results_;
};

void check_no_cloning_optimum(Collector& c) {
  const double at_two = f_noncoop(2.0);
  const bool exact = std::abs(at_two - 2.0 / 3.0) <= 1e-14;
  const auto grid = alpha_grid();
  const auto best = std::max_element(grid.begin(), grid.end(), [](double a, double b) {
    return f_noncoop(a) < f_noncoop(b);
  });
  const double step = grid[1] - grid[0];
  const bool argmax_ok = std::abs(*best - 2.0) <= step;
  c.add(1, "no_cloning_optimum", exact && argmax_ok,
        "f_tr(2)=" + fmt(at_two) + " argmax=" + fmt(*best) + " step=" + fmt(step));
}

ThresholdResult check_threshold(Collector& c) {
  const ThresholdResult r = find_threshold(1e-9);
  const double direct = std::abs(f_coop_avg(r.alpha_th) - f_noncoop(r.alpha_th));
  const bool ok = r.alpha_th >= kThresholdLow && r.alpha_th <= kThresholdHigh && direct <= 1e-9;
  c.add(2, "threshold_alpha_th", ok,
        "alpha_th=" + fmt(r.alpha_th) + " residual=" + fmt(direct));
  return r;
}

void check_ordering(Collector& c) {
  bool ab_ok = true;
  bool ac_ok = true;
  double worst_ab = INFINITY;
  double worst_ac = -INFINITY;
  for (double a : alpha_grid()) {
    const double tr = f_noncoop(a);
    const double ab = f_ab_coop(a);
    const double ac = f_ac_coop(a);
    worst_ab = std::min(worst_ab, ab - tr);
    worst_ac = std::max(worst_ac, ac);
    ab_ok = ab_ok && ab >= tr;
    ac_ok = ac_ok && ac < tr && ac <= 0.5;
  }
  c.add(3, "ordering_f_ab_ge_f_tr", ab_ok, "min(f_ab-f_tr)=" + fmt(worst_ab));
  c.add(3, "ordering_f_ac_below_f_tr_and_half", ac_ok, "max f_ac=" + fmt(worst_ac));
}

void check_physicality(Collector& c) {
  bool all_physical = true;
  bool all_symmetric = true;
  double worst = INFINITY;
  for (double a : alpha_grid()) {
    const GaussianState s = build_cm(channel_params(a));
    worst = std::min(worst, uncertainty_min_eigenvalue(s.cov().matrix()));
    all_physical = all_physical && is_physical(s.cov());
    all_symmetric = all_symmetric && exchange_symmetry_check(s);
  }
  bool rejects = false;
  try {
    channel_params(0.4);
  } catch (const DomainError&) {
    rejects = true;
  }
  c.add(4, "channel_physical_on_grid", all_physical, "min eigenvalue=" + fmt(worst));
  c.add(4, "channel_rejects_alpha_below_half", rejects, "alpha=0.4");
  c.add(0, "channel_exchange_symmetric", all_symmetric, "500-point grid");
}

void check_pipelines(Collector& c, ShiftRule shift) {
  std::mt19937_64 rng(0x7e1e9a3eULL);
  std::uniform_real_distribution<double> alpha_dist(kGridMin, kGridMax);
  std::normal_distribution<double> amp(0.0, 1.5);
  double err_tr = 0.0;
  double err_ab = 0.0;
  double err_ac = 0.0;
  double err_cov = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double alpha = alpha_dist(rng);
    const ComplexAmplitude phi{amp(rng), amp(rng)};
    const ComplexAmplitude eta{amp(rng), amp(rng)};
    const ComplexAmplitude mu{amp(rng), amp(rng)};
    const GamePipeline game(alpha);

    const AveragedFidelities nc = game.average_noncoop(phi);
    const AveragedFidelities co = game.average_coop(phi, Receiver::charlie, shift);
    err_tr = std::max({err_tr, std::abs(nc.bob - f_noncoop(alpha)),
                       std::abs(nc.charlie - f_noncoop(alpha))});
    err_ab = std::max(err_ab, std::abs(co.bob - f_ab_coop(alpha)));
    err_ac = std::max(err_ac, std::abs(co.charlie - f_ac_coop(alpha)));

    const Matrix2 nc_ref = game.noncoop(phi, {0.0, 0.0}).conditional_cov_bob;
    const Matrix2 co_ref = game.coop(phi, {0.0, 0.0}, {0.0, 0.0}, Receiver::charlie, shift)
                               .conditional_cov_bob;
    err_cov = std::max({err_cov, (game.noncoop(phi, eta).conditional_cov_bob - nc_ref).cwiseAbs().maxCoeff(),
                        (game.coop(phi, eta, mu, Receiver::charlie, shift).conditional_cov_bob - co_ref)
                            .cwiseAbs()
                            .maxCoeff()});
  }
  c.add(5, "pipeline_f_tr_matches_closed_form", err_tr < kPipelineTolerance,
        "max err=" + fmt(err_tr));
  c.add(5, "pipeline_f_ab_matches_closed_form", err_ab < kPipelineTolerance,
        "max err=" + fmt(err_ab));
  c.add(5, "pipeline_f_ac_matches_closed_form", err_ac < kPipelineTolerance,
        "max err=" + fmt(err_ac));
  c.add(5, "conditional_cov_outcome_independent", err_cov <= kCovTolerance,
        "max diff=" + fmt(err_cov));
}

void check_role_swap(Collector& c) {
  const GamePipeline game(2.0);
  const ComplexAmplitude phi{0.4, -0.3};
  const AveragedFidelities charlie_measures = game.average_coop(phi, Receiver::charlie);
  const AveragedFidelities bob_measures = game.average_coop(phi, Receiver::bob);
  const double err = std::max(std::abs(charlie_measures.bob - bob_measures.charlie),
                              std::abs(charlie_measures.charlie - bob_measures.bob));
  const double alternated = 0.5 * (charlie_measures.bob + bob_measures.bob);
  c.add(0, "role_swap_inverts_fidelities", err < kPipelineTolerance && std::abs(alternated - alternation_fidelity(2.0)) < kPipelineTolerance,
        "max err=" + fmt(err) + " alternated=" + fmt(alternated));
}

void check_monte_carlo(Collector& c, const VerifyOptions& options) {
  bool consistent = true;
  double worst_spread = 0.0;
  std::ostringstream detail;
  for (double alpha : {0.5, 2.0, 5.76, 10.0}) {
    McConfig config;
    config.alpha = alpha;
    config.shots = options.mc_shots;
    config.seed = options.mc_seed;
    config.input_ensemble_std = 1.0;
    const McEstimate e = estimate_fidelities(config, 0);
    const double z_tr = (e.f_tr_hat - f_noncoop(alpha)) / e.stderr_tr;
    const double z_ab = (e.f_ab_hat - f_ab_coop(alpha)) / e.stderr_ab;
    const double z_ac = (e.f_ac_hat - f_ac_coop(alpha)) / e.stderr_ac;
    consistent = consistent && std::abs(z_tr) <= 3.0 && std::abs(z_ab) <= 3.0 &&
                 std::abs(z_ac) <= 3.0;
    worst_spread = std::max({worst_spread, e.spread_tr, e.spread_ab});
    detail << "a=" << fmt(alpha) << " z=(" << fmt(z_tr) << "," << fmt(z_ab) << ","
           << fmt(z_ac) << ") ";
  }
  c.add(6, "monte_carlo_within_3_sigma", consistent, detail.str());
  c.add(6, "monte_carlo_per_shot_spread", worst_spread < kSpreadLimit,
        "max spread of f_tr/f_ab samples=" + fmt(worst_spread) + " (limit 1e-9)");
}

void check_classical_crossings(Collector& c) {
  const ClassicalCrossings x = find_classical_crossings();
  // Larger root of alpha^2 - 10 alpha + 5 = 0 by the quadratic formula.
  const double oracle = (10.0 + std::sqrt(100.0 - 20.0)) / 2.0;
  c.add(7, "classical_crossing_f_tr", std::abs(x.alpha_tr_half - oracle) <= 1e-6,
        "alpha=" + fmt(x.alpha_tr_half) + " oracle=" + fmt(oracle));
  c.add(7, "classical_crossing_coop_later",
        x.alpha_coop_half > x.alpha_tr_half && std::abs(f_coop_avg(x.alpha_coop_half) - 0.5) <= 1e-9,
        "alpha_coop=" + fmt(x.alpha_coop_half));
}

std::pair<int, std::string> run_captured(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str()};
}

void check_sweep_artifact(Collector& c, double alpha_th) {
  const auto first = run_captured({"sweep", "0.5", "12", "200"});
  const auto second = run_captured({"sweep", "0.5", "12", "200"});
  const bool stable = first.first == 0 && first.second == second.second;

  std::istringstream lines(first.second);
  std::string line;
  std::getline(lines, line);
  const bool header_ok = line == kSweepHeader;
  int crossings = 0;
  int rows = 0;
  double prev_alpha = 0.0;
  double prev_gap = 0.0;
  bool brackets_threshold = false;
  while (std::getline(lines, line)) {
    double v[5];
    std::istringstream fields(line);
    std::string cell;
    for (double& x : v) {
      std::getline(fields, cell, ',');
      x = std::stod(cell);
    }
    const double gap = v[4] - v[1];
    if (rows > 0 && ((prev_gap < 0.0) != (gap < 0.0))) {
      ++crossings;
      brackets_threshold = prev_alpha <= alpha_th && alpha_th <= v[0];
    }
    prev_alpha = v[0];
    prev_gap = gap;
    ++rows;
  }
  const bool ok = stable && header_ok && rows == 200 && crossings == 1 && brackets_threshold;
  c.add(8, "sweep_csv_single_crossing", ok,
        "rows=" + std::to_string(rows) + " crossings=" + std::to_string(crossings) +
            (stable ? " byte-stable" : " UNSTABLE"));
}

void check_simulate_determinism(Collector& c, const VerifyOptions& options) {
  const std::string shots = std::to_string(options.determinism_shots);
  auto run = [&](const char* threads) {
    return run_captured({"simulate", "--alpha", "2", "--shots", shots, "--seed", "42",
                         "--threads", threads});
  };
  const auto a = run("1");
  const auto b = run("1");
  const auto d = run("4");
  const bool ok = !a.second.empty() && a.second == b.second && a.second == d.second;
  c.add(9, "simulate_bit_identical", ok, "threads 1,1,4 at " + shots + " shots");
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  Collector c;
  check_no_cloning_optimum(c);
  const ThresholdResult threshold = check_threshold(c);
  check_ordering(c);
  check_physicality(c);
  check_pipelines(c, options.shift);
  check_role_swap(c);
  if (options.include_monte_carlo) check_monte_carlo(c, options);
  check_classical_crossings(c);
  if (options.include_cli_artifacts) {
    check_sweep_artifact(c, threshold.alpha_th);
    check_simulate_determinism(c, options);
  }
  return c.take();
}

}  // namespace telegame::cli
