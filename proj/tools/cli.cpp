#include "cli.hpp"

#include "verification.hpp"

#include "telegame/channel.hpp"
#include "telegame/error.hpp"
#include "telegame/monte_carlo.hpp"
#include "telegame/protocols.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace telegame::cli {

namespace {

using nlohmann::json;

constexpr double kSigmaLimit = 3.0;

struct ChannelArgs {
  double alpha = 2.0;
  bool as_json = false;
};

struct SweepArgs {
  double alpha_min = 0.5;
  double alpha_max = 12.0;
  std::size_t steps = 200;
  std::string out_path;
};

struct ThresholdArgs {
  double tol = 1e-9;
  bool as_json = false;
};

struct SimulateArgs {
  McConfig config;
  unsigned threads = 0;
  bool as_json = false;
};

int cmd_channel(const ChannelArgs& args, std::ostream& out) {
  const ChannelParams p = channel_params(args.alpha);
  const GaussianState state = build_cm(p);
  const double k = kappa(args.alpha);
  const bool physical = is_physical(state.cov());
  const bool symmetric = exchange_symmetry_check(state);
  if (args.as_json) {
    out << json{{"alpha", p.alpha}, {"beta", p.beta},         {"gamma", p.gamma},
                {"delta", p.delta}, {"kappa", k},            {"physical", physical},
                {"symmetric", symmetric}}
               .dump()
        << '\n';
    return kSuccess;
  }
  out << "alpha=" << format_number(p.alpha) << " beta=" << format_number(p.beta)
      << " gamma=" << format_number(p.gamma) << " delta=" << format_number(p.delta)
      << " kappa=" << format_number(k) << " physical=" << (physical ? "true" : "false")
      << " symmetric=" << (symmetric ? "true" : "false") << '\n';
  return kSuccess;
}

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  const std::string csv = format_sweep_csv(sweep(args.alpha_min, args.alpha_max, args.steps));
  if (args.out_path.empty()) {
    out << csv;
    return kSuccess;
  }
  std::ofstream file(args.out_path, std::ios::binary | std::ios::trunc);
  if (file) file << csv;
  if (!file) {
    err << "error: cannot write " << args.out_path << '\n';
    return kIoFailure;
  }
  return kSuccess;
}

int cmd_threshold(const ThresholdArgs& args, std::ostream& out) {
  const ThresholdResult r = find_threshold(args.tol);
  if (args.as_json) {
    out << json{{"alpha_th", r.alpha_th},
                {"f_at_threshold", r.f_at_threshold},
                {"iterations", r.iterations},
                {"residual", r.residual}}
               .dump()
        << '\n';
    return kSuccess;
  }
  out << "alpha_th=" << format_number(r.alpha_th) << '\n'
      << "f_at_threshold=" << format_number(r.f_at_threshold) << '\n'
      << "iterations=" << r.iterations << '\n'
      << "residual=" << format_number(r.residual) << '\n';
  return kSuccess;
}

struct Comparison {
  const char* name;
  double exact;
  double estimate;
  double stderr_;

  double z() const {
    const double diff = estimate - exact;
    if (stderr_ > 0.0) return diff / stderr_;
    return diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
  }
  bool consistent() const { return std::abs(z()) <= kSigmaLimit; }
};

int cmd_simulate(const SimulateArgs& args, std::ostream& out) {
  const McEstimate est = estimate_fidelities(args.config, args.threads);
  const double alpha = args.config.alpha;
  const std::array<Comparison, 3> rows{{
      {"f_tr", f_noncoop(alpha), est.f_tr_hat, est.stderr_tr},
      {"f_ab", f_ab_coop(alpha), est.f_ab_hat, est.stderr_ab},
      {"f_ac", f_ac_coop(alpha), est.f_ac_hat, est.stderr_ac},
  }};
  const bool all_ok =
      std::all_of(rows.begin(), rows.end(), [](const Comparison& c) { return c.consistent(); });

  if (args.as_json) {
    json j{{"alpha", alpha},
           {"shots", est.shots},
           {"seed", args.config.seed},
           {"ensemble_std", args.config.input_ensemble_std},
           {"consistent", all_ok}};
    for (const auto& row : rows) {
      const std::string key = row.name;
      j[key] = row.exact;
      j[key + "_hat"] = row.estimate;
      j[key + "_stderr"] = row.stderr_;
    }
    out << j.dump() << '\n';
  } else {
    out << "alpha=" << format_number(alpha) << " shots=" << est.shots
        << " seed=" << args.config.seed
        << " ensemble_std=" << format_number(args.config.input_ensemble_std) << '\n';
    out << "quantity closed_form estimate stderr z status\n";
    for (const auto& row : rows) {
      out << row.name << ' ' << format_number(row.exact) << ' ' << format_number(row.estimate)
          << ' ' << format_number(row.stderr_) << ' ' << format_number(row.z()) << ' '
          << (row.consistent() ? "ok" : "OFF>3sigma") << '\n';
    }
    out << "f_coop " << format_number(f_coop_avg(alpha)) << ' '
        << format_number(0.5 * (est.f_ab_hat + est.f_ac_hat)) << '\n';
  }
  return all_ok ? kSuccess : kStatisticalFailure;
}

int cmd_verify(std::ostream& out) {
  const std::vector<CheckResult> results = run_verification();
  std::vector<std::string> failed;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(40) << r.name << ' '
        << r.detail << '\n';
    if (!r.passed) failed.push_back(r.name);
  }
  out << results.size() - failed.size() << '/' << results.size() << " checks passed\n";
  if (failed.empty()) return kSuccess;
  out << "failed:";
  for (const auto& name : failed) out << ' ' << name;
  out << '\n';
  return kVerificationFailure;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::string format_sweep_csv(std::span<const SweepRow> rows) {
  std::string csv = kSweepHeader;
  csv += '\n';
  for (const SweepRow& row : rows) {
    csv += format_number(row.alpha);
    for (double v : {row.f_tr, row.f_ab, row.f_ac, row.f_coop}) {
      csv += ',';
      csv += format_number(v);
    }
    csv += '\n';
  }
  return csv;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Continuous-variable teleportation game simulator", "telegame"};
  app.require_subcommand(1);

  ChannelArgs channel_args;
  auto* channel = app.add_subcommand("channel", "Report the channel parameters for one alpha");
  channel->add_option("--alpha", channel_args.alpha, "Channel noise parameter (>= 1/2)")
      ->required();
  channel->add_flag("--json", channel_args.as_json, "Emit a JSON object");

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "Write closed-form fidelities over an alpha grid");
  sweep_cmd->add_option("alpha_min,--alpha-min", sweep_args.alpha_min, "First alpha")
      ->capture_default_str();
  sweep_cmd->add_option("alpha_max,--alpha-max", sweep_args.alpha_max, "Last alpha")
      ->capture_default_str();
  sweep_cmd->add_option("steps,--steps", sweep_args.steps, "Grid points (>= 2)")
      ->capture_default_str();
  sweep_cmd->add_option("--out", sweep_args.out_path, "CSV path (stdout if omitted)");

  ThresholdArgs threshold_args;
  auto* threshold =
      app.add_subcommand("threshold", "Locate where cooperation overtakes telecloning");
  threshold->add_option("--tol", threshold_args.tol, "Residual tolerance")->capture_default_str();
  threshold->add_flag("--json", threshold_args.as_json, "Emit a JSON object");

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo estimates of all fidelities");
  simulate->add_option("--alpha", sim_args.config.alpha, "Channel noise parameter")
      ->capture_default_str();
  simulate->add_option("--shots", sim_args.config.shots, "Number of trajectories")
      ->capture_default_str();
  simulate->add_option("--seed", sim_args.config.seed, "RNG seed")->capture_default_str();
  simulate->add_option("--ensemble-std", sim_args.config.input_ensemble_std,
                       "Std of random input amplitudes (0 = vacuum)")
      ->capture_default_str();
  simulate->add_option("--threads", sim_args.threads, "Worker threads (0 = hardware)")
      ->capture_default_str();
  simulate->add_flag("--json", sim_args.as_json, "Emit a JSON object");

  auto* verify = app.add_subcommand("verify", "Run the full consistency suite");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }

  try {
    if (channel->parsed()) return cmd_channel(channel_args, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_args, out, err);
    if (threshold->parsed()) return cmd_threshold(threshold_args, out);
    if (simulate->parsed()) return cmd_simulate(sim_args, out);
    if (verify->parsed()) return cmd_verify(out);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const BracketError& e) {
    err << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
  return kInvalidInput;
}

}  // namespace telegame::cli
