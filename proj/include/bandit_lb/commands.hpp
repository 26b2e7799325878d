#pragma once
/// \file commands.hpp
/// The four batch commands behind the command-line tool.
///
/// Exit codes: 0 success, 2 configuration error, 3 model/bound
/// incompatibility, 4 simulation failure, 5 verification failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "csv.hpp"
#include "errors.hpp"
#include "lower_bounds.hpp"
#include "simulator.hpp"
#include "verification.hpp"

namespace bandit_lb {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config = 2;
inline constexpr int incompatible = 3;
inline constexpr int simulation = 4;
inline constexpr int verification = 5;
}  // namespace exit_code

struct RunOptions {
  bool quick = false;
  unsigned threads = 0;
  std::ostream* log = &std::cout;
  std::ostream* err = &std::cerr;
};

/// Renders regret.csv as mean +/- 2 stderr plus every bound_*.csv beside it.
inline const char* plot_script() {
  return R"PY(#!/usr/bin/env python3
"""Plot mean regret +/- 2 stderr with the bound curves found next to this script."""
import csv
import glob
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))


def read(name):
    with open(os.path.join(here, name), newline="") as f:
        return list(csv.DictReader(f))


fig, ax = plt.subplots(figsize=(7, 4.5))
if os.path.exists(os.path.join(here, "regret.csv")):
    rows = read("regret.csv")
    t = [int(r["T"]) for r in rows]
    m = [float(r["mean_regret"]) for r in rows]
    s = [float(r["stderr"]) for r in rows]
    ax.plot(t, m, color="black", label="mean regret (%s runs)" % rows[0]["runs"])
    ax.fill_between(t, [a - 2 * b for a, b in zip(m, s)], [a + 2 * b for a, b in zip(m, s)],
                    color="grey", alpha=0.3, label="+/- 2 stderr")
for path in sorted(glob.glob(os.path.join(here, "bound_*.csv"))):
    rows = read(os.path.basename(path))
    pts = [(int(r["T"]), float(r["value"])) for r in rows if r["void"] == "0"]
    if pts:
        ax.plot([p[0] for p in pts], [p[1] for p in pts], linestyle="--", label=rows[0]["bound_id"])
ax.set_xscale("log")
ax.set_xlabel("T")
ax.set_ylabel("regret")
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(here, "regret.png"), dpi=150)
)PY";
}

namespace detail {

inline std::optional<LargeTConstants> large_t_constants_for(const BanditProblem& nu, const ExperimentConfig& c) {
  try {
    require_large_t_compatible(nu);
  } catch (const IncompatibleBound&) {
    return std::nullopt;
  }
  LargeTConstants k = default_large_t_constants(nu, c.c_psi.value_or(16.0));
  if (!c.omega.empty()) k.omega = c.omega;
  return k;
}

inline BoundCurve curve_for(const std::string& id, const BanditProblem& nu, const std::vector<std::uint64_t>& grid,
                            const ExperimentConfig& c) {
  if (id == bound_id::asymptotic) return asymptotic_curve(nu, grid);
  if (id == bound_id::distribution_free) return distribution_free_curve(nu.size(), grid);
  if (id == bound_id::bpr_known_mu_star) return bpr_known_mu_star_curve(nu, grid);
  if (id == bound_id::bpr_known_gap) return bpr_known_gap_curve(nu, grid);
  if (id == bound_id::small_t_absolute) return small_t_absolute_curve(nu, grid);
  if (id == bound_id::small_t_relative) return small_t_relative_curve(nu, grid);
  if (id == bound_id::collective) return collective_curve(nu, grid);
  if (id == bound_id::large_t) {
    require_large_t_compatible(nu);
    return large_t_curve(nu, grid, *large_t_constants_for(nu, c));
  }
  if (id == bound_id::envelope) return envelope(nu, grid, large_t_constants_for(nu, c));
  throw ConfigError("unknown bound id '" + id + "'");
}

inline void write_bounds(const ExperimentConfig& c, const std::vector<std::string>& ids, const RunOptions& opt) {
  const BanditProblem nu = c.problem();
  const auto grid = make_grid(c.checkpoints, c.horizon);
  std::vector<std::string> wanted = ids;
  if (std::find(wanted.begin(), wanted.end(), bound_id::envelope) == wanted.end()) wanted.push_back(bound_id::envelope);
  // Compute everything first so an incompatible id leaves no partial output.
  std::vector<BoundCurve> curves;
  for (const auto& id : wanted) curves.push_back(curve_for(id, nu, grid, c));
  for (const auto& curve : curves) {
    const auto path = std::filesystem::path(c.out) / ("bound_" + curve.bound_id + ".csv");
    write_file_atomic(path, bound_curve_csv(curve));
    *opt.log << "wrote " << path.string() << "\n";
  }
}

inline void write_simulation(const ExperimentConfig& c, const RunOptions& opt) {
  const BanditProblem nu = c.problem();
  const auto grid = make_grid(c.checkpoints, c.horizon);
  const AggregateCurve agg = monte_carlo(nu, c.strategy, c.horizon, c.runs, c.seed, grid, opt.threads);
  const std::filesystem::path dir(c.out);
  write_file_atomic(dir / "regret.csv", aggregate_csv(agg));
  write_file_atomic(dir / "arm_counts.csv", arm_counts_csv(agg));
  write_file_atomic(dir / "plot_regret.py", plot_script());
  *opt.log << "wrote " << (dir / "regret.csv").string() << " (" << agg.runs << " runs, final mean regret "
           << format_double(agg.mean_regret.back()) << ")\n";
}

}  // namespace detail

inline void cmd_bounds(const ExperimentConfig& c, const RunOptions& opt = {}) {
  std::vector<std::string> ids = c.bound_ids;
  if (ids.empty()) ids = {bound_id::asymptotic, bound_id::small_t_absolute, bound_id::collective};
  detail::write_bounds(c, ids, opt);
}

inline void cmd_simulate(const ExperimentConfig& c, const RunOptions& opt = {}) { detail::write_simulation(c, opt); }

/// Returns true iff every battery row passes; the report is written either way.
inline bool cmd_verify(const ExperimentConfig& c, const RunOptions& opt = {}) {
  BatteryOptions b;
  b.quick = opt.quick;
  b.seed = c.seed;
  const auto rows = run_verification_battery(b);
  const auto path = std::filesystem::path(c.out) / "verify_report.csv";
  write_file_atomic(path, verification_csv(rows));
  std::size_t failed = 0;
  for (const auto& r : rows) {
    if (r.pass) continue;
    ++failed;
    *opt.err << "FAILED " << r.instance_id << " " << r.check << " value=" << format_double(r.value)
             << " threshold=" << format_double(r.threshold) << "\n";
  }
  *opt.log << "wrote " << path.string() << " (" << rows.size() << " checks, " << failed << " failed)\n";
  return failed == 0;
}

/// The flagship experiment: Thompson sampling on the six-armed preset,
/// 500 runs to T = 10^4, with the asymptotic curve and the envelope.
inline ExperimentConfig figure1_config(ExperimentConfig c, bool quick) {
  if (!c.has_problem()) c.preset = "figure1";
  c.strategy = StrategySpec{"thompson", {}};
  c.horizon = 10000;
  c.runs = quick ? 50 : 500;
  c.checkpoints = CheckpointSpec{CheckpointSpec::Kind::log, 60, {}};
  if (c.bound_ids.empty()) c.bound_ids = {bound_id::asymptotic, bound_id::envelope};
  return c;
}

inline void cmd_figure1(const ExperimentConfig& c, const RunOptions& opt = {}) {
  detail::write_simulation(c, opt);
  detail::write_bounds(c, c.bound_ids, opt);
}

/// Validates `c`, dispatches on its command and maps failures to exit codes.
inline int run_command(ExperimentConfig c, const RunOptions& opt = {}) {
  try {
    if (c.command == Command::figure1) c = figure1_config(std::move(c), opt.quick);
    validate_config(c);
    switch (c.command) {
      case Command::bounds: cmd_bounds(c, opt); break;
      case Command::simulate: cmd_simulate(c, opt); break;
      case Command::verify: return cmd_verify(c, opt) ? exit_code::ok : exit_code::verification;
      case Command::figure1: cmd_figure1(c, opt); break;
    }
    return exit_code::ok;
  } catch (const ConfigError& e) {
    *opt.err << "config error: " << e.what() << "\n";
    return exit_code::config;
  } catch (const IncompatibleBound& e) {
    *opt.err << "incompatible bound: " << e.what() << "\n";
    return exit_code::incompatible;
  } catch (const SimulationError& e) {
    *opt.err << "simulation failed: " << e.what() << "\n";
    return exit_code::simulation;
  }
}

}  // namespace bandit_lb
