#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hsbi/config.hpp"
#include "hsbi/outputs.hpp"

namespace hsbi {

/// Process exit codes of config-driven runs.
enum class RunStatus : int {
  Ok = 0,
  ValidationError = 2,
  Instability = 3,
  IoError = 4,
};

struct RunOptions {
  double duration = 0.0;             // 0 = scenario default [s]
  std::int64_t snapshot_stride = 0;  // 0 = auto (<= 50 snapshots)
  double rupture_threshold = 1e-3;   // [m/s]
  std::int64_t max_kernel_history = 0;
  std::int64_t strike_stride = 0;    // 0 = auto (~400 rows)
  std::string output_dir;            // empty = in-memory results only
  std::function<void(std::int64_t step, std::int64_t total)> progress;
};

struct RunResult {
  double dt = 0.0;
  std::int64_t steps = 0;
  double wall_seconds = 0.0;
  std::int64_t snapshots_written = 0;
  std::vector<StationSeries> stations;
  std::vector<RuptureTimeMap> rupture;      // one per fault
  std::vector<FaultSurface> final_faults;   // end-of-run fault state
  // slip-rate magnitude along strike at the fault row nearest x3 = 0,
  // one row per sampled step (dims: rows x ni), for space-time plots
  FieldData strike_line;
};

/// Steps the hybrid model for the scenario duration, recording stations
/// every step and optionally writing artifacts under output_dir.
RunResult run_scenario(const Scenario& s, const KernelProvider& kernels,
                       const RunOptions& options = {});

/// Same recording protocol on the boundary-integral-only reference solver
/// (symmetric homogeneous scenarios).
RunResult run_reference(const Scenario& s, const KernelProvider& kernels,
                        const RunOptions& options = {});

/// Config-driven run: validates, executes, writes station CSVs, snapshots,
/// rupture maps and a manifest under the config's output directory.
/// On failure fills `message` and returns the corresponding status.
RunStatus run_config(const RunConfig& config, std::string& message);

}  // namespace hsbi
