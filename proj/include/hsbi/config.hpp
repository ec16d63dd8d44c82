#pragma once

#include <string>

#include "hsbi/scenarios.hpp"

namespace hsbi {

/// One run, fully described: preset selection plus every knob that affects
/// the artifacts. Parsing is strict (unknown keys are errors) and the
/// canonical serialization round-trips bit-for-bit.
struct RunConfig {
  std::string preset;            // "tpv3", "lvfz", "offfault-lvz", "stepover"
  double dx = 0.0;               // [m]
  double strip_width = 0.0;      // 0 = preset default (tpv3 only) [m]
  double duration = 0.0;         // 0 = preset default [s]
  std::string output_dir;
  std::int64_t snapshot_stride = 0;      // 0 = auto (<= 50 snapshots)
  double rupture_threshold = 1e-3;       // [m/s]
  std::int64_t max_kernel_history = 0;   // 0 = full kernel horizon
  int threads = 0;                       // 0 = library default
  bool deterministic = true;
  double cfl_safety = 0.4;
};

/// Strict parse of the JSON text: required keys preset/dx/output_dir,
/// unknown keys rejected, types checked. Throws std::invalid_argument.
RunConfig parse_config(const std::string& json_text);

/// Reads and parses a config file; throws std::runtime_error on IO failure.
RunConfig load_config(const std::string& path);

/// Canonical serialization: every field, keys sorted, stable formatting.
std::string canonical_config(const RunConfig& c);

/// Instantiates the preset with the config's overrides and validates it.
Scenario scenario_of(const RunConfig& c);

}  // namespace hsbi
