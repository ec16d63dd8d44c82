#pragma once

#include <string>
#include <vector>

#include "hsbi/runner.hpp"

namespace hsbi {

struct ConvergenceResult {
  std::vector<double> dx;     // coarse resolutions, as given
  std::vector<double> error;  // normalized L2 slip error vs the reference
  double slope = 0.0;         // log-log least-squares order estimate
  // per-step error trace of one station's slip-rate magnitude against the
  // reference run (reference linearly interpolated in time)
  std::vector<double> trace_t, trace_error;
};

struct ConvergenceOptions {
  double t_end = 0.0;            // comparison time; 0 = scenario duration
  std::string trace_station;     // empty = last station of the preset
  double trace_dx = 0.0;         // 0 = first entry of the dx list
  std::int64_t max_kernel_history = 0;
};

/// Runs the preset at each coarse dx and at the finer reference dx, then
/// measures the L2 norm of the end-time slip-magnitude difference on the
/// coarsest common fault grid, normalized by the reference norm.
/// All grids must nest into the reference and into the coarsest grid.
ConvergenceResult converge(const std::string& preset_name,
                           const std::vector<double>& dx_list, double dx_ref,
                           const KernelProvider& kernels,
                           const ConvergenceOptions& options = {});

/// Least-squares slope of log(error) against log(dx).
double fit_loglog_slope(const std::vector<double>& x,
                        const std::vector<double>& y);

}  // namespace hsbi
