#include "hsbi/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hsbi {

namespace {

namespace fs = std::filesystem;

std::int64_t snapshot_stride_of(const RunOptions& opt, std::int64_t steps) {
  if (opt.snapshot_stride > 0) return opt.snapshot_stride;
  return std::max<std::int64_t>(1, (steps + 49) / 50);
}

std::int64_t strike_stride_of(const RunOptions& opt, std::int64_t steps) {
  if (opt.strike_stride > 0) return opt.strike_stride;
  return std::max<std::int64_t>(1, steps / 400);
}

/// Fault-node indices of the along-strike row nearest the middle of the
/// first fault's down-dip extent.
std::vector<std::int64_t> strike_row(const FaultSurface& f, double x3_mid) {
  int best_k = 0;
  double best = std::numeric_limits<double>::max();
  for (std::int64_t n = 0; n < f.size(); ++n) {
    const double d = std::abs(f.x3(n) - x3_mid);
    if (d < best) {
      best = d;
      best_k = f.kk[size_t(n)];
    }
  }
  int ni = 0;
  for (std::int64_t n = 0; n < f.size(); ++n)
    ni = std::max(ni, f.ii[size_t(n)] + 1);
  std::vector<std::int64_t> row(size_t(ni), -1);
  for (std::int64_t n = 0; n < f.size(); ++n)
    if (f.kk[size_t(n)] == best_k) row[size_t(f.ii[size_t(n)])] = n;
  return row;
}

std::string snapshot_name(const char* field, std::int64_t index) {
  std::ostringstream s;
  s << field << '_';
  s.width(6);
  s.fill('0');
  s << index << ".bin";
  return s.str();
}

struct Recorder {
  const Scenario* scenario = nullptr;
  const RunOptions* options = nullptr;
  std::vector<std::int64_t> station_nodes;
  RunResult result;
  std::vector<std::int64_t> strike_nodes;
  std::vector<double> strike_rows;  // accumulated row-major
  std::int64_t strike_sample_stride = 1;

  void start(const std::vector<FaultSurface>& faults,
             const std::vector<std::int64_t>& stations, double dt,
             std::int64_t steps) {
    station_nodes = stations;
    result.dt = dt;
    result.steps = steps;
    for (size_t i = 0; i < scenario->stations.size(); ++i) {
      StationSeries s;
      s.name = scenario->stations[i].name;
      result.stations.push_back(std::move(s));
    }
    for (const auto& f : faults)
      result.rupture.push_back(
          RuptureTimeMap::for_fault(f, options->rupture_threshold));
    const auto& spec0 = scenario->faults[0];
    strike_nodes = strike_row(faults[0], 0.5 * (spec0.x3_lo + spec0.x3_hi));
    strike_sample_stride = strike_stride_of(*options, steps);
  }

  void sample(const std::vector<FaultSurface>& faults, double t,
              std::int64_t step) {
    for (size_t i = 0; i < result.stations.size(); ++i) {
      const auto& f =
          faults[size_t(scenario->stations[i].fault)];
      result.stations[i].record(f, station_nodes[i], t);
    }
    for (size_t f = 0; f < faults.size(); ++f)
      result.rupture[f].update(faults[f], t);
    if (step % strike_sample_stride == 0) {
      const auto& f0 = faults[0];
      for (auto n : strike_nodes)
        strike_rows.push_back(
            n < 0 ? 0.0 : f0.slip_rate.row(n).matrix().norm());
    }
  }

  void finish(const std::vector<FaultSurface>& faults) {
    result.final_faults = faults;
    result.strike_line.name = "strike_slip_rate";
    const std::int64_t ni = std::int64_t(strike_nodes.size());
    result.strike_line.dims = {std::int64_t(strike_rows.size()) / ni, ni};
    result.strike_line.dx = faults[0].dx;
    result.strike_line.time = result.dt * double(strike_sample_stride);
    result.strike_line.data = std::move(strike_rows);
  }

  void write_artifacts() const {
    if (options->output_dir.empty()) return;
    const fs::path dir(options->output_dir);
    fs::create_directories(dir / "stations");
    for (const auto& s : result.stations)
      write_station_csv((dir / "stations" / (s.name + ".csv")).string(), s);
    for (size_t f = 0; f < result.rupture.size(); ++f)
      write_rupture_map(
          (dir / ("rupture_fault" + std::to_string(f) + ".bin")).string(),
          result.rupture[f]);
    write_field((dir / "strike_line.bin").string(), result.strike_line);
  }
};

}  // namespace

RunResult run_scenario(const Scenario& s, const KernelProvider& kernels,
                       const RunOptions& options) {
  const auto wall0 = std::chrono::steady_clock::now();
  BuiltModel bm = build_model(s, kernels, options.max_kernel_history);
  HybridModel& m = *bm.model;

  const double duration = options.duration > 0.0 ? options.duration : s.duration;
  const std::int64_t steps =
      std::max<std::int64_t>(1, std::llround(std::ceil(duration / bm.dt)));
  const std::int64_t snap_stride = snapshot_stride_of(options, steps);

  Recorder rec;
  rec.scenario = &s;
  rec.options = &options;
  rec.start(m.faults, bm.station_nodes, bm.dt, steps);

  const bool writing = !options.output_dir.empty();
  fs::path snap_dir;
  if (writing) {
    snap_dir = fs::path(options.output_dir) / "snapshots";
    fs::create_directories(snap_dir);
  }

  for (std::int64_t n = 0; n < steps; ++n) {
    m.step();
    rec.sample(m.faults, m.state.t, n);
    if (writing && (n + 1) % snap_stride == 0) {
      FieldData vmag;
      vmag.name = "vmag";
      vmag.dims = {m.grid.n2() + 1, m.grid.n3() + 1, m.grid.n1() + 1};
      vmag.dx = m.grid.dx();
      vmag.time = m.state.t;
      vmag.data = velocity_magnitude(m.state, m.grid);
      write_field((snap_dir / snapshot_name("vmag", n + 1)).string(), vmag);

      FieldData sig;
      sig.name = "sigma12";
      sig.dims = {m.grid.n2(), m.grid.n3(), m.grid.n1()};
      sig.dx = m.grid.dx();
      sig.time = m.state.t;
      sig.data = element_sigma12(m.stiffness.connectivity(), m.materials,
                                 m.state.u);
      write_field((snap_dir / snapshot_name("sigma12", n + 1)).string(), sig);
      ++rec.result.snapshots_written;
    }
    if (options.progress) options.progress(n + 1, steps);
  }

  rec.finish(m.faults);
  rec.write_artifacts();
  rec.result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0)
          .count();
  return rec.result;
}

RunResult run_reference(const Scenario& s, const KernelProvider& kernels,
                        const RunOptions& options) {
  const auto wall0 = std::chrono::steady_clock::now();
  BuiltReference ref = build_reference(s, kernels, options.max_kernel_history);
  SbimSolver& solver = *ref.solver;

  const double duration = options.duration > 0.0 ? options.duration : s.duration;
  const std::int64_t steps = std::max<std::int64_t>(
      1, std::llround(std::ceil(duration / solver.dt())));

  Recorder rec;
  rec.scenario = &s;
  rec.options = &options;
  std::vector<FaultSurface> faults = {solver.fault()};
  rec.start(faults, ref.station_nodes, solver.dt(), steps);

  for (std::int64_t n = 0; n < steps; ++n) {
    solver.step();
    faults[0] = solver.fault();
    rec.sample(faults, solver.time(), n);
    if (options.progress) options.progress(n + 1, steps);
  }

  rec.finish(faults);
  rec.write_artifacts();
  rec.result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0)
          .count();
  return rec.result;
}

RunStatus run_config(const RunConfig& config, std::string& message) {
  try {
#ifdef _OPENMP
    int n_threads = config.threads > 0 ? config.threads : omp_get_max_threads();
    if (const char* cap_env = std::getenv("HSBI_MAX_THREADS")) {
      const int cap = std::atoi(cap_env);
      if (cap > 0) n_threads = std::min(n_threads, cap);
    }
    omp_set_num_threads(n_threads);
#endif
    const Scenario s = scenario_of(config);
    if (config.output_dir.empty())
      throw std::invalid_argument("config: output_dir must not be empty");

    ElastodynamicKernels kernels;
    RunOptions opt;
    opt.snapshot_stride = config.snapshot_stride;
    opt.rupture_threshold = config.rupture_threshold;
    opt.max_kernel_history = config.max_kernel_history;
    opt.output_dir = config.output_dir;
    const RunResult result = run_scenario(s, kernels, opt);

    nlohmann::json manifest;
    manifest["config"] = nlohmann::json::parse(canonical_config(config));
    manifest["derived"]["dt"] = result.dt;
    manifest["derived"]["steps"] = result.steps;
    manifest["derived"]["snapshots"] = result.snapshots_written;
    manifest["derived"]["grid"] = {
        std::llround(s.extents[0] / s.dx), std::llround(s.extents[1] / s.dx),
        std::llround(s.extents[2] / s.dx)};
    for (const auto& f : s.faults) {
      double ratio = std::numeric_limits<double>::quiet_NaN();
      try {
        ratio = strength_ratio(f);
      } catch (const std::invalid_argument&) {
      }
      manifest["derived"]["strength_ratio"].push_back(ratio);
    }
    for (size_t f = 0; f < result.rupture.size(); ++f)
      manifest["derived"]["ruptured_nodes"].push_back(
          result.rupture[f].ruptured_count());
    manifest["timings"]["wall_seconds"] = result.wall_seconds;
    manifest["timings"]["seconds_per_step"] =
        result.wall_seconds / double(result.steps);

    std::ofstream out(std::filesystem::path(config.output_dir) /
                      "manifest.json");
    if (!out) throw std::runtime_error("runner: cannot write manifest");
    out << manifest.dump(2) << '\n';
    if (!out) throw std::runtime_error("runner: manifest write failed");
    message = "ok";
    return RunStatus::Ok;
  } catch (const InstabilityError& e) {
    message = e.what();
    return RunStatus::Instability;
  } catch (const std::invalid_argument& e) {
    message = e.what();
    return RunStatus::ValidationError;
  } catch (const std::exception& e) {
    message = e.what();
    return RunStatus::IoError;
  }
}

}  // namespace hsbi
