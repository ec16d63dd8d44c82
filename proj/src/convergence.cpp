#include "hsbi/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hsbi {

namespace {

bool integer_ratio(double a, double b) {
  const double r = a / b;
  return std::abs(r - std::round(r)) < 1e-9 * r;
}

/// Fault-node index at fault coordinates (x1, x3); throws when the point is
/// not a grid point of this fault.
std::int64_t node_at(const FaultSurface& f, int ni, double x1, double x3) {
  const double fi = (x1 - f.x1_origin) / f.dx;
  const double fk = (x3 - f.x3_origin) / f.dx;
  const auto i = std::llround(fi), k = std::llround(fk);
  if (std::abs(fi - double(i)) > 1e-6 || std::abs(fk - double(k)) > 1e-6)
    throw std::invalid_argument("convergence: sample point off the grid");
  const std::int64_t idx = k * ni + i;
  if (i < 0 || k < 0 || idx >= f.size())
    throw std::invalid_argument("convergence: sample point outside the fault");
  return idx;
}

int row_width(const FaultSurface& f) {
  int ni = 0;
  for (std::int64_t n = 0; n < f.size(); ++n)
    ni = std::max(ni, f.ii[size_t(n)] + 1);
  return ni;
}

double interp(const std::vector<double>& t, const std::vector<double>& y,
              double tq) {
  if (tq <= t.front()) return y.front();
  if (tq >= t.back()) return y.back();
  const auto it = std::lower_bound(t.begin(), t.end(), tq);
  const size_t hi = size_t(it - t.begin()), lo = hi - 1;
  const double w = (tq - t[lo]) / (t[hi] - t[lo]);
  return (1.0 - w) * y[lo] + w * y[hi];
}

}  // namespace

double fit_loglog_slope(const std::vector<double>& x,
                        const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("slope fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0))
      throw std::invalid_argument("slope fit needs positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = double(x.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceResult converge(const std::string& preset_name,
                           const std::vector<double>& dx_list, double dx_ref,
                           const KernelProvider& kernels,
                           const ConvergenceOptions& options) {
  if (dx_list.empty())
    throw std::invalid_argument("convergence: empty resolution list");
  const double dx_coarse = *std::max_element(dx_list.begin(), dx_list.end());
  for (double dx : dx_list) {
    if (dx < dx_ref)
      throw std::invalid_argument(
          "convergence: the reference must be the finest grid");
    if (!integer_ratio(dx, dx_ref) || !integer_ratio(dx_coarse, dx))
      throw std::invalid_argument("convergence: grids do not nest");
  }

  const Scenario s_ref = preset(preset_name, dx_ref);
  RunOptions ropt;
  ropt.duration = options.t_end > 0.0 ? options.t_end : s_ref.duration;
  ropt.max_kernel_history = options.max_kernel_history;

  const RunResult ref = run_scenario(s_ref, kernels, ropt);
  const FaultSurface& f_ref = ref.final_faults[0];
  const int ni_ref = row_width(f_ref);

  // sample the coarsest run's node lattice restricted to the rupture region;
  // all grids share the fault origin, so these points exist on every grid
  const auto& rpt = s_ref.faults[0];
  std::vector<std::pair<double, double>> points;
  const auto lo_step = [&](double x, double org) {
    return std::int64_t(std::ceil((x - org) / dx_coarse - 1e-9));
  };
  const auto hi_step = [&](double x, double org) {
    return std::int64_t(std::floor((x - org) / dx_coarse + 1e-9));
  };
  for (auto k = lo_step(rpt.x3_lo, f_ref.x3_origin);
       k <= hi_step(rpt.x3_hi, f_ref.x3_origin); ++k)
    for (auto i = lo_step(rpt.x1_lo, f_ref.x1_origin);
         i <= hi_step(rpt.x1_hi, f_ref.x1_origin); ++i)
      points.emplace_back(f_ref.x1_origin + double(i) * dx_coarse,
                          f_ref.x3_origin + double(k) * dx_coarse);

  std::vector<double> ref_slip(points.size());
  double ref_norm2 = 0.0;
  for (size_t p = 0; p < points.size(); ++p) {
    const auto n = node_at(f_ref, ni_ref, points[p].first, points[p].second);
    ref_slip[p] = f_ref.slip.row(n).matrix().norm();
    ref_norm2 += ref_slip[p] * ref_slip[p];
  }
  if (!(ref_norm2 > 0.0))
    throw std::invalid_argument(
        "convergence: reference run produced no slip at the comparison time");

  ConvergenceResult out;
  out.dx = dx_list;
  for (double dx : dx_list) {
    const Scenario s = preset(preset_name, dx);
    const RunResult run = run_scenario(s, kernels, ropt);
    const FaultSurface& f = run.final_faults[0];
    const int ni = row_width(f);
    double err2 = 0.0;
    for (size_t p = 0; p < points.size(); ++p) {
      const auto n = node_at(f, ni, points[p].first, points[p].second);
      const double d = f.slip.row(n).matrix().norm() - ref_slip[p];
      err2 += d * d;
    }
    out.error.push_back(std::sqrt(err2 / ref_norm2));

    const double trace_dx =
        options.trace_dx > 0.0 ? options.trace_dx : dx_list.front();
    if (dx == trace_dx) {
      const std::string station = options.trace_station.empty()
                                      ? s.stations.back().name
                                      : options.trace_station;
      const StationSeries* coarse = nullptr;
      const StationSeries* fine = nullptr;
      for (const auto& st : run.stations)
        if (st.name == station) coarse = &st;
      for (const auto& st : ref.stations)
        if (st.name == station) fine = &st;
      if (!coarse || !fine)
        throw std::invalid_argument("convergence: unknown trace station");
      const auto rm_c = coarse->rate_magnitude();
      const auto rm_f = fine->rate_magnitude();
      out.trace_t = coarse->t;
      out.trace_error.resize(rm_c.size());
      for (size_t i = 0; i < rm_c.size(); ++i)
        out.trace_error[i] =
            std::abs(rm_c[i] - interp(fine->t, rm_f, coarse->t[i]));
    }
  }

  // a slope is only meaningful across multiple nonzero errors
  if (dx_list.size() >= 2 &&
      *std::min_element(out.error.begin(), out.error.end()) > 0.0)
    out.slope = fit_loglog_slope(out.dx, out.error);
  return out;
}

}  // namespace hsbi
