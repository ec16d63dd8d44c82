#pragma once

#include <string>
#include <vector>

#include "hsbi/bench.hpp"
#include "hsbi/outputs.hpp"

namespace hsbi {

/// Rupture-front contour lines at fixed time intervals (marching squares
/// on the rupture-time map). An empty map yields a valid empty plot.
std::string svg_rupture_contours(const RuptureTimeMap& map,
                                 double interval = 0.5);

/// One panel per station: shear traction and slip-rate magnitude over time.
std::string svg_station_series(const std::vector<StationSeries>& stations);

/// Space-time diagram of slip rate along strike (position vs time).
std::string svg_spacetime(const FieldData& strike_line);

/// Per-step cost against strip thickness and in-plane size.
std::string svg_scaling(const BenchResult& bench);

void write_text(const std::string& path, const std::string& content);

}  // namespace hsbi
