#pragma once

#include <string>
#include <vector>

#include "hsbi/coupler.hpp"
#include "hsbi/fault.hpp"

namespace hsbi {

/// Per-step time series of one fault station: shear traction (sigma12),
/// effective normal stress (sigma22, compression negative) and the two
/// tangential slip-rate components.
struct StationSeries {
  std::string name;
  std::vector<double> t, sigma12, sigma22, rate1, rate3;

  void record(const FaultSurface& fault, std::int64_t node, double time);
  std::vector<double> rate_magnitude() const;
};

std::string station_csv(const StationSeries& s);
void write_station_csv(const std::string& path, const StationSeries& s);
StationSeries read_station_csv(const std::string& path);

/// First time each fault node's slip-rate magnitude exceeded the threshold;
/// NaN where it never did.
struct RuptureTimeMap {
  double threshold = 1e-3;  // [m/s]
  int ni = 0, nk = 0;
  double dx = 0.0, x1_origin = 0.0, x3_origin = 0.0;
  VectorXd time;  // row-major (k * ni + i), NaN = never ruptured

  static RuptureTimeMap for_fault(const FaultSurface& fault, double threshold);
  void update(const FaultSurface& fault, double t);
  std::int64_t ruptured_count() const;
  double max_time() const;  // NaN when the map is empty
};

/// Flat binary array of doubles behind a small self-describing text header.
struct FieldData {
  std::string name;
  std::vector<std::int64_t> dims;
  double dx = 0.0;
  double time = 0.0;
  std::vector<double> data;
};

void write_field(const std::string& path, const FieldData& field);
FieldData read_field(const std::string& path);

void write_rupture_map(const std::string& path, const RuptureTimeMap& map);
RuptureTimeMap read_rupture_map(const std::string& path);

/// |v| at every mesh node of the structured grid (split-node duplicates
/// excluded).
std::vector<double> velocity_magnitude(const SimulationState& state,
                                       const StructuredGrid& grid);

/// Element-center shear stress sigma12 from the displacement field.
std::vector<double> element_sigma12(const Connectivity& conn,
                                    const std::vector<ElasticMaterial>& materials,
                                    const VectorXd& u);

}  // namespace hsbi
