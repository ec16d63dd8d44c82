#include "hsbi/outputs.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hsbi {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

void StationSeries::record(const FaultSurface& fault, std::int64_t node,
                           double time) {
  t.push_back(time);
  sigma12.push_back(fault.tau(node, 0));
  sigma22.push_back(-fault.sigma_n_eff[node]);
  rate1.push_back(fault.slip_rate(node, 0));
  rate3.push_back(fault.slip_rate(node, 1));
}

std::vector<double> StationSeries::rate_magnitude() const {
  std::vector<double> m(t.size());
  for (size_t i = 0; i < t.size(); ++i)
    m[i] = std::hypot(rate1[i], rate3[i]);
  return m;
}

std::string station_csv(const StationSeries& s) {
  std::ostringstream out;
  out.precision(17);
  out << "t,sigma12,sigma22,slip_rate1,slip_rate3\n";
  for (size_t i = 0; i < s.t.size(); ++i)
    out << s.t[i] << ',' << s.sigma12[i] << ',' << s.sigma22[i] << ','
        << s.rate1[i] << ',' << s.rate3[i] << '\n';
  return out.str();
}

void write_station_csv(const std::string& path, const StationSeries& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("outputs: cannot write " + path);
  out << station_csv(s);
  if (!out) throw std::runtime_error("outputs: write failed for " + path);
}

StationSeries read_station_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("outputs: cannot open " + path);
  StationSeries s;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    double v[5];
    char comma;
    row >> v[0] >> comma >> v[1] >> comma >> v[2] >> comma >> v[3] >> comma >>
        v[4];
    if (!row) throw std::runtime_error("outputs: malformed row in " + path);
    s.t.push_back(v[0]);
    s.sigma12.push_back(v[1]);
    s.sigma22.push_back(v[2]);
    s.rate1.push_back(v[3]);
    s.rate3.push_back(v[4]);
  }
  return s;
}

RuptureTimeMap RuptureTimeMap::for_fault(const FaultSurface& fault,
                                         double threshold) {
  RuptureTimeMap m;
  m.threshold = threshold;
  for (std::int64_t n = 0; n < fault.size(); ++n) {
    m.ni = std::max(m.ni, fault.ii[size_t(n)] + 1);
    m.nk = std::max(m.nk, fault.kk[size_t(n)] + 1);
  }
  m.dx = fault.dx;
  m.x1_origin = fault.x1_origin;
  m.x3_origin = fault.x3_origin;
  m.time = VectorXd::Constant(std::int64_t(m.ni) * m.nk, kNaN);
  return m;
}

void RuptureTimeMap::update(const FaultSurface& fault, double t) {
  for (std::int64_t n = 0; n < fault.size(); ++n) {
    const std::int64_t idx =
        std::int64_t(fault.kk[size_t(n)]) * ni + fault.ii[size_t(n)];
    if (!std::isnan(time[idx])) continue;
    if (fault.slip_rate.row(n).matrix().norm() > threshold) time[idx] = t;
  }
}

std::int64_t RuptureTimeMap::ruptured_count() const {
  std::int64_t c = 0;
  for (std::int64_t i = 0; i < time.size(); ++i)
    if (!std::isnan(time[i])) ++c;
  return c;
}

double RuptureTimeMap::max_time() const {
  double m = kNaN;
  for (std::int64_t i = 0; i < time.size(); ++i)
    if (!std::isnan(time[i]) && !(m >= time[i])) m = time[i];
  return m;
}

void write_field(const std::string& path, const FieldData& field) {
  std::int64_t count = 1;
  for (auto d : field.dims) count *= d;
  if (count != std::int64_t(field.data.size()))
    throw std::invalid_argument("outputs: field dims do not match data size");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("outputs: cannot write " + path);
  out.precision(17);
  out << "hsbi-field 1\n"
      << "name " << field.name << '\n'
      << "dims";
  for (auto d : field.dims) out << ' ' << d;
  out << '\n'
      << "dx " << field.dx << '\n'
      << "time " << field.time << '\n'
      << "data\n";
  out.write(reinterpret_cast<const char*>(field.data.data()),
            std::streamsize(field.data.size() * sizeof(double)));
  if (!out) throw std::runtime_error("outputs: write failed for " + path);
}

FieldData read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("outputs: cannot open " + path);
  std::string line;
  std::getline(in, line);
  if (line != "hsbi-field 1")
    throw std::runtime_error("outputs: not a field file: " + path);
  FieldData f;
  while (std::getline(in, line) && line != "data") {
    std::istringstream row(line);
    std::string key;
    row >> key;
    if (key == "name") {
      row >> f.name;
    } else if (key == "dims") {
      std::int64_t d;
      while (row >> d) f.dims.push_back(d);
    } else if (key == "dx") {
      row >> f.dx;
    } else if (key == "time") {
      row >> f.time;
    } else {
      throw std::runtime_error("outputs: unknown header line in " + path);
    }
  }
  std::int64_t count = 1;
  for (auto d : f.dims) count *= d;
  f.data.resize(size_t(count));
  in.read(reinterpret_cast<char*>(f.data.data()),
          std::streamsize(f.data.size() * sizeof(double)));
  if (in.gcount() != std::streamsize(f.data.size() * sizeof(double)))
    throw std::runtime_error("outputs: truncated field file " + path);
  return f;
}

void write_rupture_map(const std::string& path, const RuptureTimeMap& map) {
  FieldData f;
  f.name = "rupture_time_threshold_" + std::to_string(map.threshold);
  f.dims = {map.nk, map.ni};
  f.dx = map.dx;
  f.time = 0.0;
  f.data.assign(map.time.data(), map.time.data() + map.time.size());
  write_field(path, f);
}

RuptureTimeMap read_rupture_map(const std::string& path) {
  const FieldData f = read_field(path);
  if (f.dims.size() != 2)
    throw std::runtime_error("outputs: rupture map must be 2D: " + path);
  RuptureTimeMap m;
  m.nk = int(f.dims[0]);
  m.ni = int(f.dims[1]);
  m.dx = f.dx;
  const auto pos = f.name.rfind('_');
  if (pos != std::string::npos)
    m.threshold = std::stod(f.name.substr(pos + 1));
  m.time = Eigen::Map<const VectorXd>(f.data.data(),
                                      std::int64_t(f.data.size()));
  return m;
}

std::vector<double> velocity_magnitude(const SimulationState& state,
                                       const StructuredGrid& grid) {
  const std::int64_t n = grid.num_nodes();
  std::vector<double> v(static_cast<size_t>(n));
  for (std::int64_t i = 0; i < n; ++i)
    v[size_t(i)] = state.v.segment<3>(3 * i).norm();
  return v;
}

std::vector<double> element_sigma12(const Connectivity& conn,
                                    const std::vector<ElasticMaterial>& materials,
                                    const VectorXd& u) {
  const auto& grid = conn.grid();
  const double inv4dx = 1.0 / (4.0 * grid.dx());
  std::vector<double> s(size_t(grid.num_elements()));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t e = 0; e < grid.num_elements(); ++e) {
    const auto nodes = conn.nodes(e);
    double du1_dx2 = 0.0, du2_dx1 = 0.0;
    int a = 0;
    for (int dj = 0; dj <= 1; ++dj) {
      for (int dk = 0; dk <= 1; ++dk) {
        (void)dk;
        for (int di = 0; di <= 1; ++di, ++a) {
          // trilinear shape-function gradient at the element center
          const double g1 = (2 * di - 1) * inv4dx;
          const double g2 = (2 * dj - 1) * inv4dx;
          const std::int64_t d = 3 * nodes[size_t(a)];
          du1_dx2 += g2 * u[d + 0];
          du2_dx1 += g1 * u[d + 1];
        }
      }
    }
    s[size_t(e)] =
        materials[size_t(grid.element_region(e))].mu * (du1_dx2 + du2_dx1);
  }
  return s;
}

}  // namespace hsbi
