#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "doctest.h"
#include "hsbi/plot.hpp"

using namespace hsbi;

namespace {

RuptureTimeMap make_map(int ni, int nk) {
  RuptureTimeMap m;
  m.ni = ni;
  m.nk = nk;
  m.dx = 100.0;
  m.time = VectorXd::Constant(std::int64_t(ni) * nk,
                              std::numeric_limits<double>::quiet_NaN());
  return m;
}

bool well_formed(const std::string& svg) {
  return svg.rfind("<svg", 0) == 0 &&
         svg.find("</svg>") != std::string::npos;
}

}  // namespace

TEST_CASE("rupture contours handle empty and populated maps") {
  RuptureTimeMap empty = make_map(8, 6);
  const std::string s0 = svg_rupture_contours(empty);
  CHECK(well_formed(s0));
  CHECK(s0.find("<line") == std::string::npos);

  // an expanding circular front crosses every half-second level
  RuptureTimeMap m = make_map(16, 12);
  for (int k = 0; k < m.nk; ++k)
    for (int i = 0; i < m.ni; ++i)
      m.time[std::int64_t(k) * m.ni + i] =
          0.3 * std::hypot(i - 8.0, k - 6.0);
  const std::string s1 = svg_rupture_contours(m, 0.5);
  CHECK(well_formed(s1));
  CHECK(s1.find("<line") != std::string::npos);

  CHECK_THROWS_AS(svg_rupture_contours(m, 0.0), std::invalid_argument);
}

TEST_CASE("station panels draw one labelled trace pair per station") {
  StationSeries a;
  a.name = "A";
  for (int i = 0; i < 20; ++i) {
    a.t.push_back(0.1 * (i + 1));
    a.sigma12.push_back(70e6 + 1e6 * std::sin(0.3 * i));
    a.sigma22.push_back(-120e6);
    a.rate1.push_back(std::max(0.0, i - 10.0));
    a.rate3.push_back(0.0);
  }
  StationSeries b = a;
  b.name = "B";
  const std::string s = svg_station_series({a, b});
  CHECK(well_formed(s));
  CHECK(s.find("station A") != std::string::npos);
  CHECK(s.find("station B") != std::string::npos);
  CHECK(s.find("<polyline") != std::string::npos);

  CHECK(well_formed(svg_station_series({})));
}

TEST_CASE("space-time diagram shades active cells and validates its input") {
  FieldData f;
  f.name = "strike";
  f.dims = {6, 10};
  f.dx = 100.0;
  f.data.assign(60, 0.0);
  f.data[25] = 1.5;
  f.data[37] = 3.0;
  const std::string s = svg_spacetime(f);
  CHECK(well_formed(s));
  CHECK(s.find("<rect") != std::string::npos);
  CHECK(s.find("rgb(255,") != std::string::npos);

  FieldData bad;
  bad.dims = {60};
  bad.data.assign(60, 0.0);
  CHECK_THROWS_AS(svg_spacetime(bad), std::invalid_argument);
}

TEST_CASE("scaling plot renders fitted cost curves") {
  BenchResult b;
  b.n2 = {4, 8, 16};
  b.fe_seconds = {1e-4, 2e-4, 4e-4};
  b.fe_r2 = 0.999;
  b.fe_layer_seconds = 2.5e-5;
  b.sbi_seconds = 3e-5;
  b.sbi_to_layer_ratio = 1.2;
  b.n1n3 = {288, 1152, 4608};
  b.fe_n1n3_seconds = {1e-4, 4e-4, 1.6e-3};
  b.sbi_n1n3_seconds = {2e-5, 9e-5, 4e-4};
  b.fe_n1n3_slope = 1.0;
  b.sbi_n1n3_slope = 1.08;
  const std::string s = svg_scaling(b);
  CHECK(well_formed(s));
  CHECK(s.find("<polyline") != std::string::npos);
  CHECK(s.find("1.2") != std::string::npos);

  CHECK(well_formed(svg_scaling(BenchResult{})));
}

TEST_CASE("text files are written atomically enough to read back") {
  const auto dir = std::filesystem::temp_directory_path() / "hsbi_plot_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "out.svg").string();
  write_text(path, "<svg></svg>\n");
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "<svg></svg>");
  std::filesystem::remove_all(dir);

  CHECK_THROWS_AS(write_text("/nonexistent_dir_zzz/x.svg", "a"),
                  std::runtime_error);
}
