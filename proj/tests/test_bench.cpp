#include <cmath>

#include "doctest.h"
#include "hsbi/bench.hpp"

using namespace hsbi;

TEST_CASE("linear fit recovers exact lines and flags noisy data") {
  std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
  std::vector<double> y;
  for (double v : x) y.push_back(2.0 + 3.0 * v);
  double slope = 0.0;
  CHECK(fit_linear_r2(x, y, &slope) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(slope == doctest::Approx(3.0).epsilon(1e-12));

  // strongly non-linear data fits a line poorly
  std::vector<double> bumpy = {0.0, 5.0, 0.0, 5.0};
  CHECK(fit_linear_r2(x, bumpy) < 0.5);
}

TEST_CASE("small benchmark sweep yields positive, well-formed timings") {
  BenchOptions opt;
  opt.n1 = 8;
  opt.n3 = 4;
  opt.n2_list = {2, 4};
  opt.n1n3_list = {{8, 4}, {16, 8}};
  opt.history = 16;
  opt.repetitions = 2;
  opt.min_seconds = 0.001;

  const BenchResult r = bench(opt);
  REQUIRE(r.n2.size() == 2);
  REQUIRE(r.fe_seconds.size() == 2);
  for (double s : r.fe_seconds) CHECK(s > 0.0);
  CHECK(r.fe_layer_seconds > 0.0);
  CHECK(r.sbi_seconds > 0.0);
  CHECK(r.sbi_to_layer_ratio > 0.0);
  REQUIRE(r.n1n3.size() == 2);
  CHECK(r.n1n3[0] == 32);
  CHECK(r.n1n3[1] == 128);
  for (double s : r.fe_n1n3_seconds) CHECK(s > 0.0);
  for (double s : r.sbi_n1n3_seconds) CHECK(s > 0.0);
  CHECK(std::isfinite(r.fe_n1n3_slope));
  CHECK(std::isfinite(r.sbi_n1n3_slope));

  const std::string j = bench_json(r);
  CHECK(j.find("\"layer_ratio\"") != std::string::npos);
  CHECK(j.find("\"fe_slope\"") != std::string::npos);
  CHECK(j.back() == '\n');
}
