#include "hsbi/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "hsbi/convergence.hpp"
#include "hsbi/fem.hpp"
#include "json.hpp"

namespace hsbi {

namespace {

const ElasticMaterial kRock =
    ElasticMaterial::from_wavespeeds(2670.0, 6000.0, 3464.0);
constexpr double kDx = 100.0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

/// Median per-call seconds: warm up, batch calls until a measurement is long
/// enough to trust, then repeat and take the median.
template <typename F>
double measure(F&& call, int repetitions, double min_seconds) {
  call();  // warmup
  std::int64_t batch = 1;
  for (;;) {
    const auto t0 = std::chrono::steady_clock::now();
    for (std::int64_t i = 0; i < batch; ++i) call();
    const double elapsed = seconds_since(t0);
    if (elapsed >= min_seconds || batch >= (1 << 20)) break;
    batch *= 2;
  }
  std::vector<double> samples;
  for (int r = 0; r < repetitions; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    for (std::int64_t i = 0; i < batch; ++i) call();
    samples.push_back(seconds_since(t0) / double(batch));
  }
  std::sort(samples.begin(), samples.end());
  return samples[samples.size() / 2];
}

VectorXd random_vector(std::int64_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-1e-3, 1e-3);
  VectorXd v(n);
  for (std::int64_t i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

double time_fe_apply(int n1, int n2, int n3, const BenchOptions& opt) {
  auto g = build_grid(Vec3(n1 * kDx, n2 * kDx, n3 * kDx), kDx);
  Connectivity conn(&g, g.num_nodes());
  StiffnessOperator K(conn, {kRock});
  const VectorXd u = random_vector(3 * g.num_nodes(), 42);
  VectorXd f = VectorXd::Zero(u.size());
  return measure(
      [&]() {
        f.setZero();
        K.apply(u, f);
      },
      opt.repetitions, opt.min_seconds);
}

double time_sbi_step(int n1, int n3, const KernelProvider& kernels,
                     const BenchOptions& opt) {
  const double dt = 0.4 * kDx / kRock.cp();
  SbiBoundary b(n1, n3, kDx, kRock, +1, dt, kernels, opt.history);
  const size_t n = size_t(n1) * size_t(n3);
  std::vector<double> u1(n), u2(n), u3(n), s1, s2, s3;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> d(-1e-3, 1e-3);
  for (auto& x : u1) x = d(rng);
  for (auto& x : u2) x = d(rng);
  for (auto& x : u3) x = d(rng);
  std::int64_t step = 0;
  for (; step < opt.history; ++step) b.push_history(u1, u2, u3, step);
  return measure(
      [&]() {
        b.push_history(u1, u2, u3, step++);
        b.nonlocal_term(s1, s2, s3);
      },
      opt.repetitions, opt.min_seconds);
}

}  // namespace

double fit_linear_r2(const std::vector<double>& x,
                     const std::vector<double>& y, double* slope) {
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double a = (sy - b * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean = sy / n;
  for (size_t i = 0; i < x.size(); ++i) {
    const double fit = a + b * x[i];
    ss_res += (y[i] - fit) * (y[i] - fit);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  if (slope) *slope = b;
  return ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
}

BenchResult bench(const BenchOptions& opt) {
  ElastodynamicKernels kernels;
  BenchResult r;

  std::vector<double> n2_as_double;
  for (int n2 : opt.n2_list) {
    r.n2.push_back(n2);
    r.fe_seconds.push_back(time_fe_apply(opt.n1, n2, opt.n3, opt));
    n2_as_double.push_back(double(n2));
  }
  r.fe_r2 = fit_linear_r2(n2_as_double, r.fe_seconds, &r.fe_layer_seconds);

  r.sbi_seconds = time_sbi_step(opt.n1, opt.n3, kernels, opt);
  r.sbi_to_layer_ratio = r.sbi_seconds / r.fe_layer_seconds;

  for (auto [n1, n3] : opt.n1n3_list) {
    r.n1n3.push_back(std::int64_t(n1) * n3);
    r.fe_n1n3_seconds.push_back(time_fe_apply(n1, 4, n3, opt));
    r.sbi_n1n3_seconds.push_back(time_sbi_step(n1, n3, kernels, opt));
  }
  std::vector<double> sizes(r.n1n3.begin(), r.n1n3.end());
  r.fe_n1n3_slope = fit_loglog_slope(sizes, r.fe_n1n3_seconds);
  r.sbi_n1n3_slope = fit_loglog_slope(sizes, r.sbi_n1n3_seconds);
  return r;
}

std::string bench_json(const BenchResult& r) {
  nlohmann::json j;
  j["fe"]["n2"] = r.n2;
  j["fe"]["seconds"] = r.fe_seconds;
  j["fe"]["r2"] = r.fe_r2;
  j["fe"]["layer_seconds"] = r.fe_layer_seconds;
  j["sbi"]["seconds"] = r.sbi_seconds;
  j["sbi"]["layer_ratio"] = r.sbi_to_layer_ratio;
  j["scaling"]["n1n3"] = r.n1n3;
  j["scaling"]["fe_seconds"] = r.fe_n1n3_seconds;
  j["scaling"]["sbi_seconds"] = r.sbi_n1n3_seconds;
  j["scaling"]["fe_slope"] = r.fe_n1n3_slope;
  j["scaling"]["sbi_slope"] = r.sbi_n1n3_slope;
  return j.dump(2) + "\n";
}

}  // namespace hsbi
