#pragma once

#include <string>
#include <vector>

#include "hsbi/sbi.hpp"

namespace hsbi {

struct BenchResult {
  // FE per-step (one stiffness application) cost against strip thickness
  std::vector<int> n2;
  std::vector<double> fe_seconds;
  double fe_r2 = 0.0;            // linear-fit quality of fe_seconds vs n2
  double fe_layer_seconds = 0.0; // fitted marginal cost of one element layer

  // spectral boundary per-step cost (history push + convolution) and its
  // ratio to one FE element layer at the same in-plane size
  double sbi_seconds = 0.0;
  double sbi_to_layer_ratio = 0.0;

  // cost against in-plane size N1*N3 (log-log slopes ~ 1 for linear scaling)
  std::vector<std::int64_t> n1n3;
  std::vector<double> fe_n1n3_seconds, sbi_n1n3_seconds;
  double fe_n1n3_slope = 0.0, sbi_n1n3_slope = 0.0;
};

struct BenchOptions {
  int n1 = 48, n3 = 24;                  // in-plane size for the N2 sweep
  std::vector<int> n2_list = {4, 8, 16, 32};
  std::vector<std::pair<int, int>> n1n3_list = {{24, 12}, {48, 24}, {96, 48}};
  std::int64_t history = 128;            // convolution window for SBI timing
  int repetitions = 5;                   // median-of timing protocol
  double min_seconds = 0.02;             // per measurement, batched inner loop
};

/// Warmed-up wall-clock measurements of the two per-step workhorses.
BenchResult bench(const BenchOptions& options = {});

/// R^2 of the best straight-line fit y = a + b x; also returns the slope b.
double fit_linear_r2(const std::vector<double>& x,
                     const std::vector<double>& y, double* slope = nullptr);

std::string bench_json(const BenchResult& r);

}  // namespace hsbi
