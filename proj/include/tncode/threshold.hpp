#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace tncode {

// One (radius, p) point of a failure-rate curve entering the collapse fit.
struct ScalingRecord {
  size_t radius = 0;
  double n = 0.0;
  double p = 0.0;
  double p_fail = 0.0;
  double std_err = 0.0;
  size_t samples = 0;
};

struct ThresholdFit {
  double p_th = 0.0;
  double nu = 0.0;
  std::array<double, 3> f_coeffs{};  // f(x) = c0 + c1 x + c2 x^2
  double residual = 0.0;
  size_t iterations = 0;
  std::vector<double> trace;  // best objective after each accepted step
};

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scaling variable x = (p - p_th) n^(1/nu).
double rescale(double p, double p_th, double n, double nu);

// Two-stage collapse: a weighted quadratic for the universal curve is fitted
// to the reference radius at each candidate (p_th, nu); the derivative-free
// outer search minimizes the stderr-weighted residual of all other records.
// Requires >= 3 radii and >= 4 distinct p values; stderr of degenerate
// records (p_fail exactly 0 or 1) is floored at 1/(2 samples).
ThresholdFit fit_threshold(const std::vector<ScalingRecord>& records, size_t reference_radius,
                           size_t max_iterations = 2000);

double distance_estimate(double n);    // n^0.54
double code_rate(size_t ell);          // (1/sqrt(21)) / 4.8^ell
double concatenated_rate(size_t depth);  // 7^-depth

}  // namespace tncode
