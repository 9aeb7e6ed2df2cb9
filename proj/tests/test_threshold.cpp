#include <doctest.h>

#include <cmath>
#include <random>

#include "tncode/threshold.hpp"

using namespace tncode;

namespace {

// Noiseless synthetic collapse data: p_fail = f((p - p_th) n^(1/nu)).
std::vector<ScalingRecord> synthetic(double p_th, double nu, const std::array<double, 3>& c,
                                     const std::vector<std::pair<size_t, double>>& sizes) {
  std::vector<ScalingRecord> out;
  for (auto [radius, n] : sizes) {
    for (double p = 0.06; p < 0.1301; p += 0.005) {
      double x = rescale(p, p_th, n, nu);
      ScalingRecord r;
      r.radius = radius;
      r.n = n;
      r.p = p;
      r.p_fail = c[0] + c[1] * x + c[2] * x * x;
      r.std_err = 1e-4;
      r.samples = 100000;
      out.push_back(r);
    }
  }
  return out;
}

const std::vector<std::pair<size_t, double>> kSizes = {{2, 42.0}, {3, 203.0}, {4, 973.0}};

}  // namespace

TEST_SUITE("threshold") {

TEST_CASE("rescale formula") {
  CHECK(rescale(0.1, 0.09, 100.0, 2.0) == doctest::Approx(0.01 * 10.0));
  CHECK(rescale(0.09, 0.09, 977.0, 3.0) == doctest::Approx(0.0));
  CHECK(rescale(0.07, 0.09, 8.0, 3.0) == doctest::Approx(-0.02 * 2.0));
}

TEST_CASE("fit recovers a planted threshold exactly on noiseless data") {
  std::array<double, 3> c = {0.15, 0.02, 0.004};
  std::vector<ScalingRecord> recs = synthetic(0.09, 3.0, c, kSizes);
  ThresholdFit fit = fit_threshold(recs, 3);
  CHECK(std::abs(fit.p_th - 0.09) < 1e-4);
  CHECK(std::abs(fit.nu - 3.0) < 1e-2);
  CHECK(fit.f_coeffs[0] == doctest::Approx(0.15).epsilon(1e-3));
  CHECK(fit.residual < 1e-3);
  CHECK(fit.iterations > 0);
  CHECK_FALSE(fit.trace.empty());
  // Trace is monotone non-increasing (best objective so far).
  for (size_t i = 1; i < fit.trace.size(); ++i) CHECK(fit.trace[i] <= fit.trace[i - 1] + 1e-15);
}

TEST_CASE("fit recovery across random planted configurations") {
  std::mt19937_64 rng(404);
  auto uni = [&](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };
  for (int cfg = 0; cfg < 10; ++cfg) {
    double p_th = uni(0.085, 0.095);
    double nu = uni(2.5, 3.5);
    std::array<double, 3> c = {uni(0.1, 0.2), uni(0.01, 0.03), uni(0.0, 0.006)};
    std::vector<ScalingRecord> recs = synthetic(p_th, nu, c, kSizes);
    ThresholdFit fit = fit_threshold(recs, 3);
    CHECK(std::abs(fit.p_th - p_th) < 1e-4);
    CHECK(std::abs(fit.nu - nu) < 1e-2);
  }
}

TEST_CASE("reference radius choice does not move the answer far") {
  std::array<double, 3> c = {0.15, 0.025, 0.002};
  std::vector<ScalingRecord> recs = synthetic(0.092, 2.8, c, kSizes);
  ThresholdFit a = fit_threshold(recs, 2);
  ThresholdFit b = fit_threshold(recs, 4);
  CHECK(std::abs(a.p_th - b.p_th) < 1e-3);
  CHECK(std::abs(a.nu - b.nu) < 5e-2);
}

TEST_CASE("stderr floor keeps degenerate points usable") {
  std::array<double, 3> c = {0.15, 0.02, 0.004};
  std::vector<ScalingRecord> recs = synthetic(0.09, 3.0, c, kSizes);
  recs[0].p_fail = 0.0;  // pretend an empty failure count
  recs[0].std_err = 0.0;
  recs[0].samples = 1000;
  CHECK_NOTHROW(fit_threshold(recs, 3));
}

TEST_CASE("input validation") {
  std::array<double, 3> c = {0.15, 0.02, 0.004};
  std::vector<ScalingRecord> one_radius = synthetic(0.09, 3.0, c, {{2, 42.0}});
  CHECK_THROWS_AS(fit_threshold(one_radius, 2), std::invalid_argument);
  std::vector<ScalingRecord> recs = synthetic(0.09, 3.0, c, kSizes);
  CHECK_THROWS_AS(fit_threshold(recs, 9), std::invalid_argument);
  CHECK_THROWS_AS(fit_threshold({}, 2), std::invalid_argument);
  // Too few p values.
  std::vector<ScalingRecord> narrow;
  for (const ScalingRecord& r : recs)
    if (r.p < 0.075) narrow.push_back(r);
  CHECK(narrow.size() >= 9);
  std::vector<ScalingRecord> two_p;
  for (const ScalingRecord& r : recs)
    if (r.p < 0.068) two_p.push_back(r);
  CHECK_THROWS_AS(fit_threshold(two_p, 3), std::invalid_argument);
}

TEST_CASE("iteration cap raises ConvergenceError") {
  std::array<double, 3> c = {0.15, 0.02, 0.004};
  std::vector<ScalingRecord> recs = synthetic(0.09, 3.0, c, kSizes);
  CHECK_THROWS_AS(fit_threshold(recs, 3, 3), ConvergenceError);
}

TEST_CASE("rate formulas") {
  CHECK(distance_estimate(512778.0) == doctest::Approx(std::pow(512778.0, 0.54)));
  CHECK(code_rate(0) == doctest::Approx(1.0 / std::sqrt(21.0)));
  CHECK(code_rate(2) == doctest::Approx((1.0 / std::sqrt(21.0)) / (4.8 * 4.8)));
  CHECK(concatenated_rate(0) == doctest::Approx(1.0));
  CHECK(concatenated_rate(3) == doctest::Approx(1.0 / 343.0));
}

}  // TEST_SUITE
