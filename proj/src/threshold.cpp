#include "tncode/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>

namespace tncode {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double floored_std_err(const ScalingRecord& r) {
  if ((r.p_fail == 0.0 || r.p_fail == 1.0) && r.samples > 0)
    return std::max(r.std_err, 1.0 / (2.0 * static_cast<double>(r.samples)));
  return r.std_err;
}

// Weighted least squares for f(x) = c0 + c1 x + c2 x^2 via normal equations.
std::optional<std::array<double, 3>> fit_quadratic(const std::vector<double>& x,
                                                   const std::vector<double>& y,
                                                   const std::vector<double>& w) {
  double a[3][4] = {};
  for (size_t i = 0; i < x.size(); ++i) {
    double basis[3] = {1.0, x[i], x[i] * x[i]};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) a[r][c] += w[i] * basis[r] * basis[c];
      a[r][3] += w[i] * basis[r] * y[i];
    }
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (std::fabs(a[piv][col]) < 1e-300) return std::nullopt;
    std::swap(a[col], a[piv]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      double f = a[r][col] / a[col][col];
      for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return std::array<double, 3>{a[0][3] / a[0][0], a[1][3] / a[1][1], a[2][3] / a[2][2]};
}

struct Objective {
  const std::vector<ScalingRecord>* ref;
  const std::vector<ScalingRecord>* rest;

  double operator()(double p_th, double nu, std::array<double, 3>* coeffs_out = nullptr) const {
    if (!(nu > 0.05) || !(p_th > -0.5) || !(p_th < 1.0)) return kInf;
    std::vector<double> x, y, w;
    for (const ScalingRecord& r : *ref) {
      x.push_back(rescale(r.p, p_th, r.n, nu));
      y.push_back(r.p_fail);
      double se = floored_std_err(r);
      w.push_back(1.0 / (se * se));
    }
    auto c = fit_quadratic(x, y, w);
    if (!c) return kInf;
    if (coeffs_out) *coeffs_out = *c;
    double obj = 0.0;
    for (const ScalingRecord& r : *rest) {
      double xi = rescale(r.p, p_th, r.n, nu);
      double fi = (*c)[0] + (*c)[1] * xi + (*c)[2] * xi * xi;
      double se = floored_std_err(r);
      double d = (r.p_fail - fi) / se;
      obj += d * d;
    }
    return std::isfinite(obj) ? obj : kInf;
  }
};

// p where the failure curves of the two largest radii cross, by linear
// interpolation of their difference on the common p grid.
double crossing_guess(const std::vector<ScalingRecord>& records) {
  std::map<size_t, std::map<double, double>> by_radius;
  for (const ScalingRecord& r : records) by_radius[r.radius][r.p] = r.p_fail;
  if (by_radius.size() < 2) return 0.1;
  auto it = by_radius.rbegin();
  const auto& big = it->second;
  ++it;
  const auto& small = it->second;
  std::vector<std::pair<double, double>> diff;  // (p, big - small)
  for (const auto& [p, pf] : big) {
    auto jt = small.find(p);
    if (jt != small.end()) diff.emplace_back(p, pf - jt->second);
  }
  std::sort(diff.begin(), diff.end());
  for (size_t i = 1; i < diff.size(); ++i) {
    double d0 = diff[i - 1].second, d1 = diff[i].second;
    if ((d0 <= 0.0 && d1 > 0.0) || (d0 >= 0.0 && d1 < 0.0)) {
      double t = d1 == d0 ? 0.5 : -d0 / (d1 - d0);
      return diff[i - 1].first + t * (diff[i].first - diff[i - 1].first);
    }
  }
  // No sign change: fall back to the median sampled p.
  std::vector<double> ps;
  for (const ScalingRecord& r : records) ps.push_back(r.p);
  std::sort(ps.begin(), ps.end());
  return ps[ps.size() / 2];
}

}  // namespace

double rescale(double p, double p_th, double n, double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("rescale: nu must be positive");
  if (!(n > 0.0)) throw std::invalid_argument("rescale: n must be positive");
  return (p - p_th) * std::pow(n, 1.0 / nu);
}

ThresholdFit fit_threshold(const std::vector<ScalingRecord>& records, size_t reference_radius,
                           size_t max_iterations) {
  std::set<size_t> radii;
  std::set<double> ps;
  for (const ScalingRecord& r : records) {
    radii.insert(r.radius);
    ps.insert(r.p);
    if (!(floored_std_err(r) > 0.0))
      throw std::invalid_argument("fit_threshold: record with non-positive stderr");
    if (!(r.n > 0.0)) throw std::invalid_argument("fit_threshold: record with n <= 0");
  }
  if (radii.size() < 3) throw std::invalid_argument("fit_threshold: need records from >= 3 radii");
  if (ps.size() < 4) throw std::invalid_argument("fit_threshold: need >= 4 distinct p values");
  if (!radii.count(reference_radius))
    throw std::invalid_argument("fit_threshold: no records at the reference radius");

  std::vector<ScalingRecord> ref, rest;
  for (const ScalingRecord& r : records)
    (r.radius == reference_radius ? ref : rest).push_back(r);
  if (ref.size() < 3)
    throw std::invalid_argument("fit_threshold: reference radius needs >= 3 points");
  if (rest.empty()) throw std::invalid_argument("fit_threshold: no non-reference records");

  Objective obj{&ref, &rest};

  // Nelder-Mead over (p_th, nu).
  struct Vertex {
    double p, nu, f;
  };
  double p0 = crossing_guess(records);
  std::array<Vertex, 3> simplex{Vertex{p0, 3.0, 0.0}, Vertex{p0 + 0.01, 3.0, 0.0},
                                Vertex{p0, 3.5, 0.0}};
  for (auto& v : simplex) v.f = obj(v.p, v.nu);

  ThresholdFit fit;
  auto order = [&] {
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };
  order();
  bool converged = false;
  for (size_t it = 0; it < max_iterations; ++it) {
    fit.iterations = it + 1;
    fit.trace.push_back(simplex[0].f);
    double spread = std::fabs(simplex[2].f - simplex[0].f);
    double size = std::fabs(simplex[1].p - simplex[0].p) + std::fabs(simplex[2].p - simplex[0].p) +
                  std::fabs(simplex[1].nu - simplex[0].nu) +
                  std::fabs(simplex[2].nu - simplex[0].nu);
    if (spread <= 1e-12 * (1.0 + std::fabs(simplex[0].f)) && size <= 1e-9) {
      converged = true;
      break;
    }
    double cp = (simplex[0].p + simplex[1].p) / 2.0;
    double cn = (simplex[0].nu + simplex[1].nu) / 2.0;
    auto eval = [&](double t) {
      Vertex v{cp + t * (cp - simplex[2].p), cn + t * (cn - simplex[2].nu), 0.0};
      v.f = obj(v.p, v.nu);
      return v;
    };
    Vertex refl = eval(1.0);
    if (refl.f < simplex[0].f) {
      Vertex stretched = eval(2.0);
      simplex[2] = stretched.f < refl.f ? stretched : refl;
    } else if (refl.f < simplex[1].f) {
      simplex[2] = refl;
    } else {
      Vertex contr = refl.f < simplex[2].f ? eval(0.5) : eval(-0.5);
      if (contr.f < std::min(refl.f, simplex[2].f)) {
        simplex[2] = contr;
      } else {
        for (int i = 1; i < 3; ++i) {
          simplex[i].p = simplex[0].p + 0.5 * (simplex[i].p - simplex[0].p);
          simplex[i].nu = simplex[0].nu + 0.5 * (simplex[i].nu - simplex[0].nu);
          simplex[i].f = obj(simplex[i].p, simplex[i].nu);
        }
      }
    }
    order();
  }
  if (!converged)
    throw ConvergenceError("fit_threshold: optimizer hit iteration cap without converging");
  if (!std::isfinite(simplex[0].f))
    throw ConvergenceError("fit_threshold: objective never became finite");

  fit.p_th = simplex[0].p;
  fit.nu = simplex[0].nu;
  fit.residual = obj(fit.p_th, fit.nu, &fit.f_coeffs);
  return fit;
}

double distance_estimate(double n) {
  if (!(n >= 1.0)) throw std::invalid_argument("distance_estimate: n must be >= 1");
  return std::pow(n, 0.54);
}

double code_rate(size_t ell) {
  return (1.0 / std::sqrt(21.0)) / std::pow(4.8, static_cast<double>(ell));
}

double concatenated_rate(size_t depth) {
  return std::pow(7.0, -static_cast<double>(depth));
}

}  // namespace tncode
