#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lg/bits.hpp"
#include "lg/parallel.hpp"
#include "lg/triangle.hpp"

namespace lg::cost {

using triangle::Variant;

struct Tunables {
  double x = 1.0;
  double a = 1.0;
  double b = 1.0;
};

/// Square root of the negative-complexity bracket (C¹ ≤ 1), constant 1 per additive term.
inline double eval_cost(Variant v, double n, double m, double d2, double x, double a, double b) {
  require(n > 1.0, "n must exceed 1");
  require(b > 0.0, "b must be positive");
  require(m >= 0.0 && d2 >= 0.0, "m and d2 must be nonnegative");
  const double logn = std::log(n);
  if (v == Variant::SparseNew) {
    const double br = n * (b * b * (m / (n * n)) * logn + (n * n) / (b * b) * (b + b * b * d2 * d2 / (n * n)));
    return std::sqrt(br);
  }
  require(x > 0.0 && a > 0.0, "x and a must be positive");
  const double t = v == Variant::Dense ? 1.0 : m / (n * n);
  const double inner = a * x * x * t + n * (b * b * t + (a / b) * (a / b) * (b + b * b / x));
  double br = x * n * n * t + (a * x) * (a * x) * t + (n / a) * (n / a) * inner;
  if (v == Variant::Sparse) br *= logn;
  return std::sqrt(br);
}

inline double eval_cost(Variant v, double n, double m, double d2, const Tunables& p) {
  return eval_cost(v, n, m, d2, p.x, p.a, p.b);
}

/// Analysis-range flags; empty when the parameters are inside the analysed regime.
inline std::vector<std::string> cost_warnings(Variant v, double n, double m, double b) {
  std::vector<std::string> out;
  if (v == Variant::Sparse && m < std::pow(n, 1.25)) out.emplace_back("m < n^(5/4): outside the analysed range");
  if (v == Variant::SparseNew) {
    if (m <= 0.0)
      out.emplace_back("m = 0: the condition b >= n^2/m is undefined");
    else if (b < n * n / m)
      out.emplace_back("b < n^2/m: outside the analysed range");
  }
  return out;
}

/// The tunables chosen in the analysis, clipped to 1 ≤ b ≤ a ≤ n, 1 ≤ x ≤ n.
inline Tunables closed_form_choice(Variant v, double n, double m) {
  auto clip = [&](double t) { return std::clamp(t, 1.0, n); };
  if (v == Variant::Dense) return {std::sqrt(n), std::pow(n, 0.75), std::sqrt(n)};
  if (v == Variant::Sparse) {
    const double t = std::max(m, 1.0) / (n * n);
    const double a = clip(std::pow(n, 0.75));
    const double xb = clip(std::sqrt(n) / std::cbrt(t));
    return {xb, a, std::min(xb, a)};
  }
  const double b = clip(std::pow(n, 4.0 / 3.0) / std::cbrt(std::max(m, 1.0) * std::log(n)));
  return {1.0, b, b};
}

struct Optimum {
  Tunables params;
  double cost = 0.0;
  Tunables integral;
  double integral_cost = 0.0;
  Tunables closed_form;
  double closed_form_cost = 0.0;
};

namespace detail {

// Log-space coordinates: x = e^{u0}, a = e^{u1}, b = e^{u2}; feasible when 0 ≤ u2 ≤ u1 ≤ L, 0 ≤ u0 ≤ L.
inline Tunables from_log(Variant v, const std::array<double, 3>& u) {
  if (v == Variant::SparseNew) return {1.0, std::exp(u[2]), std::exp(u[2])};
  return {std::exp(u[0]), std::exp(u[1]), std::exp(u[2])};
}

inline bool feasible(Variant v, const std::array<double, 3>& u, double l) {
  if (v == Variant::SparseNew) return u[2] >= 0.0 && u[2] <= l;
  return u[0] >= 0.0 && u[0] <= l && u[1] >= 0.0 && u[1] <= l && u[2] >= 0.0 && u[2] <= u[1];
}

inline Tunables round_feasible(Variant v, Tunables p, double n) {
  const double nf = std::floor(n);
  auto r = [&](double t) { return std::clamp(std::round(t), 1.0, nf); };
  if (v == Variant::SparseNew) {
    const double b = std::clamp(std::round(p.b), std::min(2.0, nf), nf);
    return {1.0, b, b};
  }
  Tunables q{r(p.x), r(p.a), r(p.b)};
  q.b = std::min(q.b, q.a);
  return q;
}

}  // namespace detail

/// Log-grid search followed by coordinate descent in log space; never worse than the closed-form choice.
inline Optimum optimize_params(Variant v, double n, double m, double d2, int grid = 40) {
  require(n > 1.0, "n must exceed 1");
  const double l = std::log(n);
  auto f = [&](const std::array<double, 3>& u) { return eval_cost(v, n, m, d2, detail::from_log(v, u)); };

  std::array<double, 3> best{0.0, 0.0, 0.0};
  double best_cost = f(best);
  const int g0 = v == Variant::SparseNew ? 1 : grid;
  for (int i = 0; i < g0; ++i)
    for (int j = 0; j < g0; ++j)
      for (int k = 0; k < grid; ++k) {
        std::array<double, 3> u{l * i / (grid - 1), l * j / (grid - 1), l * k / (grid - 1)};
        if (!detail::feasible(v, u, l)) continue;
        const double c = f(u);
        if (c < best_cost) {
          best_cost = c;
          best = u;
        }
      }
  double step = l / (grid - 1);
  while (step > 1e-12) {
    bool moved = false;
    for (int d = 0; d < 3; ++d) {
      if (v == Variant::SparseNew && d != 2) continue;
      for (double s : {step, -step}) {
        auto u = best;
        u[static_cast<std::size_t>(d)] += s;
        if (!detail::feasible(v, u, l)) continue;
        const double c = f(u);
        if (c < best_cost) {
          best_cost = c;
          best = u;
          moved = true;
        }
      }
    }
    if (!moved) step /= 2.0;
  }

  Optimum out;
  out.params = detail::from_log(v, best);
  out.cost = best_cost;
  out.closed_form = closed_form_choice(v, n, m);
  out.closed_form_cost = eval_cost(v, n, m, d2, out.closed_form);
  if (out.closed_form_cost < out.cost) {
    out.params = out.closed_form;
    out.cost = out.closed_form_cost;
  }
  out.integral = detail::round_feasible(v, out.params, n);
  out.integral_cost = eval_cost(v, n, m, d2, out.integral);
  return out;
}

// ---------------------------------------------------------------------------------------------
// Exponent fitting.

struct FitPoint {
  double n = 0.0;
  double m = 0.0;
  double d2 = 0.0;
  Optimum opt;
  double corrected = 0.0;  // cost divided by the declared log factor
};

struct FitResult {
  double exponent = 0.0;
  double residual = 0.0;  // RMS of log-space residuals
  double n_min = 0.0;
  double n_max = 0.0;
  bool log_corrected = false;
  std::string log_factor;
  std::optional<double> power_exponent;  // sparsenew: slope of the n^{5/6}(m ln n)^{1/6} term
  std::optional<double> d2_exponent;     // sparsenew: slope of the d₂√n term
  std::string dominant;                // sparsenew: term larger at n_max
  std::vector<FitPoint> points;
};

/// m = n^c, parsed from "n^c" (also "n" and "n^2").
inline double parse_m_law(const std::string& law) {
  if (law == "n") return 1.0;
  require(law.rfind("n^", 0) == 0, "m law must look like n^c");
  std::size_t used = 0;
  double c = 0.0;
  try {
    c = std::stod(law.substr(2), &used);
  } catch (const std::exception&) {
    throw Error("bad m law exponent in '" + law + "'");
  }
  require(used == law.size() - 2, "bad m law exponent in '" + law + "'");
  require(c >= 0.0 && c <= 2.0, "m law exponent must be in [0, 2]");
  return c;
}

/// Least-squares slope of log y against log x.
inline std::pair<double, double> log_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  require(xs.size() == ys.size() && xs.size() >= 3, "need at least 3 points to fit");
  const double k = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / k;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = std::log(ys[i]) - (icpt + slope * std::log(xs[i]));
    ss += r * r;
  }
  return {slope, std::sqrt(ss / k)};
}

/// Fit the optimized cost against n over log2 n ∈ [lo, hi] with `points` samples; m = n^c, d₂ = 2m/n.
/// Sparse divides √(ln n), sparsenew divides (ln n)^{1/6} and fits its power term apart from d₂√n.
inline FitResult fit_exponent(Variant v, double c, double lo = 10, double hi = 24, int points = 15) {
  require(points >= 3, "fewer than 3 points");
  require(hi > lo, "empty n range");
  FitResult out;
  out.points.resize(static_cast<std::size_t>(points));
  parallel_for(out.points.size(), [&](std::size_t i) {
    FitPoint& p = out.points[i];
    p.n = std::exp2(lo + (hi - lo) * static_cast<double>(i) / (points - 1));
    p.m = std::pow(p.n, c);
    p.d2 = 2.0 * p.m / p.n;
    const double d2 = v == Variant::SparseNew ? 0.0 : p.d2;
    p.opt = optimize_params(v, p.n, p.m, d2);
    const double logn = std::log(p.n);
    double factor = 1.0;
    if (v == Variant::Sparse) factor = std::sqrt(logn);
    if (v == Variant::SparseNew) factor = std::pow(logn, 1.0 / 6.0);
    p.corrected = p.opt.cost / factor;
  });
  std::vector<double> ns, ys, dterm;
  for (const auto& p : out.points) {
    ns.push_back(p.n);
    ys.push_back(p.corrected);
    dterm.push_back(p.d2 * std::sqrt(p.n));
  }
  std::tie(out.exponent, out.residual) = log_slope(ns, ys);
  out.n_min = ns.front();
  out.n_max = ns.back();
  out.log_corrected = v != Variant::Dense;
  out.log_factor = v == Variant::Sparse ? "sqrt(ln n)" : v == Variant::SparseNew ? "(ln n)^(1/6)" : "";
  if (v == Variant::SparseNew) {
    auto [ds, dr] = log_slope(ns, dterm);
    out.power_exponent = out.exponent;
    out.d2_exponent = ds;
    const auto& last = out.points.back();
    out.dominant = last.opt.cost >= dterm.back() ? "power" : "d2";
    if (ds > out.exponent) {
      out.exponent = ds;
      out.residual = dr;
    }
  }
  return out;
}

}  // namespace lg::cost
