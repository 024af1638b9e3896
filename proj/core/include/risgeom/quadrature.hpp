#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace risgeom {

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

/// Raised when the adaptive rule exhausts its evaluation budget. Carries the
/// best estimate reached so far.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, IntegralResult partial)
      : std::runtime_error(what), partial_(partial) {}
  const IntegralResult& partial() const noexcept { return partial_; }

 private:
  IntegralResult partial_;
};

struct QuadratureOptions {
  double rel_tol = 1e-6;
  double abs_tol = 1e-10;
  std::size_t max_evaluations = 2'000'000;
};

/// Radius R at which the exponential tail ∫_R^∞ e^{-βr} r dr drops below
/// tail_tol · (1/β²), i.e. (βR + 1)e^{-βR} = tail_tol, found by bisection.
/// Throws std::invalid_argument for β <= 0 or tail_tol outside (0, 1).
double truncation_radius(double beta, double tail_tol);

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  int depth;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(F& f, double a, double b, int depth) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double res_g = fc * kWg[3];
  double res_k = fc * kWgk[7];
  double res_abs = std::abs(res_k);
  std::array<double, 7> fv1{};
  std::array<double, 7> fv2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    res_k += kWgk[j] * (f1 + f2);
    res_abs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) res_g += kWg[j / 2] * (f1 + f2);
  }
  const double mean = 0.5 * res_k;
  double res_asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) res_asc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));

  const double value = res_k * half;
  res_abs *= std::abs(half);
  res_asc *= std::abs(half);
  double err = std::abs((res_k - res_g) * half);
  if (res_asc != 0.0 && err != 0.0) err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  if (res_abs > uflow / (50.0 * eps)) err = std::max(50.0 * eps * res_abs, err);
  return {a, b, value, err, depth};
}

// Globally adaptive bisection (QAG/QAGP style) seeded with the pieces between
// consecutive breakpoints. Returns the state with the smallest total error
// estimate seen, so tightening the tolerance can only lower the reported
// error.
template <class F>
IntegralResult adaptive(F& f, std::span<const double> points, const QuadratureOptions& opt) {
  constexpr int kMaxDepth = 60;
  std::priority_queue<Panel> heap;
  double total = 0.0;
  double error = 0.0;
  std::size_t evals = 0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i + 1] > points[i])) continue;
    Panel p = gk15(f, points[i], points[i + 1], 0);
    evals += 15;
    total += p.value;
    error += p.error;
    heap.push(p);
  }
  IntegralResult best{total, error, evals};
  while (!heap.empty()) {
    const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    if (error <= tol) break;
    if (evals >= opt.max_evaluations) {
      best.evaluations = evals;
      throw QuadratureError("adaptive quadrature: evaluation budget exhausted", best);
    }
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const double width = worst.b - worst.a;
    if (worst.depth >= kMaxDepth ||
        width <= 8.0 * std::numeric_limits<double>::epsilon() *
                     std::max({std::abs(worst.a), std::abs(worst.b), 1e-300})) {
      // Cannot refine further; its error stays in the total.
      continue;
    }
    Panel left = gk15(f, worst.a, mid, worst.depth + 1);
    Panel right = gk15(f, mid, worst.b, worst.depth + 1);
    evals += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    if (error <= best.error_estimate) best = {total, error, evals};
  }
  if (error <= best.error_estimate) best = {total, error, evals};
  best.evaluations = evals;
  best.error_estimate = std::max(best.error_estimate, 0.0);
  return best;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integral of f over [a, b]. Converges when the
/// error estimate is below max(abs_tol, rel_tol·|value|).
template <class F>
IntegralResult integrate_1d(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  if (!std::isfinite(a) || !std::isfinite(b) || a > b) {
    throw std::invalid_argument("integrate_1d: need finite a <= b");
  }
  if (!(opt.rel_tol > 0.0) || !(opt.abs_tol > 0.0)) {
    throw std::invalid_argument("integrate_1d: tolerances must be > 0");
  }
  if (a == b) return {0.0, 0.0, 0};
  const std::array<double, 2> pts{a, b};
  return detail::adaptive(f, pts, opt);
}

template <class F>
IntegralResult integrate_1d(F&& f, double a, double b, double rel_tol, double abs_tol) {
  QuadratureOptions opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = abs_tol;
  return integrate_1d(std::forward<F>(f), a, b, opt);
}

/// Like integrate_1d over [points.front(), points.back()], with the interior
/// points used as mandatory subdivision breaks (kinks, jumps). Points must be
/// nondecreasing.
template <class F>
IntegralResult integrate_1d_breaks(F&& f, std::span<const double> points,
                                   const QuadratureOptions& opt = {}) {
  if (points.size() < 2) return {0.0, 0.0, 0};
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!std::isfinite(points[i]) || points[i + 1] < points[i]) {
      throw std::invalid_argument("integrate_1d_breaks: breakpoints must be finite and sorted");
    }
  }
  if (!(opt.rel_tol > 0.0) || !(opt.abs_tol > 0.0)) {
    throw std::invalid_argument("integrate_1d_breaks: tolerances must be > 0");
  }
  return detail::adaptive(f, points, opt);
}

struct PolarOptions {
  double rel_tol = 1e-6;
  double abs_tol = 1e-10;
  /// Integrate φ over (0, π) and double the result.
  bool even_in_phi = false;
  /// Radial breakpoints applied wherever they fall below the per-φ limit.
  std::vector<double> radial_breaks;
  std::size_t max_evaluations = 20'000'000;
};

/// ∫_{-π}^{π} ∫_0^{T(φ)} f(t, φ) t dt dφ. `t_max` is either a number or a
/// callable φ -> T(φ). The radial integral runs to a tolerance ten times
/// tighter than the angular one.
template <class F, class TMax>
IntegralResult integrate_polar(F&& f, TMax&& t_max, const PolarOptions& opt = {}) {
  if (!(opt.rel_tol > 0.0) || !(opt.abs_tol > 0.0)) {
    throw std::invalid_argument("integrate_polar: tolerances must be > 0");
  }
  auto limit = [&](double phi) -> double {
    if constexpr (std::is_invocable_r_v<double, TMax, double>) {
      return t_max(phi);
    } else {
      return static_cast<double>(t_max);
    }
  };

  QuadratureOptions inner;
  inner.rel_tol = opt.rel_tol / 10.0;
  inner.abs_tol = opt.abs_tol / 10.0;
  inner.max_evaluations = opt.max_evaluations;
  std::size_t evals = 0;
  double inner_err = 0.0;
  std::size_t inner_calls = 0;
  std::vector<double> pts;
  pts.reserve(opt.radial_breaks.size() + 2);

  auto radial = [&](double phi) -> double {
    const double tm = limit(phi);
    if (!(tm > 0.0)) return 0.0;
    pts.clear();
    pts.push_back(0.0);
    for (double b : opt.radial_breaks) {
      if (b > 0.0 && b < tm) pts.push_back(b);
    }
    pts.push_back(tm);
    std::sort(pts.begin() + 1, pts.end() - 1);
    auto g = [&](double t) { return f(t, phi) * t; };
    const IntegralResult r = detail::adaptive(g, pts, inner);
    evals += r.evaluations;
    inner_err += r.error_estimate;
    ++inner_calls;
    return r.value;
  };

  QuadratureOptions outer;
  outer.rel_tol = opt.rel_tol;
  outer.abs_tol = opt.abs_tol;
  outer.max_evaluations = opt.max_evaluations;
  constexpr double pi = 3.14159265358979323846;
  IntegralResult out;
  if (opt.even_in_phi) {
    const std::array<double, 2> phis{0.0, pi};
    out = detail::adaptive(radial, phis, outer);
    out.value *= 2.0;
    out.error_estimate *= 2.0;
  } else {
    const std::array<double, 3> phis{-pi, 0.0, pi};
    out = detail::adaptive(radial, phis, outer);
  }
  out.evaluations = evals;
  // Radial errors enter through the angular weights; approximated by the mean
  // radial error times the angular range.
  if (inner_calls > 0) out.error_estimate += 2.0 * pi * inner_err / static_cast<double>(inner_calls);
  return out;
}

}  // namespace risgeom
