#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "svine/errors.hpp"

// Scalar special functions and small numerical kernels shared across the
// library. Everything is double precision. Unit-interval arguments are
// clamped to [unit_eps, 1 - unit_eps] at the copula entry points, so the
// functions here may assume interior values.

namespace svine::math {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double unit_eps = 1e-12;

/// Clamp into the closed working interval [unit_eps, 1 - unit_eps].
inline double unit_clamp(double u) {
  return std::clamp(u, unit_eps, 1.0 - unit_eps);
}

/// Standard normal density.
inline double norm_pdf(double x) {
  return 0.39894228040143267794 * std::exp(-0.5 * x * x);
}

/// Standard normal distribution function, accurate to full double precision.
inline double norm_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.70710678118654752440);
}

/// Standard normal quantile (Wichura's AS241 PPND16, |rel err| < 1e-15).
double norm_quantile(double p);

/// Regularized incomplete beta function I_x(a, b).
double beta_inc(double a, double b, double x);

/// Inverse of beta_inc in x for fixed (a, b).
double beta_inc_inv(double a, double b, double p);

/// Student t density, distribution and quantile for real dof nu > 0.
double t_log_pdf(double x, double nu);
double t_pdf(double x, double nu);
double t_cdf(double x, double nu);
double t_quantile(double p, double nu);

/// Bivariate standard normal P(X <= x, Y <= y) with correlation rho.
/// Genz/Drezner-Wesolowsky hybrid, max abs error ~ 5e-16.
double bvn_cdf(double x, double y, double rho);

/// Debye function D1(x) = (1/x) * integral_0^x t/(e^t - 1) dt, x > 0.
double debye1(double x);

namespace detail {
// Gauss-Kronrod (G7, K15) nodes and weights on [-1, 1], positive half.
inline constexpr double gk_nodes[8] = {
    0.0,
    0.2077849550078985,  0.4058451513773972, 0.5860872354676911,
    0.7415311855993945,  0.8648644233597691, 0.9491079123427585,
    0.9914553711208126};
inline constexpr double gk_wk[8] = {
    0.2094821410847278,
    0.2044329400752989, 0.1903505780647854, 0.1690047266392679,
    0.1406532597155259, 0.1047900103222502, 0.06309209262997855,
    0.02293532201052922};
// Gauss weights attach to nodes 0, 2, 4, 6 of the list above.
inline constexpr double gk_wg[4] = {
    0.4179591836734694, 0.3818300505051189, 0.2797053914892767,
    0.1294849661688697};

template <class F>
std::pair<double, double> gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double f0 = f(c);
  double k = gk_wk[0] * f0;
  double g = gk_wg[0] * f0;
  for (int i = 1; i < 8; ++i) {
    const double fi = f(c - h * gk_nodes[i]) + f(c + h * gk_nodes[i]);
    k += gk_wk[i] * fi;
    if (i % 2 == 0) g += gk_wg[i / 2] * fi;
  }
  return {k * h, std::fabs(k - g) * h};
}

template <class F>
double integrate_rec(F& f, double a, double b, double tol, int depth) {
  auto [val, err] = gk15(f, a, b);
  if (err <= tol || depth <= 0) return val;
  const double c = 0.5 * (a + b);
  return integrate_rec(f, a, c, 0.5 * tol, depth - 1) +
         integrate_rec(f, c, b, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Adaptive Gauss-Kronrod quadrature of f on [a, b], absolute tolerance.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-11,
                 int max_depth = 24) {
  return detail::integrate_rec(f, a, b, abs_tol, max_depth);
}

struct BracketRoot {
  double x = 0.0;
  bool converged = false;
  int iterations = 0;
  double lo = 0.0;
  double hi = 0.0;
};

/// Root of a strictly increasing f on [lo, hi]: safeguarded Newton inside a
/// maintained bisection bracket. df may return a non-finite or non-positive
/// value to force a bisection step. Stops on |f| <= f_tol or bracket width
/// <= x_tol. Returns converged = false at the iteration cap.
template <class F, class DF>
BracketRoot solve_increasing(F&& f, DF&& df, double lo, double hi, double x0,
                             double f_tol = 1e-12, double x_tol = 1e-15,
                             int max_iter = 200) {
  BracketRoot r;
  double flo = f(lo);
  double fhi = f(hi);
  r.iterations = 2;
  // Target outside the attainable range: the boundary is the best answer.
  if (flo >= 0.0) return {lo, true, r.iterations, lo, hi};
  if (fhi <= 0.0) return {hi, true, r.iterations, lo, hi};
  double x = std::clamp(x0, lo, hi);
  for (; r.iterations < max_iter; ++r.iterations) {
    const double fx = f(x);
    if (std::fabs(fx) <= f_tol) return {x, true, r.iterations, lo, hi};
    if (fx > 0.0) hi = x; else lo = x;
    const double mid = 0.5 * (lo + hi);
    // width test plus bracket exhaustion: adjacent doubles cannot be split
    if (hi - lo <= x_tol || mid <= lo || mid >= hi)
      return {mid, true, r.iterations, lo, hi};
    const double d = df(x);
    double next = mid;
    if (std::isfinite(d) && d > 0.0) {
      const double step = fx / d;
      const double cand = x - step;
      if (cand > lo && cand < hi) next = cand;
    }
    x = next;
  }
  return {0.5 * (lo + hi), false, r.iterations, lo, hi};
}

}  // namespace svine::math
