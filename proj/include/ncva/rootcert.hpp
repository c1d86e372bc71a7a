#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <sstream>
#include <vector>

#include "ncva/errors.hpp"
#include "ncva/linalg.hpp"

namespace ncva {

/// Overflow-safe evaluation of an analytic scalar function (a determinant).
using LogDetFn = std::function<LogDet(Complex)>;

/// Axis-aligned rectangle in the complex plane.
struct Rect {
  double re_min = 0.0, re_max = 0.0, im_min = 0.0, im_max = 0.0;

  bool contains(Complex s, double slack = 0.0) const {
    return s.real() >= re_min - slack && s.real() <= re_max + slack &&
           s.imag() >= im_min - slack && s.imag() <= im_max + slack;
  }
  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  Complex center() const {
    return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)};
  }
};

struct WindingOptions {
  double max_step_phase = 0.5 * M_PI;  ///< subdivide until below this
  int max_depth = 42;                  ///< per-edge halving limit
  int contour_retries = 3;             ///< rect inflations if a root sits on it
  double retry_inflation = 3e-4;       ///< relative inflation per retry
};

namespace detail {

struct RootOnContour {};

inline double winding_edge(const LogDetFn& fn, Complex a, Complex b,
                           double phase_a, double phase_b, int depth,
                           const WindingOptions& opt) {
  const double step = wrap_phase(phase_b - phase_a);
  if (std::abs(step) < opt.max_step_phase) return step;
  if (depth >= opt.max_depth) {
    std::ostringstream msg;
    msg << "argument-principle contour: phase not resolvable between s=("
        << a.real() << "," << a.imag() << ") and s=(" << b.real() << ","
        << b.imag() << ")";
    throw ConvergenceError(msg.str());
  }
  const Complex mid = 0.5 * (a + b);
  const LogDet ld = fn(mid);
  if (ld.singular) throw RootOnContour{};
  return winding_edge(fn, a, mid, phase_a, ld.phase, depth + 1, opt) +
         winding_edge(fn, mid, b, ld.phase, phase_b, depth + 1, opt);
}

inline int winding_once(const LogDetFn& fn, const Rect& rect,
                        const WindingOptions& opt) {
  const Complex corners[4] = {{rect.re_min, rect.im_min},
                              {rect.re_max, rect.im_min},
                              {rect.re_max, rect.im_max},
                              {rect.re_min, rect.im_max}};
  double phases[4];
  for (int i = 0; i < 4; ++i) {
    const LogDet ld = fn(corners[i]);
    if (ld.singular) throw RootOnContour{};
    phases[i] = ld.phase;
  }
  double total = 0.0;
  for (int i = 0; i < 4; ++i) {
    const int j = (i + 1) % 4;
    total += winding_edge(fn, corners[i], corners[j], phases[i], phases[j], 0,
                          opt);
  }
  const double turns = total / (2.0 * M_PI);
  const int count = static_cast<int>(std::lround(turns));
  if (std::abs(turns - count) > 0.25) {
    std::ostringstream msg;
    msg << "argument-principle contour: non-integer winding " << turns
        << " on rect [" << rect.re_min << "," << rect.re_max << "]x["
        << rect.im_min << "," << rect.im_max << "]";
    throw ConvergenceError(msg.str());
  }
  return count;
}

}  // namespace detail

/// Number of zeros (with multiplicity) of fn inside the rectangle, counted
/// from the winding of the phase along the boundary with adaptive edge
/// subdivision. A zero sitting on the contour triggers a slight inflation
/// of the rectangle and a retry.
inline int count_zeros(const LogDetFn& fn, Rect rect,
                       const WindingOptions& opt = {}) {
  for (int attempt = 0;; ++attempt) {
    try {
      return detail::winding_once(fn, rect, opt);
    } catch (const detail::RootOnContour&) {
      if (attempt >= opt.contour_retries)
        throw ConvergenceError(
            "argument-principle contour: zero on contour persists after "
            "retries");
      const double dr = opt.retry_inflation * (1.0 + rect.width()) *
                        (attempt + 1);
      const double di = opt.retry_inflation * (1.0 + rect.height()) *
                        (attempt + 1);
      rect.re_min -= dr;
      rect.re_max += dr;
      rect.im_min -= di;
      rect.im_max += di;
    }
  }
}

struct NewtonOptions {
  double fd_step_rel = 1e-6;  ///< finite-difference step 1e-6 * (1 + |s|)
  double tol_rel = 1e-13;     ///< stop when |ds| < tol_rel * (1 + |s|)
  int max_iter = 60;
};

struct NewtonResult {
  Complex root{};
  bool converged = false;
  int iterations = 0;
};

/// Newton iteration on the scalar determinant with a finite-difference
/// derivative. Works on exp(log_det - r) with a running normalization r,
/// so the step is insensitive to determinant overflow/underflow.
inline NewtonResult newton_polish(const LogDetFn& fn, Complex s,
                                  const NewtonOptions& opt = {}) {
  NewtonResult res;
  for (int it = 0; it < opt.max_iter; ++it) {
    res.iterations = it + 1;
    const LogDet f0 = fn(s);
    if (f0.singular) {  // exact zero pivot: we are on a root
      res.root = s;
      res.converged = true;
      return res;
    }
    const double h = opt.fd_step_rel * (1.0 + std::abs(s));
    const LogDet fp = fn(s + Complex(h, 0.0));
    const LogDet fm = fn(s - Complex(h, 0.0));
    if (fp.singular || fm.singular) {
      res.root = fp.singular ? s + Complex(h, 0.0) : s - Complex(h, 0.0);
      res.converged = true;
      return res;
    }
    // common normalization keeps everything in floating range
    const double r = f0.log_mag;
    const Complex v0 = std::exp(Complex(0.0, f0.phase));
    const Complex vp = std::exp(Complex(fp.log_mag - r, fp.phase));
    const Complex vm = std::exp(Complex(fm.log_mag - r, fm.phase));
    const Complex deriv = (vp - vm) / (2.0 * h);
    if (deriv == Complex(0.0, 0.0)) break;
    const Complex ds = v0 / deriv;
    s -= ds;
    if (std::abs(ds) < opt.tol_rel * (1.0 + std::abs(s))) {
      res.root = s;
      res.converged = true;
      return res;
    }
  }
  res.root = s;
  return res;
}

struct RootSearchOptions {
  WindingOptions winding{};
  NewtonOptions newton{};
  double cluster_tol_rel = 1e-7;  ///< roots closer than this coincide
  int max_depth = 60;             ///< rectangle bisection limit
};

namespace detail {

inline void collect_roots(const LogDetFn& fn, const Rect& rect, int count,
                          int depth, const RootSearchOptions& opt,
                          std::vector<Complex>& out) {
  if (count <= 0) return;
  const double scale = 1.0 + std::abs(rect.center());
  const bool tiny =
      rect.width() < 1e-11 * scale && rect.height() < 1e-11 * scale;
  if (count == 1 || tiny || depth >= opt.max_depth) {
    NewtonResult nr = newton_polish(fn, rect.center(), opt.newton);
    if (!nr.converged)
      throw ConvergenceError("root search: Newton failed to converge from "
                             "isolated rectangle");
    for (int i = 0; i < count; ++i) out.push_back(nr.root);
    return;
  }
  // split the longer side; nudge the split line if a root sits on it
  for (int attempt = 0; attempt < 4; ++attempt) {
    const double f = 0.5 + 0.08 * attempt;
    Rect a = rect, b = rect;
    if (rect.width() >= rect.height()) {
      const double mid = rect.re_min + f * rect.width();
      a.re_max = mid;
      b.re_min = mid;
    } else {
      const double mid = rect.im_min + f * rect.height();
      a.im_max = mid;
      b.im_min = mid;
    }
    try {
      const int ca = count_zeros(fn, a, opt.winding);
      const int cb = count_zeros(fn, b, opt.winding);
      if (ca + cb != count) continue;  // root moved into inflated overlap
      collect_roots(fn, a, ca, depth + 1, opt, out);
      collect_roots(fn, b, cb, depth + 1, opt, out);
      return;
    } catch (const ConvergenceError&) {
      if (attempt == 3) throw;
    }
  }
  throw ConvergenceError("root search: rectangle subdivision failed");
}

}  // namespace detail

/// All zeros of fn inside `rect`, certified: the argument principle fixes
/// the count, recursive bisection isolates them, Newton polishes each.
/// Multiple zeros are returned with multiplicity.
inline std::vector<Complex> certified_roots(const LogDetFn& fn,
                                            const Rect& rect,
                                            const RootSearchOptions& opt = {}) {
  const int count = count_zeros(fn, rect, opt.winding);
  std::vector<Complex> out;
  detail::collect_roots(fn, rect, count, 0, opt, out);
  // deterministic order
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() < b.imag();
  });
  return out;
}

}  // namespace ncva
