#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "ncva/errors.hpp"
#include "ncva/substructure.hpp"

namespace ncva {

/// The two solution families of the resonance condition.
enum class GainSign { positive, negative };

inline const char* to_string(GainSign s) {
  return s == GainSign::positive ? "pos" : "neg";
}

/// One delayed-feedback parameter pair (g, tau) that places a root pair of
/// the resonant substructure at +- j omega.
struct DrTuning {
  double gain = 0.0;      ///< g [N/m] (equivalently kg/s^2)
  double delay = 0.0;     ///< tau [s], always >= 0
  GainSign family = GainSign::negative;
  int branch = 0;         ///< k; delays within a family step by 2*pi/omega
  double omega = 0.0;     ///< design frequency [rad/s]
  double residual = 0.0;  ///< |1 - g e_a^T A_p(jw)^{-1} b_u e^{-j w tau}|
  bool degenerate = false;///< passive RS already resonant: g = 0, delay NaN
};

/// The complex number q(j omega) with g e^{-j omega tau} = q solving the
/// resonance condition; computed as the reciprocal of
/// e_a^T (M_R (jw)^2 + C_R jw + K_R)^{-1} b_u via one linear solve.
/// Throws DegenerateTuningError when the passive resonant substructure is
/// singular at j omega (the tuned gain collapses to zero).
inline Complex resonance_ratio(const RsDecomposition& rs, double omega) {
  const Complex jw(0.0, omega);
  const Eigen::MatrixXcd A = eval_rs_passive(rs, jw);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  const Eigen::VectorXcd y = lu.solve(rs.b_u.cast<Complex>());
  const Complex denom = rs.e_a.cast<Complex>().dot(y);
  // scale against which a vanishing ratio means "passive RS resonance"
  const double scale = rs.K_R.cwiseAbs().maxCoeff() +
                       omega * omega * rs.M_R.cwiseAbs().maxCoeff();
  if (!std::isfinite(std::abs(denom)) || std::abs(denom) == 0.0 ||
      1.0 / std::abs(denom) < 1e-8 * scale)
    throw DegenerateTuningError(
        "passive RS resonance: the resonant substructure is already "
        "resonant at this frequency (zero-gain tuning)");
  return 1.0 / denom;
}

namespace detail {

/// Base delay of a family folded into [0, 2*pi): branch k then adds
/// exactly 2*k*pi/omega. A raw formula value below zero is thereby
/// replaced by the first nonnegative branch.
inline double base_phase(Complex q, GainSign family) {
  double base = family == GainSign::positive ? -std::arg(q)
                                             : M_PI - std::arg(q);
  base = std::fmod(base, 2.0 * M_PI);
  if (base < 0.0) base += 2.0 * M_PI;
  return base;
}

inline double tuning_residual(const RsDecomposition& rs, double omega,
                              double g, double tau) {
  const Complex jw(0.0, omega);
  const Eigen::MatrixXcd A = eval_rs_passive(rs, jw);
  const Eigen::VectorXcd y =
      Eigen::PartialPivLU<Eigen::MatrixXcd>(A).solve(rs.b_u.cast<Complex>());
  const Complex ratio = rs.e_a.cast<Complex>().dot(y);
  return std::abs(1.0 - g * ratio * std::exp(-jw * tau));
}

}  // namespace detail

/// Feedback parameters of the requested family and branch. k counts the
/// nonnegative delays of the family in increasing order.
inline DrTuning tune(const RsDecomposition& rs, double omega, GainSign family,
                     int k) {
  DrTuning t;
  t.family = family;
  t.branch = k;
  t.omega = omega;
  Complex q;
  try {
    q = resonance_ratio(rs, omega);
  } catch (const DegenerateTuningError&) {
    t.gain = 0.0;
    t.delay = std::numeric_limits<double>::quiet_NaN();  // indeterminate
    t.degenerate = true;
    return t;
  }
  t.gain = family == GainSign::positive ? std::abs(q) : -std::abs(q);
  t.delay = (detail::base_phase(q, family) + 2.0 * M_PI * k) / omega;
  t.residual = detail::tuning_residual(rs, omega, t.gain, t.delay);
  return t;
}

/// Both sign families for k = 0..k_max, sorted by delay ascending. The
/// caller screens the candidates for closed-loop stability and picks the
/// operating branch; the smallest delay is not always the best choice.
inline std::vector<DrTuning> enumerate_tunings(const RsDecomposition& rs,
                                               double omega, int k_max) {
  std::vector<DrTuning> out;
  for (GainSign fam : {GainSign::positive, GainSign::negative})
    for (int k = 0; k <= k_max; ++k) out.push_back(tune(rs, omega, fam, k));
  std::sort(out.begin(), out.end(), [](const DrTuning& a, const DrTuning& b) {
    const double da = a.degenerate ? std::numeric_limits<double>::max() : a.delay;
    const double db = b.degenerate ? std::numeric_limits<double>::max() : b.delay;
    return da < db;
  });
  return out;
}

}  // namespace ncva
