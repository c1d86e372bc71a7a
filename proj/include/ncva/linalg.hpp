#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>

namespace ncva {

using Complex = std::complex<double>;

/// Determinant of a complex matrix in overflow-safe form:
/// det = exp(log_mag) * exp(i * phase), or exactly zero when `singular`.
struct LogDet {
  double log_mag = 0.0;  ///< natural log of |det|; -inf when singular
  double phase = 0.0;    ///< arg(det), accumulated (not reduced mod 2*pi)
  bool singular = false; ///< an exact zero pivot was hit ("root hit")

  Complex value() const {
    if (singular) return {0.0, 0.0};
    return std::exp(Complex(log_mag, phase));
  }
};

/// Log-determinant by in-place partially pivoted Gaussian elimination with
/// running log accumulation. The exact determinant is recoverable through
/// value() whenever exp(log_mag) is within floating range.
inline LogDet log_det(Eigen::MatrixXcd A) {
  const Eigen::Index n = A.rows();
  LogDet out;
  int swaps = 0;
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index piv = col;
    double best = std::abs(A(col, col));
    for (Eigen::Index r = col + 1; r < n; ++r) {
      const double mag = std::abs(A(r, col));
      if (mag > best) {
        best = mag;
        piv = r;
      }
    }
    if (best == 0.0) {
      out.singular = true;
      out.log_mag = -std::numeric_limits<double>::infinity();
      return out;
    }
    if (piv != col) {
      A.row(piv).swap(A.row(col));
      ++swaps;
    }
    const Complex pivot = A(col, col);
    out.log_mag += std::log(std::abs(pivot));
    out.phase += std::arg(pivot);
    for (Eigen::Index r = col + 1; r < n; ++r) {
      const Complex factor = A(r, col) / pivot;
      A.row(r).tail(n - col - 1) -= factor * A.row(col).tail(n - col - 1);
    }
  }
  if (swaps % 2 != 0) out.phase += M_PI;
  return out;
}

/// Sum over rows of log(max_j |A_ij|). Normalizing a determinant magnitude
/// by exp of this makes it dimensionless (Hadamard-style bound with the
/// max-entry row norm).
inline double log_rowmax_scale(const Eigen::MatrixXcd& A) {
  double acc = 0.0;
  for (Eigen::Index r = 0; r < A.rows(); ++r) {
    const double m = A.row(r).cwiseAbs().maxCoeff();
    if (m == 0.0) return -std::numeric_limits<double>::infinity();
    acc += std::log(m);
  }
  return acc;
}

/// Phase difference wrapped into (-pi, pi].
inline double wrap_phase(double delta) {
  delta = std::fmod(delta, 2.0 * M_PI);
  if (delta > M_PI) delta -= 2.0 * M_PI;
  if (delta <= -M_PI) delta += 2.0 * M_PI;
  return delta;
}

}  // namespace ncva
