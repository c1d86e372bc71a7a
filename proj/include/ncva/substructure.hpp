#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include "ncva/chain.hpp"
#include "ncva/errors.hpp"
#include "ncva/linalg.hpp"
#include "ncva/rootcert.hpp"

namespace ncva {

/// One evaluation of the closed-loop characteristic matrix
/// R(s; g, tau) = M s^2 + C s + K - g B_u E_a^T e^{-s tau}.
/// The delayed term occupies column 0 only, rows {0, p}.
struct CharMatrixEval {
  Complex s;
  Eigen::MatrixXcd value;
};

inline CharMatrixEval eval_char_matrix(const SecondOrderSystem& sys, double g,
                                       double tau, Complex s) {
  CharMatrixEval ev;
  ev.s = s;
  ev.value = (sys.M.cast<Complex>() * (s * s) + sys.C.cast<Complex>() * s +
              sys.K.cast<Complex>());
  if (g != 0.0) {
    const Complex w = g * std::exp(-s * tau);
    ev.value(0, 0) -= w;
    ev.value(sys.attachment, 0) += w;  // B_u = E_a - E_p
  }
  return ev;
}

/// Leading-block slices that define the resonant substructure: the absorber
/// plus the chain masses strictly before the target. For n = 1 the block is
/// the 1x1 absorber entry.
struct RsDecomposition {
  Eigen::MatrixXd M_R, C_R, K_R;  ///< leading n x n blocks
  Eigen::VectorXd b_u, e_a;       ///< leading n-entry slices of B_u, E_a
  int n = 1;                      ///< block dimension == target index
  int target_row = 1;             ///< row of the target coordinate (T block)
  int v_dim = 0;                  ///< dimension of the vibrating block
  int attachment = 1;             ///< p, kept for delayed-entry placement
};

inline RsDecomposition decompose(const SecondOrderSystem& sys, int n) {
  if (n < 1 || n > sys.d)
    throw ConfigError("decompose: target index out of range 1.." +
                      std::to_string(sys.d));
  if (sys.attachment > n) {
    std::ostringstream msg;
    msg << "decompose: absorber attached at p=" << sys.attachment
        << " beyond target n=" << n
        << "; the resonant substructure requires p <= n";
    throw DeploymentError(msg.str());
  }
  RsDecomposition rs;
  rs.n = n;
  rs.target_row = n;
  rs.v_dim = sys.d - n;
  rs.attachment = sys.attachment;
  rs.M_R = sys.M.topLeftCorner(n, n);
  rs.C_R = sys.C.topLeftCorner(n, n);
  rs.K_R = sys.K.topLeftCorner(n, n);
  rs.b_u = sys.Bu.head(n);
  rs.e_a = sys.selector_absorber().head(n);
  return rs;
}

/// A_R(s; g, tau) = M_R s^2 + C_R s + K_R - g b_u e_a^T e^{-s tau}.
inline Eigen::MatrixXcd eval_rs_matrix(const RsDecomposition& rs, double g,
                                       double tau, Complex s) {
  Eigen::MatrixXcd A = rs.M_R.cast<Complex>() * (s * s) +
                       rs.C_R.cast<Complex>() * s + rs.K_R.cast<Complex>();
  if (g != 0.0) {
    const Complex w = g * std::exp(-s * tau);
    A.col(0) -= w * rs.b_u.cast<Complex>();
  }
  return A;
}

/// Passive counterpart M_R s^2 + C_R s + K_R evaluated at s.
inline Eigen::MatrixXcd eval_rs_passive(const RsDecomposition& rs, Complex s) {
  return rs.M_R.cast<Complex>() * (s * s) + rs.C_R.cast<Complex>() * s +
         rs.K_R.cast<Complex>();
}

/// Overflow-safe determinant of the closed-loop characteristic matrix.
/// An exact zero pivot is reported through LogDet::singular ("root hit").
inline LogDet log_det_char(const SecondOrderSystem& sys, double g, double tau,
                           Complex s) {
  return log_det(eval_char_matrix(sys, g, tau, s).value);
}

/// Bordered determinant z(s) = det [[R(s), -B_f], [E_n^T, 0]] whose zeros
/// are the zeros of the disturbance-to-target transfer function. Returned
/// in log form together with the log of the product of largest row norms,
/// so |z| can be compared dimensionlessly.
struct BorderedDet {
  LogDet z;
  double log_scale;
  double normalized_magnitude() const {
    if (z.singular) return 0.0;
    return std::exp(z.log_mag - log_scale);
  }
};

inline BorderedDet bordered_transfer_det(const SecondOrderSystem& sys,
                                         int target, double g, double tau,
                                         Complex s) {
  const int N = sys.rows();
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(N + 1, N + 1);
  B.topLeftCorner(N, N) = eval_char_matrix(sys, g, tau, s).value;
  B.block(0, N, N, 1) = -sys.Bf.cast<Complex>();
  B(N, sys.row_of_mass(target)) = Complex(1.0, 0.0);
  BorderedDet out;
  out.z = log_det(B);
  out.log_scale = log_rowmax_scale(B);
  return out;
}

/// Result of the executable resonant-substructure/transfer-zero check:
/// every root of det A_R found in a rectangle around +j omega (and its
/// conjugate) must be a zero of the transfer function.
struct Prop1Report {
  struct RootCheck {
    Complex root;                  ///< certified root of det A_R
    double z_normalized = 0.0;     ///< |z(root)| / scale
    double rs_residual = 0.0;      ///< |det A_R(root)| / scale
  };
  std::vector<RootCheck> checks;
  int root_count = 0;       ///< argument-principle count in the rectangle
  Rect rectangle{};
  bool pass = false;
  double max_z_normalized = 0.0;
  double tolerance = 0.0;
  std::string diagnostic;
};

struct Prop1Options {
  double re_halfwidth = 1.0;     ///< rectangle half-width around Re = 0
  double im_halfwidth = 0.0;     ///< 0: use max(1, 0.05 * omega)
  double tol = 1e-8;
};

/// Locates the roots of det A_R(s; g, tau) near +j omega (argument principle
/// + Newton polish) and evaluates the bordered determinant at each; passes
/// iff the largest normalized |z| stays below tol. Conjugate roots follow by
/// symmetry of the real-coefficient problem.
inline Prop1Report check_proposition1(const SecondOrderSystem& sys, double g,
                                      double tau, double omega,
                                      const Prop1Options& opt = {}) {
  const RsDecomposition rs = decompose(sys, sys.target);
  const double imw =
      opt.im_halfwidth > 0 ? opt.im_halfwidth : std::max(1.0, 0.05 * omega);
  Prop1Report rep;
  rep.tolerance = opt.tol;
  rep.rectangle = Rect{-opt.re_halfwidth, opt.re_halfwidth, omega - imw,
                       omega + imw};
  const LogDetFn fn = [&](Complex s) {
    return log_det(eval_rs_matrix(rs, g, tau, s));
  };
  std::vector<Complex> roots;
  try {
    roots = certified_roots(fn, rep.rectangle);
  } catch (const ConvergenceError& e) {
    rep.diagnostic = std::string("root search failed: ") + e.what();
    rep.pass = false;
    return rep;
  }
  rep.root_count = static_cast<int>(roots.size());
  for (const Complex& r : roots) {
    Prop1Report::RootCheck chk;
    chk.root = r;
    const Eigen::MatrixXcd A = eval_rs_matrix(rs, g, tau, r);
    const LogDet ld = log_det(A);
    chk.rs_residual =
        ld.singular ? 0.0 : std::exp(ld.log_mag - log_rowmax_scale(A));
    chk.z_normalized =
        bordered_transfer_det(sys, sys.target, g, tau, r).normalized_magnitude();
    rep.max_z_normalized = std::max(rep.max_z_normalized, chk.z_normalized);
    rep.checks.push_back(chk);
  }
  rep.pass = rep.max_z_normalized <= opt.tol;
  if (roots.empty()) {
    rep.pass = true;  // nothing to check; report count for the caller
    rep.diagnostic = "no resonant-substructure roots in rectangle";
  }
  return rep;
}

}  // namespace ncva
