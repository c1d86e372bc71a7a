#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <vector>

#include "ncva/errors.hpp"

namespace ncva {

/// Absorber body: mass [kg], coupling stiffness [N/m] and damping [N s/m].
struct Absorber {
  double mass = 0.0;
  double stiffness = 0.0;
  double damping = 0.0;
};

/// Physical description of a chain of d masses between two rigid walls,
/// with one active absorber attached at mass `attachment`.
///
/// Conventions (SI units throughout, angular frequencies in rad/s):
///   masses[i-1]       = m_i,  i = 1..d
///   stiffnesses[i-1]  = k_i,  i = 1..d+1   (k_1, k_{d+1} go to the frame)
///   dampings[i-1]     = c_i,  i = 1..d+1
///   attachment (p)    = index of the mass carrying the absorber
///   target (n)        = index of the mass whose vibration is silenced
///   disturbance       = index of the mass where the harmonic force enters
struct ChainModel {
  std::vector<double> masses;
  std::vector<double> stiffnesses;
  std::vector<double> dampings;
  Absorber absorber;
  int attachment = 1;
  int target = 1;
  int disturbance = 0;  ///< 0 means "use the last mass"

  int size() const { return static_cast<int>(masses.size()); }
  int disturbance_index() const {
    return disturbance == 0 ? size() : disturbance;
  }

  /// Throws ConfigError / DeploymentError if the model is not buildable.
  void validate() const {
    const int d = size();
    if (d < 1) throw ConfigError("chain: at least one primary mass required");
    if (static_cast<int>(stiffnesses.size()) != d + 1)
      throw ConfigError("chain: expected " + std::to_string(d + 1) +
                        " stiffness values (got " +
                        std::to_string(stiffnesses.size()) + ")");
    if (static_cast<int>(dampings.size()) != d + 1)
      throw ConfigError("chain: expected " + std::to_string(d + 1) +
                        " damping values (got " +
                        std::to_string(dampings.size()) + ")");
    for (int i = 0; i < d; ++i)
      if (!(masses[i] > 0.0))
        throw ConfigError("masses[" + std::to_string(i) +
                          "]: must be strictly positive");
    for (int i = 0; i <= d; ++i) {
      if (stiffnesses[i] < 0.0)
        throw ConfigError("stiffnesses[" + std::to_string(i) +
                          "]: must be nonnegative");
      if (dampings[i] < 0.0)
        throw ConfigError("dampings[" + std::to_string(i) +
                          "]: must be nonnegative");
    }
    if (!(absorber.mass > 0.0))
      throw ConfigError("absorber.m: must be strictly positive");
    if (absorber.stiffness < 0.0 || absorber.damping < 0.0)
      throw ConfigError("absorber.k, absorber.c: must be nonnegative");
    if (absorber.stiffness == 0.0 && absorber.damping == 0.0)
      throw ConfigError("absorber: at least one of k, c must be positive "
                        "(absorber must be coupled to the chain)");
    // Free ends are rejected, not silently supported: both chain ends must
    // be attached to the frame through a spring or a damper.
    if (stiffnesses[0] == 0.0 && dampings[0] == 0.0)
      throw ConfigError("chain: left end detached from frame (k_1 = c_1 = 0)");
    if (stiffnesses[d] == 0.0 && dampings[d] == 0.0)
      throw ConfigError("chain: right end detached from frame (k_" +
                        std::to_string(d + 1) + " = c_" +
                        std::to_string(d + 1) + " = 0)");
    if (attachment < 1 || attachment > d)
      throw ConfigError("p: attachment index out of range 1.." +
                        std::to_string(d));
    if (target < 1 || target > d)
      throw ConfigError("n: target index out of range 1.." + std::to_string(d));
    const int dist = disturbance_index();
    if (dist < 1 || dist > d)
      throw ConfigError("dist: disturbance index out of range 1.." +
                        std::to_string(d));
    // The resonant substructure exists only when the absorber sits on the
    // near side of the target and the disturbance enters on the far side.
    if (attachment > target || target > dist) {
      std::ostringstream msg;
      msg << "deployment restriction violated: need p <= n <= dist, got p="
          << attachment << ", n=" << target << ", dist=" << dist;
      throw DeploymentError(msg.str());
    }
  }
};

/// Matrices of M x'' + C x' + K x = B_f f + B_u u with coordinate ordering
/// x = [x_a, x_1, ..., x_d]. Row 0 is always the absorber.
struct SecondOrderSystem {
  Eigen::MatrixXd M, C, K;
  Eigen::VectorXd Bf, Bu;
  int d = 0;
  int attachment = 1;
  int target = 1;
  int disturbance = 1;

  int rows() const { return d + 1; }
  static constexpr int kAbsorberRow = 0;

  /// Row of the physical coordinate x_i (i = 1..d); row 0 is x_a.
  int row_of_mass(int i) const { return i; }

  /// Selector vector E_a for the absorber coordinate.
  Eigen::VectorXd selector_absorber() const {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(rows());
    e(kAbsorberRow) = 1.0;
    return e;
  }

  /// Selector vector E_i for mass i (1..d).
  Eigen::VectorXd selector(int i) const {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(rows());
    e(row_of_mass(i)) = 1.0;
    return e;
  }
};

/// Assembles the second-order model by the parallel-spring interconnection
/// rules: mass i couples to its neighbours through k_i, k_{i+1} (and c's),
/// the absorber couples only to the attachment mass through k_a, c_a.
inline SecondOrderSystem build_system(const ChainModel& model) {
  model.validate();
  const int d = model.size();
  const int p = model.attachment;
  const int N = d + 1;

  SecondOrderSystem sys;
  sys.d = d;
  sys.attachment = p;
  sys.target = model.target;
  sys.disturbance = model.disturbance_index();

  sys.M = Eigen::MatrixXd::Zero(N, N);
  sys.C = Eigen::MatrixXd::Zero(N, N);
  sys.K = Eigen::MatrixXd::Zero(N, N);

  sys.M(0, 0) = model.absorber.mass;
  for (int i = 1; i <= d; ++i) sys.M(i, i) = model.masses[i - 1];

  const double ka = model.absorber.stiffness;
  const double ca = model.absorber.damping;
  sys.K(0, 0) = ka;
  sys.K(0, p) = -ka;
  sys.K(p, 0) = -ka;
  sys.C(0, 0) = ca;
  sys.C(0, p) = -ca;
  sys.C(p, 0) = -ca;

  for (int i = 1; i <= d; ++i) {
    sys.K(i, i) += model.stiffnesses[i - 1] + model.stiffnesses[i];
    sys.C(i, i) += model.dampings[i - 1] + model.dampings[i];
    if (i == p) {
      sys.K(i, i) += ka;
      sys.C(i, i) += ca;
    }
    if (i + 1 <= d) {
      sys.K(i, i + 1) = -model.stiffnesses[i];
      sys.K(i + 1, i) = -model.stiffnesses[i];
      sys.C(i, i + 1) = -model.dampings[i];
      sys.C(i + 1, i) = -model.dampings[i];
    }
  }

  sys.Bf = Eigen::VectorXd::Zero(N);
  sys.Bf(sys.disturbance) = 1.0;
  sys.Bu = Eigen::VectorXd::Zero(N);
  sys.Bu(0) = 1.0;
  sys.Bu(p) = -1.0;
  return sys;
}

/// Harmonic disturbance F cos(omega t). Total on F >= 0, omega > 0.
inline double harmonic_force(double F, double omega, double t) {
  return F * std::cos(omega * t);
}

}  // namespace ncva
