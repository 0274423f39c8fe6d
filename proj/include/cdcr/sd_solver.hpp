#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "cdcr/actuation.hpp"
#include "cdcr/galerkin.hpp"
#include "cdcr/kinematics.hpp"
#include "cdcr/model.hpp"
#include "cdcr/quadrature.hpp"
#include "cdcr/record.hpp"

namespace cdcr {

struct SdOptions {
  int nodes = 201;
  double dt = 2e-5;
  double t_end = 3.0;
  double sample_interval = 0.01;  // s between recorded samples
  int output_samples = 101;
  MultiplierRule multiplier = MultiplierRule::ConstraintProjection;
  double lambda_epsilon = 1e-8;
  double divergence_limit = 1e3;

  void validate() const;
};

/// Nodal state on the uniform grid s_k = k h, k = 0..N-1.
struct GridState {
  double t = 0.0;
  std::vector<double> theta;
  std::vector<double> theta_t;
};

/// Exact solver for the inertial coupling of the discretised equation
///   d_k a_k + rho * u_k . R_k = r_k,  k = 1..n,  a_0 = 0,
/// where u_k = (sin theta_k, cos theta_k), P is the trapezoidal cumulative
/// integral of u a + v from the base, and R is the trapezoidal integral of A P
/// from s_k to the tip. The dense system is never formed: a backward Riccati
/// pass eliminates the 2-vector recursions and a forward pass recovers a.
/// O(N) per factorisation and per solve.
class CouplingSweep {
 public:
  CouplingSweep() = default;

  /// d: diagonal coefficients, area: A_k; sizes N.
  void factor(const std::vector<double>& theta, const std::vector<double>& d, const std::vector<double>& area,
              double h, double rho);

  /// Solves for a (a[0] = 0). `theta_t` supplies the velocity terms
  /// v_k = theta_t^2 (cos, -sin); pass an empty vector for v = 0.
  void solve(const std::vector<double>& r, const std::vector<double>& theta_t, std::vector<double>& a) const;

 private:
  std::size_t n_ = 0;  // index of the tip node
  double h_ = 0.0;
  double rho_ = 0.0;
  std::vector<double> d_;
  std::vector<Eigen::Vector2d> u_;
  std::vector<Eigen::Matrix2d> Y_;
  std::vector<Eigen::Matrix2d> ZY_;
  std::vector<Eigen::Vector2d> psi_;
  std::vector<Eigen::Vector2d> alpha_;
  std::vector<double> denom_;
  mutable std::vector<Eigen::Vector2d> z_;
  mutable std::vector<Eigen::Vector2d> e_;
  mutable std::vector<double> sigma_;
};

/// Spatial-discretisation reference: second-order central differences in s
/// on N uniform nodes, ghost node at the tip for the moment condition,
/// semi-implicit Euler in time with the viscous term treated implicitly.
class FiniteDifferenceSolver {
 public:
  FiniteDifferenceSolver(RobotModel model, SdOptions options);

  const RobotModel& model() const { return model_; }
  const SdOptions& options() const { return options_; }
  const std::vector<double>& nodes() const { return s_; }
  double spacing() const { return h_; }

  GridState initial_state() const;

  /// theta_tt at every node for the given state (theta_tt[0] = 0), with the
  /// actuation value `drive`: Delta_F in force mode, lambda in displacement
  /// mode.
  std::vector<double> pde_accel(const GridState& state, InputMode mode, double drive) const;

  /// One step; the input is evaluated at state.t + dt.
  GridState step(const GridState& state, const ActuationProfile& profile, StepInfo* info = nullptr) const;

  /// Tendon displacement of a nodal angle field.
  double tendon_displacement(const std::vector<double>& theta) const;

  /// Closed-form multiplier with a one-sided tip slope estimate.
  double closed_form_lambda(const std::vector<double>& theta, double delta_l) const;

  SimulationRecord simulate(const ActuationProfile& profile, const std::string& scenario_id = "") const;

  RecordSample sample(const GridState& state, const ActuationProfile& profile, const StepInfo* info,
                      BackboneShape* shape = nullptr) const;

 private:
  // r_k without actuation: elastic + load - damping * theta_t.
  void base_rhs(const GridState& state, std::vector<double>& r) const;
  std::vector<double> curvature(const std::vector<double>& theta, double tip_moment) const;

  RobotModel model_;
  SdOptions options_;
  std::size_t n_ = 0;  // tip index
  double h_ = 0.0;
  std::vector<double> s_;
  std::vector<double> I_, Is_, A_, Ws_, Qx_, Qy_;
  double EI_tip_ = 0.0;
  double W_tip_ = 0.0;
  double tip_factor_ = 0.0;  // 2/h + I_s(L)/I(L)
  std::vector<double> unit_drive_;  // r per unit Delta_F
  std::vector<double> tendon_weights_;
  SampledIntegrator node_integrator_;
  std::vector<double> out_s_;
  SampledIntegrator out_integrator_;
};

}  // namespace cdcr
