#pragma once

#include <Eigen/Dense>
#include <string>
#include <string_view>
#include <vector>

#include "cdcr/actuation.hpp"
#include "cdcr/basis.hpp"
#include "cdcr/kinematics.hpp"
#include "cdcr/model.hpp"
#include "cdcr/quadrature.hpp"
#include "cdcr/record.hpp"

namespace cdcr {

/// How the discrete system treats bending and boundary actuation.
///  - Literal: no bending stiffness matrix; actuation load
///    Gamma * W(0) * int(Phi).
///  - ConsistentWeakForm: adds S = E int(I Phi_s Phi_s^T) and the
///    test-function-weighted actuation load from the natural boundary
///    condition.
enum class Fidelity { Literal, ConsistentWeakForm };

/// How the displacement-mode multiplier lambda is obtained.
///  - ConstraintProjection: lambda is chosen each step so that the updated
///    state satisfies the tendon constraint exactly.
///  - ClosedForm: lambda from the tip moment balance with W(L) eliminated
///    through the constraint, regularised near the 0/0 rest state.
enum class MultiplierRule { ConstraintProjection, ClosedForm };

Fidelity parse_fidelity(std::string_view name);
std::string_view to_string(Fidelity fidelity);
MultiplierRule parse_multiplier_rule(std::string_view name);
std::string_view to_string(MultiplierRule rule);

struct SolverOptions {
  double dt = 1e-3;
  double t_end = 3.0;
  Fidelity fidelity = Fidelity::ConsistentWeakForm;
  MultiplierRule multiplier = MultiplierRule::ConstraintProjection;
  double lambda_epsilon = 1e-8;  // m, on the closed-form denominator
  int order = 6;
  BasisKind basis = BasisKind::Orthonormal;
  int panels = 16;
  int points_per_panel = 5;
  int output_stride = 10;     // steps between recorded samples
  int output_samples = 101;   // arc-length samples of recorded shapes
  double divergence_limit = 1e3;  // rad

  void validate() const;
};

struct ModalState {
  double t = 0.0;
  Eigen::VectorXd c;
  Eigen::VectorXd c_t;
  Eigen::VectorXd c_tt;  // acceleration used by the last step
};

/// Boundary actuation coefficient: -Delta_F / 2 (force) or +lambda / 2
/// (displacement).
double actuation_coefficient(InputMode mode, double input, double lambda);

/// Closed-form multiplier
///   lambda = 2 EI(L) theta_s(L) theta(L) / (2 Delta_l + int W_s theta),
/// falling back to 2 EI(L) theta_s(L) / W(L) when the denominator magnitude is
/// below `epsilon`.
double closed_form_multiplier(double tip_bending_stiffness, double tip_spacing, double theta_tip,
                              double theta_s_tip, double int_ws_theta, double delta_l, double epsilon);

/// State-independent Galerkin matrices plus the cached quadrature samples
/// needed for the state-dependent terms K, h and f_Q.
class GalerkinAssembly {
 public:
  GalerkinAssembly(const RobotModel& model, const ModalBasis& basis, const QuadratureGrid& grid);

  int order() const { return static_cast<int>(mass_.rows()); }
  const QuadratureGrid& grid() const { return grid_; }

  const Eigen::MatrixXd& mass() const { return mass_; }          // rho int I Phi Phi^T
  const Eigen::MatrixXd& damping() const { return damping_; }    // c int Phi Phi^T
  const Eigen::MatrixXd& stiffness() const { return stiffness_; }  // E int I Phi_s Phi_s^T
  const Eigen::VectorXd& basis_integral() const { return int_phi_; }
  /// int W_s Phi ds.
  const Eigen::VectorXd& spacing_slope_integral() const { return int_ws_phi_; }
  /// Delta_l = g^T c for theta = Phi^T c.
  const Eigen::VectorXd& tendon_gradient() const { return tendon_gradient_; }
  const Eigen::VectorXd& tip_values() const { return tip_phi_; }
  const Eigen::VectorXd& tip_slopes() const { return tip_dphi_; }

  /// Quadrature-node samples of Phi (rows: nodes).
  const Eigen::MatrixXd& phi() const { return phi_; }

  Eigen::MatrixXd coupling_matrix(const Eigen::VectorXd& c) const;                          // K(c)
  Eigen::VectorXd coriolis(const Eigen::VectorXd& c, const Eigen::VectorXd& c_t) const;    // h(c, c_t)
  Eigen::VectorXd load_vector(const Eigen::VectorXd& c) const;                             // f_Q(c)

  struct StateTerms {
    Eigen::MatrixXd K;
    Eigen::VectorXd h;
    Eigen::VectorXd f_q;
    double max_abs_theta = 0.0;
  };
  /// K, h and f_Q sharing one pass of trigonometric evaluations.
  void evaluate(const Eigen::VectorXd& c, const Eigen::VectorXd& c_t, StateTerms& out) const;

 private:
  QuadratureGrid grid_;
  Eigen::VectorXd w_;
  Eigen::VectorXd area_;
  Eigen::VectorXd q_x_;
  Eigen::VectorXd q_y_;
  Eigen::MatrixXd phi_;
  Eigen::MatrixXd mass_;
  Eigen::MatrixXd damping_;
  Eigen::MatrixXd stiffness_;
  Eigen::VectorXd int_phi_;
  Eigen::VectorXd int_ws_phi_;
  Eigen::VectorXd tendon_gradient_;
  Eigen::VectorXd tip_phi_;
  Eigen::VectorXd tip_dphi_;
};

/// Per-step diagnostics.
struct StepInfo {
  double gamma = 0.0;
  double lambda = 0.0;
  double lambda_closed = 0.0;
  double input = 0.0;
  Eigen::MatrixXd system;  // matrix of the solved linear system
  Eigen::VectorXd rhs;     // right-hand side that produced c_tt
};

/// Reduced-order modal solver with explicit (semi-implicit Euler) stepping.
///
/// Each step evaluates K, h, f_Q and the actuation load from the previous
/// state, solves one dense m x m system for c_tt, then updates
/// c_t <- c_t + dt c_tt and c <- c + dt c_t. Damping and bending stiffness are
/// linear in the state and are taken at the updated velocity/position, which
/// folds dt D and dt^2 S into the system matrix.
class GalerkinSolver {
 public:
  GalerkinSolver(RobotModel model, SolverOptions options);

  const RobotModel& model() const { return model_; }
  const SolverOptions& options() const { return options_; }
  const ModalBasis& basis() const { return basis_; }
  const GalerkinAssembly& assembly() const { return assembly_; }

  ModalState initial_state() const;

  /// Advances one step; input is evaluated at state.t + dt.
  ModalState step(const ModalState& state, const ActuationProfile& profile, StepInfo* info = nullptr) const;

  /// Gamma at time t using the closed-form multiplier in displacement mode.
  double boundary_coefficient(double t, const ModalState& state, const ActuationProfile& profile) const;

  /// Closed-form multiplier evaluated on a modal state and a commanded Delta_l.
  double closed_form_lambda(const Eigen::VectorXd& c, double delta_l) const;

  /// Runs from rest to options.t_end. Never throws for numerical failure: the
  /// record is marked NonConvergence and keeps the last valid sample.
  SimulationRecord simulate(const ActuationProfile& profile, const std::string& scenario_id = "") const;

  /// Builds a recorded sample (shape, tip, energies) from a modal state.
  RecordSample sample(const ModalState& state, const ActuationProfile& profile, const StepInfo* info,
                      BackboneShape* shape = nullptr) const;

 private:
  RobotModel model_;
  SolverOptions options_;
  ModalBasis basis_;
  GalerkinAssembly assembly_;
  SampledIntegrator output_integrator_;
  BasisTable output_table_;
};

}  // namespace cdcr
