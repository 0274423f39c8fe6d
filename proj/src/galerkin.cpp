#include "cdcr/galerkin.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "cdcr/errors.hpp"

namespace cdcr {

Fidelity parse_fidelity(std::string_view name) {
  if (name == "literal") return Fidelity::Literal;
  if (name == "consistent_weak_form" || name == "consistent") return Fidelity::ConsistentWeakForm;
  throw ConfigError("unknown fidelity '" + std::string(name) + "'");
}

std::string_view to_string(Fidelity fidelity) {
  return fidelity == Fidelity::Literal ? "literal" : "consistent_weak_form";
}

MultiplierRule parse_multiplier_rule(std::string_view name) {
  if (name == "projection" || name == "constraint_projection") return MultiplierRule::ConstraintProjection;
  if (name == "closed_form") return MultiplierRule::ClosedForm;
  throw ConfigError("unknown multiplier rule '" + std::string(name) + "'");
}

std::string_view to_string(MultiplierRule rule) {
  return rule == MultiplierRule::ClosedForm ? "closed_form" : "projection";
}

void SolverOptions::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be >= 0");
  if (t_end > 0.0 && t_end < dt) throw ConfigError("t_end must be 0 or at least one step");
  if (order < 1 || order > 20) throw ConfigError("order must be in [1, 20]");
  if (panels < 1) throw ConfigError("panels must be >= 1");
  if (points_per_panel < 2 || points_per_panel > 12) throw ConfigError("points_per_panel must be in [2, 12]");
  if (output_stride < 1) throw ConfigError("output_stride must be >= 1");
  if (output_samples < 2) throw ConfigError("output_samples must be >= 2");
  if (!(lambda_epsilon > 0.0)) throw ConfigError("lambda_epsilon must be positive");
  if (!(divergence_limit > 0.0)) throw ConfigError("divergence_limit must be positive");
}

double actuation_coefficient(InputMode mode, double input, double lambda) {
  return mode == InputMode::Force ? -0.5 * input : 0.5 * lambda;
}

double closed_form_multiplier(double tip_bending_stiffness, double tip_spacing, double theta_tip,
                              double theta_s_tip, double int_ws_theta, double delta_l, double epsilon) {
  if (theta_tip == 0.0 && theta_s_tip == 0.0) return 0.0;
  const double den = 2.0 * delta_l + int_ws_theta;
  if (std::abs(den) < epsilon) return 2.0 * tip_bending_stiffness * theta_s_tip / tip_spacing;
  return 2.0 * tip_bending_stiffness * theta_s_tip * theta_tip / den;
}

// ---------------------------------------------------------------------------

GalerkinAssembly::GalerkinAssembly(const RobotModel& model, const ModalBasis& basis, const QuadratureGrid& grid)
    : grid_(grid) {
  if (std::abs(grid.length() - model.length()) > 1e-12 * model.length() ||
      std::abs(basis.length() - model.length()) > 1e-12 * model.length())
    throw ConfigError("basis, quadrature and model lengths differ");

  const int n = grid.size();
  const int m = basis.order();
  const auto nodes = grid.nodes();
  const auto weights = grid.weights();
  const double rho = model.material().density;
  const double E = model.material().youngs_modulus;
  const double c = model.material().damping;
  const double L = model.length();

  w_.resize(n);
  area_.resize(n);
  q_x_.resize(n);
  q_y_.resize(n);
  phi_.resize(n, m);
  Eigen::MatrixXd dphi(n, m);
  Eigen::VectorXd inertia(n), ws(n);
  for (int k = 0; k < n; ++k) {
    const double s = nodes[static_cast<std::size_t>(k)];
    w_(k) = weights[static_cast<std::size_t>(k)];
    area_(k) = model.area(s);
    inertia(k) = model.second_moment(s);
    ws(k) = model.spacing_slope(s);
    const auto [qx, qy] = model.cumulative_load(s);
    q_x_(k) = qx;
    q_y_(k) = qy;
    phi_.row(k) = basis.values(s).transpose();
    dphi.row(k) = basis.derivatives(s).transpose();
  }

  mass_ = rho * phi_.transpose() * (w_.cwiseProduct(inertia)).asDiagonal() * phi_;
  damping_ = c * phi_.transpose() * w_.asDiagonal() * phi_;
  stiffness_ = E * dphi.transpose() * (w_.cwiseProduct(inertia)).asDiagonal() * dphi;
  int_phi_ = phi_.transpose() * w_;
  int_ws_phi_ = phi_.transpose() * w_.cwiseProduct(ws);
  tip_phi_ = basis.values(L);
  tip_dphi_ = basis.derivatives(L);
  tendon_gradient_ = 0.5 * (model.spacing(L) * tip_phi_ - int_ws_phi_);

  Eigen::LLT<Eigen::MatrixXd> llt(mass_);
  if (llt.info() != Eigen::Success) throw ConfigError("numerical configuration error: mass matrix is not SPD");
}

void GalerkinAssembly::evaluate(const Eigen::VectorXd& c, const Eigen::VectorXd& c_t, StateTerms& out) const {
  const Eigen::Index n = phi_.rows();
  const Eigen::Index m = phi_.cols();
  const Eigen::VectorXd theta = phi_ * c;
  const Eigen::VectorXd theta_t = phi_ * c_t;
  const Eigen::ArrayXd sn = theta.array().sin();
  const Eigen::ArrayXd cs = theta.array().cos();
  out.max_abs_theta = theta.cwiseAbs().maxCoeff();

  // Columns [0, m): Phi sin(theta); [m, 2m): Phi cos(theta);
  // 2m: theta_t^2 cos(theta); 2m + 1: theta_t^2 sin(theta).
  Eigen::MatrixXd block(n, 2 * m + 2);
  block.leftCols(m) = sn.matrix().asDiagonal() * phi_;
  block.middleCols(m, m) = cs.matrix().asDiagonal() * phi_;
  const Eigen::ArrayXd tt2 = theta_t.array().square();
  block.col(2 * m) = (tt2 * cs).matrix();
  block.col(2 * m + 1) = (tt2 * sn).matrix();

  Eigen::MatrixXd inner;
  grid_.forward_cumulative(block, inner);
  inner = area_.asDiagonal() * inner;
  Eigen::MatrixXd outer;
  grid_.backward_cumulative(inner, outer);

  const Eigen::VectorXd ws = w_.cwiseProduct(sn.matrix());
  const Eigen::VectorXd wc = w_.cwiseProduct(cs.matrix());
  out.K = outer.leftCols(m).transpose() * ws.asDiagonal() * phi_ +
          outer.middleCols(m, m).transpose() * wc.asDiagonal() * phi_;

  const Eigen::VectorXd hv =
      ws.cwiseProduct(outer.col(2 * m)) - wc.cwiseProduct(outer.col(2 * m + 1));
  out.h = phi_.transpose() * hv;

  const Eigen::VectorXd qv = wc.cwiseProduct(q_y_) - ws.cwiseProduct(q_x_);
  out.f_q = phi_.transpose() * qv;
}

Eigen::MatrixXd GalerkinAssembly::coupling_matrix(const Eigen::VectorXd& c) const {
  StateTerms t;
  evaluate(c, Eigen::VectorXd::Zero(c.size()), t);
  return t.K;
}

Eigen::VectorXd GalerkinAssembly::coriolis(const Eigen::VectorXd& c, const Eigen::VectorXd& c_t) const {
  StateTerms t;
  evaluate(c, c_t, t);
  return t.h;
}

Eigen::VectorXd GalerkinAssembly::load_vector(const Eigen::VectorXd& c) const {
  StateTerms t;
  evaluate(c, Eigen::VectorXd::Zero(c.size()), t);
  return t.f_q;
}

// ---------------------------------------------------------------------------

namespace {

ModalBasis make_basis(const RobotModel& model, const SolverOptions& options) {
  options.validate();
  return ModalBasis(options.basis, options.order, model.length());
}

}  // namespace

GalerkinSolver::GalerkinSolver(RobotModel model, SolverOptions options)
    : model_(std::move(model)),
      options_(options),
      basis_(make_basis(model_, options_)),
      assembly_(model_, basis_, make_quadrature(options_.panels, options_.points_per_panel, model_.length())),
      output_integrator_(uniform_samples(model_.length(), options_.output_samples)),
      output_table_(tabulate(basis_, uniform_samples(model_.length(), options_.output_samples))) {}

ModalState GalerkinSolver::initial_state() const {
  const int m = basis_.order();
  ModalState s;
  s.c = Eigen::VectorXd::Zero(m);
  s.c_t = Eigen::VectorXd::Zero(m);
  s.c_tt = Eigen::VectorXd::Zero(m);
  return s;
}

double GalerkinSolver::closed_form_lambda(const Eigen::VectorXd& c, double delta_l) const {
  const double L = model_.length();
  return closed_form_multiplier(model_.bending_stiffness(L), model_.spacing(L), assembly_.tip_values().dot(c),
                                assembly_.tip_slopes().dot(c), assembly_.spacing_slope_integral().dot(c), delta_l,
                                options_.lambda_epsilon);
}

double GalerkinSolver::boundary_coefficient(double t, const ModalState& state, const ActuationProfile& profile) const {
  const double input = profile(t);
  if (profile.mode() == InputMode::Force) return actuation_coefficient(InputMode::Force, input, 0.0);
  return actuation_coefficient(InputMode::Displacement, input, closed_form_lambda(state.c, input));
}

ModalState GalerkinSolver::step(const ModalState& state, const ActuationProfile& profile, StepInfo* info) const {
  const double dt = options_.dt;
  const double t_new = state.t + dt;
  const bool consistent = options_.fidelity == Fidelity::ConsistentWeakForm;
  const double rho = model_.material().density;

  GalerkinAssembly::StateTerms terms;
  assembly_.evaluate(state.c, state.c_t, terms);

  const Eigen::MatrixXd& D = assembly_.damping();
  const Eigen::MatrixXd& S = assembly_.stiffness();
  Eigen::MatrixXd A = assembly_.mass() + rho * terms.K + dt * D;
  Eigen::VectorXd b = terms.f_q - rho * terms.h - D * state.c_t;
  if (consistent) {
    A += dt * dt * S;
    b -= S * (state.c + dt * state.c_t);
  }
  // Load per unit Gamma.
  const Eigen::VectorXd direction = consistent ? Eigen::VectorXd(2.0 * assembly_.tendon_gradient())
                                               : Eigen::VectorXd(model_.spacing(0.0) * assembly_.basis_integral());

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) throw SolverError("singular system matrix (rcond " + std::to_string(rcond) + ")");

  const double input = profile(t_new);
  double lambda = 0.0;
  double lambda_closed = 0.0;
  double gamma = 0.0;
  Eigen::VectorXd c_tt;
  if (profile.mode() == InputMode::Force) {
    gamma = actuation_coefficient(InputMode::Force, input, 0.0);
    b += gamma * direction;
    c_tt = lu.solve(b);
  } else {
    lambda_closed = closed_form_lambda(state.c, input);
    if (options_.multiplier == MultiplierRule::ClosedForm) {
      lambda = lambda_closed;
      gamma = actuation_coefficient(InputMode::Displacement, input, lambda);
      b += gamma * direction;
      c_tt = lu.solve(b);
    } else {
      const Eigen::VectorXd& g = assembly_.tendon_gradient();
      const Eigen::VectorXd x0 = lu.solve(b);
      const Eigen::VectorXd x1 = lu.solve(0.5 * direction);
      const double sens = dt * dt * g.dot(x1);
      if (!(std::abs(sens) > 1e-300)) throw SolverError("tendon constraint is insensitive to the multiplier");
      lambda = (input - g.dot(state.c + dt * state.c_t) - dt * dt * g.dot(x0)) / sens;
      gamma = actuation_coefficient(InputMode::Displacement, input, lambda);
      c_tt = x0 + lambda * x1;
      b += gamma * direction;
    }
  }

  ModalState next;
  next.t = t_new;
  next.c_tt = c_tt;
  next.c_t = state.c_t + dt * c_tt;
  next.c = state.c + dt * next.c_t;
  if (!next.c.allFinite() || !next.c_t.allFinite()) throw SolverError("non-finite modal state");
  const double peak = (assembly_.phi() * next.c).cwiseAbs().maxCoeff();
  if (!(peak <= options_.divergence_limit))
    throw SolverError("bending angle exceeded divergence limit (" + std::to_string(peak) + " rad)");

  if (info) {
    info->gamma = gamma;
    info->lambda = lambda;
    info->lambda_closed = lambda_closed;
    info->input = input;
    info->system = std::move(A);
    info->rhs = std::move(b);
  }
  return next;
}

RecordSample GalerkinSolver::sample(const ModalState& state, const ActuationProfile& profile, const StepInfo* info,
                                    BackboneShape* shape) const {
  const Eigen::VectorXd th = output_table_.phi * state.c;
  const Eigen::VectorXd th_t = output_table_.phi * state.c_t;
  const Eigen::VectorXd th_s = output_table_.dphi * state.c;
  const std::span<const double> theta(th.data(), static_cast<std::size_t>(th.size()));
  const std::span<const double> theta_t(th_t.data(), static_cast<std::size_t>(th_t.size()));
  const std::span<const double> theta_s(th_s.data(), static_cast<std::size_t>(th_s.size()));

  RecordSample r;
  r.t = state.t;
  BackboneShape local = backbone_positions(output_integrator_, theta, theta_s);
  r.tip_x = local.x.back();
  r.tip_y = local.y.back();
  r.theta_tip = th(th.size() - 1);
  r.delta_l = tendon_displacement(output_integrator_, theta, model_);
  r.energy = compute_energies(output_integrator_, theta, theta_t, theta_s, model_);
  if (info) {
    r.input = info->input;
    r.gamma = info->gamma;
    r.lambda = info->lambda;
    r.lambda_closed = info->lambda_closed;
  } else {
    r.input = profile(state.t);
    if (profile.mode() == InputMode::Force) {
      r.gamma = actuation_coefficient(InputMode::Force, r.input, 0.0);
    } else {
      r.lambda_closed = closed_form_lambda(state.c, r.input);
    }
  }
  if (shape) *shape = std::move(local);
  return r;
}

SimulationRecord GalerkinSolver::simulate(const ActuationProfile& profile, const std::string& scenario_id) const {
  using clock = std::chrono::steady_clock;
  SimulationRecord rec;
  rec.scenario_id = scenario_id;
  rec.solver = "galerkin";
  rec.mode = profile.mode();
  rec.length = model_.length();

  const long steps = std::lround(options_.t_end / options_.dt);
  const long stride = options_.output_stride;
  const auto push = [&](const ModalState& st, const StepInfo* info) {
    BackboneShape shape;
    rec.samples.push_back(sample(st, profile, info, &shape));
    rec.shapes.push_back(std::move(shape));
    rec.states.push_back(st.c);
  };

  ModalState state = initial_state();
  push(state, nullptr);
  StepInfo info;
  StepInfo* info_ptr = &info;
  double elapsed = 0.0;
  auto start = clock::now();
  long k = 0;
  try {
    for (k = 0; k < steps; ++k) {
      state.t = static_cast<double>(k) * options_.dt;
      ModalState next = step(state, profile, info_ptr);
      if (profile.mode() == InputMode::Displacement) rec.multiplier_history.emplace_back(next.t, info.lambda);
      state = std::move(next);
      if ((k + 1) % stride == 0 || k + 1 == steps) {
        elapsed += std::chrono::duration<double>(clock::now() - start).count();
        push(state, info_ptr);
        start = clock::now();
      }
    }
    elapsed += std::chrono::duration<double>(clock::now() - start).count();
  } catch (const SolverError& e) {
    elapsed += std::chrono::duration<double>(clock::now() - start).count();
    rec.status = RunStatus::NonConvergence;
    rec.failure = "step " + std::to_string(k + 1) + " (t = " + std::to_string(static_cast<double>(k + 1) * options_.dt) +
                  "): " + e.what();
    // Keep the last valid state as a flagged sample.
    if (rec.samples.empty() || rec.samples.back().t != state.t) push(state, nullptr);
    rec.samples.back().flagged = true;
  }
  rec.compute_seconds = elapsed;
  return rec;
}

}  // namespace cdcr
