#include "cdcr/sd_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "cdcr/errors.hpp"

namespace cdcr {

void SdOptions::validate() const {
  if (nodes < 5) throw ConfigError("sd nodes must be >= 5");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("sd dt must be positive");
  if (!(t_end >= 0.0) || (t_end > 0.0 && t_end < dt)) throw ConfigError("sd t_end must be 0 or at least one step");
  if (!(sample_interval >= dt)) throw ConfigError("sd sample_interval must be >= dt");
  if (output_samples < 2) throw ConfigError("output_samples must be >= 2");
  if (!(lambda_epsilon > 0.0)) throw ConfigError("lambda_epsilon must be positive");
  if (!(divergence_limit > 0.0)) throw ConfigError("divergence_limit must be positive");
}

// ---------------------------------------------------------------------------

void CouplingSweep::factor(const std::vector<double>& theta, const std::vector<double>& d,
                           const std::vector<double>& area, double h, double rho) {
  const std::size_t N = theta.size();
  n_ = N - 1;
  h_ = h;
  rho_ = rho;
  d_ = d;
  u_.resize(N);
  for (std::size_t k = 0; k < N; ++k) u_[k] = Eigen::Vector2d(std::sin(theta[k]), std::cos(theta[k]));
  Y_.resize(N);
  ZY_.resize(N);
  psi_.resize(N);
  alpha_.assign(N, Eigen::Vector2d::Zero());
  denom_.assign(N, 0.0);
  denom_[n_] = d_[n_];

  const double hh = 0.5 * h;
  const Eigen::Matrix2d I2 = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d X = Eigen::Matrix2d::Zero();  // X_{k+1}
  for (std::size_t k = n_; k-- > 0;) {
    const Eigen::Vector2d& un = u_[k + 1];
    const Eigen::Vector2d& an = alpha_[k + 1];
    // (I + hh un an^T)^-1 by Sherman-Morrison.
    const double sm = 1.0 + hh * an.dot(un);
    Y_[k] = I2 - (hh / sm) * un * an.transpose();
    const Eigen::Matrix2d Z = X + hh * area[k + 1] * I2;
    ZY_[k] = Z * Y_[k];
    if (k == 0) break;
    const Eigen::Vector2d& uk = u_[k];
    const Eigen::Matrix2d Psi = ZY_[k] + hh * area[k] * I2;
    psi_[k] = hh * ZY_[k] * uk;
    denom_[k] = d_[k] + rho * uk.dot(psi_[k]);
    alpha_[k] = rho * Psi.transpose() * uk / denom_[k];
    X = Psi - psi_[k] * alpha_[k].transpose();
  }
}

void CouplingSweep::solve(const std::vector<double>& r, const std::vector<double>& theta_t,
                          std::vector<double>& a) const {
  const std::size_t N = n_ + 1;
  const bool vel = !theta_t.empty();
  const double hh = 0.5 * h_;
  const auto v = [&](std::size_t k) -> Eigen::Vector2d {
    if (!vel) return Eigen::Vector2d::Zero();
    const double w2 = theta_t[k] * theta_t[k];
    return Eigen::Vector2d(w2 * u_[k].y(), -w2 * u_[k].x());
  };
  z_.resize(N);
  e_.resize(N);
  sigma_.resize(N);
  z_[n_].setZero();
  sigma_[n_] = r[n_] / d_[n_];
  for (std::size_t k = n_; k-- > 0;) {
    e_[k] = v(k) + v(k + 1) + u_[k + 1] * sigma_[k + 1];
    const Eigen::Vector2d zeta = hh * ZY_[k] * e_[k] + z_[k + 1];
    if (k == 0) break;
    sigma_[k] = (r[k] - rho_ * u_[k].dot(zeta)) / denom_[k];
    z_[k] = psi_[k] * sigma_[k] + zeta;
  }
  a.assign(N, 0.0);
  Eigen::Vector2d P = Eigen::Vector2d::Zero();
  for (std::size_t k = 0; k < n_; ++k) {
    P = Y_[k] * (P + hh * (u_[k] * a[k] + e_[k]));
    a[k + 1] = sigma_[k + 1] - alpha_[k + 1].dot(P);
  }
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> node_grid(const RobotModel& model, const SdOptions& options) {
  options.validate();
  return uniform_samples(model.length(), options.nodes);
}

void resample(const std::vector<double>& src_s, const std::vector<double>& src, const std::vector<double>& dst_s,
              std::vector<double>& out) {
  out.resize(dst_s.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < dst_s.size(); ++i) {
    const double s = dst_s[i];
    while (j + 2 < src_s.size() && src_s[j + 1] < s) ++j;
    const double s0 = src_s[j];
    const double s1 = src_s[j + 1];
    if (s == s0) {
      out[i] = src[j];
    } else if (s == s1) {
      out[i] = src[j + 1];
    } else {
      const double f = (s - s0) / (s1 - s0);
      out[i] = (1.0 - f) * src[j] + f * src[j + 1];
    }
  }
}

}  // namespace

FiniteDifferenceSolver::FiniteDifferenceSolver(RobotModel model, SdOptions options)
    : model_(std::move(model)),
      options_(options),
      s_(node_grid(model_, options_)),
      node_integrator_(s_),
      out_s_(uniform_samples(model_.length(), options_.output_samples)),
      out_integrator_(out_s_) {
  const std::size_t N = s_.size();
  n_ = N - 1;
  h_ = model_.length() / static_cast<double>(n_);
  I_.resize(N);
  Is_.resize(N);
  A_.resize(N);
  Ws_.resize(N);
  Qx_.resize(N);
  Qy_.resize(N);
  for (std::size_t k = 0; k < N; ++k) {
    I_[k] = model_.second_moment(s_[k]);
    Is_[k] = model_.second_moment_slope(s_[k]);
    A_[k] = model_.area(s_[k]);
    Ws_[k] = model_.spacing_slope(s_[k]);
    const auto [qx, qy] = model_.cumulative_load(s_[k]);
    Qx_[k] = qx;
    Qy_[k] = qy;
  }
  const double L = model_.length();
  EI_tip_ = model_.bending_stiffness(L);
  W_tip_ = model_.spacing(L);
  tip_factor_ = 2.0 / h_ + Is_[n_] / I_[n_];

  // Distributed (Delta_F / 2) W_s plus the ghost-node image of the tip moment
  // -Delta_F W(L) / 2.
  unit_drive_.resize(N);
  for (std::size_t k = 0; k < N; ++k) unit_drive_[k] = 0.5 * Ws_[k];
  unit_drive_[n_] -= 0.5 * W_tip_ * tip_factor_;

  const auto& w = node_integrator_.weights();
  tendon_weights_.resize(N);
  for (std::size_t k = 0; k < N; ++k) tendon_weights_[k] = -0.5 * w[k] * Ws_[k];
  tendon_weights_[n_] += 0.5 * W_tip_;
}

GridState FiniteDifferenceSolver::initial_state() const {
  GridState s;
  s.theta.assign(s_.size(), 0.0);
  s.theta_t.assign(s_.size(), 0.0);
  return s;
}

void FiniteDifferenceSolver::base_rhs(const GridState& state, std::vector<double>& r) const {
  const double E = model_.material().youngs_modulus;
  const double c = model_.material().damping;
  const auto& th = state.theta;
  const double inv_h2 = 1.0 / (h_ * h_);
  const double inv_2h = 0.5 / h_;
  r.assign(s_.size(), 0.0);
  for (std::size_t k = 1; k <= n_; ++k) {
    double elastic;
    if (k < n_) {
      elastic = E * (I_[k] * (th[k + 1] - 2.0 * th[k] + th[k - 1]) * inv_h2 + Is_[k] * (th[k + 1] - th[k - 1]) * inv_2h);
    } else {
      elastic = E * I_[k] * 2.0 * (th[k - 1] - th[k]) * inv_h2;
    }
    const double q = Qy_[k] * std::cos(th[k]) - Qx_[k] * std::sin(th[k]);
    r[k] = elastic + q - c * state.theta_t[k];
  }
}

double FiniteDifferenceSolver::tendon_displacement(const std::vector<double>& theta) const {
  double dl = 0.0;
  for (std::size_t k = 0; k < theta.size(); ++k) dl += tendon_weights_[k] * theta[k];
  return dl;
}

double FiniteDifferenceSolver::closed_form_lambda(const std::vector<double>& theta, double delta_l) const {
  const auto& w = node_integrator_.weights();
  double int_ws_theta = 0.0;
  for (std::size_t k = 0; k < theta.size(); ++k) int_ws_theta += w[k] * Ws_[k] * theta[k];
  const double slope = (3.0 * theta[n_] - 4.0 * theta[n_ - 1] + theta[n_ - 2]) / (2.0 * h_);
  return closed_form_multiplier(EI_tip_, W_tip_, theta[n_], slope, int_ws_theta, delta_l, options_.lambda_epsilon);
}

std::vector<double> FiniteDifferenceSolver::pde_accel(const GridState& state, InputMode mode, double drive) const {
  if (state.theta.size() != s_.size() || state.theta_t.size() != s_.size())
    throw ConfigError("grid state size does not match node count");
  const double rho = model_.material().density;
  std::vector<double> r;
  base_rhs(state, r);
  const double delta_f = mode == InputMode::Force ? drive : -drive;
  for (std::size_t k = 1; k <= n_; ++k) r[k] += delta_f * unit_drive_[k];
  std::vector<double> d(s_.size());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = rho * I_[k];
  CouplingSweep sweep;
  sweep.factor(state.theta, d, A_, h_, rho);
  std::vector<double> a;
  sweep.solve(r, state.theta_t, a);
  return a;
}

GridState FiniteDifferenceSolver::step(const GridState& state, const ActuationProfile& profile, StepInfo* info) const {
  const double dt = options_.dt;
  const double t_new = state.t + dt;
  const double rho = model_.material().density;
  const double c = model_.material().damping;
  const std::size_t N = s_.size();

  std::vector<double> r;
  base_rhs(state, r);
  std::vector<double> d(N);
  for (std::size_t k = 0; k < N; ++k) d[k] = rho * I_[k] + dt * c;
  CouplingSweep sweep;
  sweep.factor(state.theta, d, A_, h_, rho);

  const double input = profile(t_new);
  double delta_f = 0.0;
  double lambda = 0.0;
  double lambda_closed = 0.0;
  std::vector<double> a;
  if (profile.mode() == InputMode::Force) {
    delta_f = input;
    for (std::size_t k = 1; k <= n_; ++k) r[k] += delta_f * unit_drive_[k];
    sweep.solve(r, state.theta_t, a);
  } else {
    lambda_closed = closed_form_lambda(state.theta, input);
    if (options_.multiplier == MultiplierRule::ClosedForm) {
      lambda = lambda_closed;
      delta_f = -lambda;
      for (std::size_t k = 1; k <= n_; ++k) r[k] += delta_f * unit_drive_[k];
      sweep.solve(r, state.theta_t, a);
    } else {
      std::vector<double> a1;
      sweep.solve(r, state.theta_t, a);
      sweep.solve(unit_drive_, {}, a1);
      double g_pred = 0.0, g_a0 = 0.0, g_a1 = 0.0;
      for (std::size_t k = 0; k < N; ++k) {
        g_pred += tendon_weights_[k] * (state.theta[k] + dt * state.theta_t[k]);
        g_a0 += tendon_weights_[k] * a[k];
        g_a1 += tendon_weights_[k] * a1[k];
      }
      const double sens = dt * dt * g_a1;
      if (!(std::abs(sens) > 1e-300)) throw SolverError("tendon constraint is insensitive to the multiplier");
      delta_f = (input - g_pred - dt * dt * g_a0) / sens;
      lambda = -delta_f;
      for (std::size_t k = 0; k < N; ++k) a[k] += delta_f * a1[k];
    }
  }

  GridState next;
  next.t = t_new;
  next.theta.resize(N);
  next.theta_t.resize(N);
  double peak = 0.0;
  bool finite = true;
  for (std::size_t k = 0; k < N; ++k) {
    next.theta_t[k] = state.theta_t[k] + dt * a[k];
    next.theta[k] = state.theta[k] + dt * next.theta_t[k];
    finite = finite && std::isfinite(next.theta[k]) && std::isfinite(next.theta_t[k]);
    peak = std::max(peak, std::abs(next.theta[k]));
  }
  if (!finite) throw SolverError("non-finite nodal state");
  if (!(peak <= options_.divergence_limit))
    throw SolverError("bending angle exceeded divergence limit (" + std::to_string(peak) + " rad)");

  if (info) {
    info->input = input;
    info->lambda = lambda;
    info->lambda_closed = lambda_closed;
    info->gamma = profile.mode() == InputMode::Force ? actuation_coefficient(InputMode::Force, input, 0.0)
                                                     : actuation_coefficient(InputMode::Displacement, input, lambda);
  }
  return next;
}

std::vector<double> FiniteDifferenceSolver::curvature(const std::vector<double>& theta, double tip_moment) const {
  std::vector<double> kappa(theta.size());
  kappa[0] = (-3.0 * theta[0] + 4.0 * theta[1] - theta[2]) / (2.0 * h_);
  for (std::size_t k = 1; k < n_; ++k) kappa[k] = (theta[k + 1] - theta[k - 1]) / (2.0 * h_);
  kappa[n_] = tip_moment / EI_tip_;
  return kappa;
}

RecordSample FiniteDifferenceSolver::sample(const GridState& state, const ActuationProfile& profile,
                                            const StepInfo* info, BackboneShape* shape) const {
  RecordSample r;
  r.t = state.t;
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
      r.lambda_closed = closed_form_lambda(state.theta, r.input);
    }
  }
  const double delta_f = profile.mode() == InputMode::Force ? r.input : -r.lambda;
  const auto kappa = curvature(state.theta, -0.5 * delta_f * W_tip_);

  const BackboneShape nodal = backbone_positions(node_integrator_, state.theta, kappa);
  r.tip_x = nodal.x.back();
  r.tip_y = nodal.y.back();
  r.theta_tip = state.theta.back();
  r.delta_l = tendon_displacement(state.theta);
  r.energy = compute_energies(node_integrator_, state.theta, state.theta_t, kappa, model_);

  if (shape) {
    shape->s = out_s_;
    resample(s_, nodal.x, out_s_, shape->x);
    resample(s_, nodal.y, out_s_, shape->y);
    resample(s_, nodal.theta, out_s_, shape->theta);
    resample(s_, nodal.kappa, out_s_, shape->kappa);
  }
  return r;
}

SimulationRecord FiniteDifferenceSolver::simulate(const ActuationProfile& profile, const std::string& scenario_id) const {
  using clock = std::chrono::steady_clock;
  SimulationRecord rec;
  rec.scenario_id = scenario_id;
  rec.solver = "sd";
  rec.mode = profile.mode();
  rec.length = model_.length();

  const long steps = std::lround(options_.t_end / options_.dt);
  const long stride = std::max(1L, std::lround(options_.sample_interval / options_.dt));
  const auto push = [&](const GridState& st, const StepInfo* info) {
    BackboneShape shape;
    rec.samples.push_back(sample(st, profile, info, &shape));
    rec.shapes.push_back(std::move(shape));
    rec.states.push_back(Eigen::Map<const Eigen::VectorXd>(st.theta.data(), static_cast<Eigen::Index>(st.theta.size())));
  };

  GridState state = initial_state();
  push(state, nullptr);
  StepInfo info;
  double elapsed = 0.0;
  auto start = clock::now();
  long k = 0;
  try {
    for (k = 0; k < steps; ++k) {
      state.t = static_cast<double>(k) * options_.dt;
      GridState next = step(state, profile, &info);
      if (profile.mode() == InputMode::Displacement) rec.multiplier_history.emplace_back(next.t, info.lambda);
      state = std::move(next);
      if ((k + 1) % stride == 0 || k + 1 == steps) {
        elapsed += std::chrono::duration<double>(clock::now() - start).count();
        push(state, &info);
        start = clock::now();
      }
    }
    elapsed += std::chrono::duration<double>(clock::now() - start).count();
  } catch (const SolverError& e) {
    elapsed += std::chrono::duration<double>(clock::now() - start).count();
    rec.status = RunStatus::NonConvergence;
    rec.failure = "step " + std::to_string(k + 1) + " (t = " + std::to_string(static_cast<double>(k + 1) * options_.dt) +
                  "): " + e.what();
    if (rec.samples.empty() || rec.samples.back().t != state.t) push(state, nullptr);
    rec.samples.back().flagged = true;
  }
  rec.compute_seconds = elapsed;
  return rec;
}

}  // namespace cdcr
