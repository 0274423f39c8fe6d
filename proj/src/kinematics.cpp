#include "cdcr/kinematics.hpp"

#include <cmath>

#include "cdcr/errors.hpp"

namespace cdcr {

std::vector<double> uniform_samples(double length, int count) {
  if (count < 2) throw ConfigError("need at least two output samples");
  std::vector<double> s(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) s[static_cast<std::size_t>(k)] = length * k / (count - 1);
  s.back() = length;
  return s;
}

std::vector<double> theta_field(const Eigen::VectorXd& c, const ModalBasis& basis, std::span<const double> s) {
  if (c.size() != basis.order()) throw ConfigError("modal coefficient count does not match basis order");
  std::vector<double> theta(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) theta[k] = basis.values(s[k]).dot(c);
  return theta;
}

BackboneShape backbone_positions(const SampledIntegrator& integrator, std::span<const double> theta,
                                 std::span<const double> kappa) {
  const std::size_t n = integrator.size();
  BackboneShape shape;
  shape.s.assign(integrator.samples().begin(), integrator.samples().end());
  shape.theta.assign(theta.begin(), theta.end());
  if (!kappa.empty()) shape.kappa.assign(kappa.begin(), kappa.end());
  std::vector<double> c(n);
  std::vector<double> sn(n);
  for (std::size_t k = 0; k < n; ++k) {
    c[k] = std::cos(theta[k]);
    sn[k] = std::sin(theta[k]);
  }
  shape.x = integrator.cumulative(c);
  shape.y = integrator.cumulative(sn);
  return shape;
}

double tendon_displacement(const SampledIntegrator& integrator, std::span<const double> theta,
                           const RobotModel& model) {
  const auto s = integrator.samples();
  std::vector<double> integrand(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) integrand[k] = model.spacing_slope(s[k]) * theta[k];
  return 0.5 * model.spacing(model.length()) * theta.back() - 0.5 * integrator.total(integrand);
}

double tendon_displacement_from_curvature(const SampledIntegrator& integrator, std::span<const double> kappa,
                                          const RobotModel& model) {
  const auto s = integrator.samples();
  std::vector<double> integrand(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) integrand[k] = model.spacing(s[k]) * kappa[k];
  return 0.5 * integrator.total(integrand);
}

EnergyBreakdown compute_energies(const SampledIntegrator& integrator, std::span<const double> theta,
                                 std::span<const double> theta_t, std::span<const double> theta_s,
                                 const RobotModel& model) {
  const auto s = integrator.samples();
  const std::size_t n = s.size();
  const double rho = model.material().density;
  const double E = model.material().youngs_modulus;
  const auto& load = model.load();

  std::vector<double> mx_rate(n), my_rate(n), cos_t(n), sin_t(n);
  for (std::size_t k = 0; k < n; ++k) {
    cos_t[k] = std::cos(theta[k]);
    sin_t[k] = std::sin(theta[k]);
    mx_rate[k] = theta_t[k] * sin_t[k];
    my_rate[k] = theta_t[k] * cos_t[k];
  }
  const auto mx = integrator.cumulative(mx_rate);
  const auto my = integrator.cumulative(my_rate);
  const auto x = integrator.cumulative(cos_t);
  const auto y = integrator.cumulative(sin_t);

  std::vector<double> rot(n), tx(n), ty(n), bend(n), pot(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double I = model.second_moment(s[k]);
    const double A = model.area(s[k]);
    rot[k] = I * theta_t[k] * theta_t[k];
    tx[k] = A * mx[k] * mx[k];
    ty[k] = A * my[k] * my[k];
    bend[k] = I * theta_s[k] * theta_s[k];
    pot[k] = load.q_x * (s[k] - x[k]) - load.q_y * y[k];
  }
  EnergyBreakdown e;
  e.rotational = 0.5 * rho * integrator.total(rot);
  e.translational_x = 0.5 * rho * integrator.total(tx);
  e.translational_y = 0.5 * rho * integrator.total(ty);
  e.bending = 0.5 * E * integrator.total(bend);
  e.load_potential = integrator.total(pot);
  return e;
}

}  // namespace cdcr
