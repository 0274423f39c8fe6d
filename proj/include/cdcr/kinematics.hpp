#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "cdcr/basis.hpp"
#include "cdcr/model.hpp"
#include "cdcr/quadrature.hpp"

namespace cdcr {

/// Backbone configuration sampled along the arc length.
struct BackboneShape {
  std::vector<double> s;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> theta;
  std::vector<double> kappa;  // theta_s

  std::size_t size() const { return s.size(); }
};

struct EnergyBreakdown {
  double rotational = 0.0;       // T_rot
  double translational_x = 0.0;  // T_x
  double translational_y = 0.0;  // T_y
  double bending = 0.0;          // U_b
  double load_potential = 0.0;   // G

  double kinetic() const { return rotational + translational_x + translational_y; }
  /// T + U_b + G (actuation work is accounted for by the caller).
  double mechanical() const { return kinetic() + bending + load_potential; }
};

/// `count` uniform samples over [0, L], endpoints included.
std::vector<double> uniform_samples(double length, int count);

/// theta(s_k) = Phi(s_k)^T c.
std::vector<double> theta_field(const Eigen::VectorXd& c, const ModalBasis& basis, std::span<const double> s);

/// x(s) = int_0^s cos(theta), y(s) = int_0^s sin(theta). `kappa` is copied
/// into the shape when supplied.
BackboneShape backbone_positions(const SampledIntegrator& integrator, std::span<const double> theta,
                                 std::span<const double> kappa = {});

/// Tendon displacement from the integrated-by-parts constraint
/// 1/2 W(L) theta(L) - 1/2 int_0^L W_s theta ds.
double tendon_displacement(const SampledIntegrator& integrator, std::span<const double> theta,
                           const RobotModel& model);

/// Same quantity from the curvature form 1/2 int_0^L W theta_s ds.
double tendon_displacement_from_curvature(const SampledIntegrator& integrator, std::span<const double> kappa,
                                          const RobotModel& model);

EnergyBreakdown compute_energies(const SampledIntegrator& integrator, std::span<const double> theta,
                                 std::span<const double> theta_t, std::span<const double> theta_s,
                                 const RobotModel& model);

}  // namespace cdcr
