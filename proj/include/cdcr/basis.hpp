#pragma once

#include <Eigen/Dense>
#include <string_view>
#include <vector>

namespace cdcr {

enum class BasisKind { RawMonomial, Orthonormal };

BasisKind parse_basis_kind(std::string_view name);
std::string_view to_string(BasisKind kind);

/// Polynomial modal basis for the bending angle, theta(s) = Phi(s)^T c.
///
/// Every basis function vanishes at s = 0 (clamped base). The raw kind is
/// phi_j(s) = (s/L)^(j+1). The orthonormal kind spans the same space but is
/// L2-orthonormal on [0, L]; it is evaluated through its three-term
/// recurrence (orthogonal polynomials for the weight x^2 on [0, 1], times x),
/// which stays well conditioned where the monomial Gram matrix does not.
class ModalBasis {
 public:
  ModalBasis(BasisKind kind, int order, double length);

  BasisKind kind() const { return kind_; }
  int order() const { return order_; }
  double length() const { return length_; }

  Eigen::VectorXd values(double s) const;
  Eigen::VectorXd derivatives(double s) const;

  /// Row j holds the coefficients of phi_j in the monomials (s/L)^1..(s/L)^m.
  const Eigen::MatrixXd& monomial_coefficients() const { return coefficients_; }

 private:
  void check_domain(double s) const;
  void evaluate(double s, double* phi, double* dphi) const;

  BasisKind kind_;
  int order_;
  double length_;
  // Recurrence p_{j+1} = ((x - a_j) p_j - b_j p_{j-1}) / b_{j+1}, p_0 = 1/b_0.
  std::vector<double> rec_a_;
  std::vector<double> rec_b_;
  Eigen::MatrixXd coefficients_;
};

/// Basis values and slopes tabulated on a set of arc-length samples
/// (rows: samples, columns: modes).
struct BasisTable {
  Eigen::MatrixXd phi;
  Eigen::MatrixXd dphi;
};

BasisTable tabulate(const ModalBasis& basis, const std::vector<double>& s);

}  // namespace cdcr
