#include "cdcr/basis.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "cdcr/errors.hpp"
#include "cdcr/quadrature.hpp"

namespace cdcr {

BasisKind parse_basis_kind(std::string_view name) {
  if (name == "raw_monomial" || name == "raw") return BasisKind::RawMonomial;
  if (name == "orthonormal" || name == "orthonormalized") return BasisKind::Orthonormal;
  throw ConfigError("unknown basis kind '" + std::string(name) + "'");
}

std::string_view to_string(BasisKind kind) {
  return kind == BasisKind::RawMonomial ? "raw_monomial" : "orthonormal";
}

ModalBasis::ModalBasis(BasisKind kind, int order, double length)
    : kind_(kind), order_(order), length_(length) {
  if (order < 1) throw ConfigError("basis order must be >= 1");
  if (!(length > 0.0)) throw ConfigError("basis length must be positive");

  const auto m = static_cast<std::size_t>(order);
  if (kind_ == BasisKind::RawMonomial) {
    coefficients_ = Eigen::MatrixXd::Identity(order, order);
    return;
  }

  // Discretised Stieltjes procedure for the weight x^2 on [0, 1]; the rule is
  // exact for every inner product it forms.
  std::vector<double> gx;
  std::vector<double> gw;
  gauss_legendre(order + 4, gx, gw);
  const std::size_t q = gx.size();
  std::vector<double> x(q);
  std::vector<double> w(q);
  for (std::size_t i = 0; i < q; ++i) {
    x[i] = 0.5 * (gx[i] + 1.0);
    w[i] = 0.5 * gw[i] * x[i] * x[i];
  }

  rec_a_.assign(m, 0.0);
  rec_b_.assign(m + 1, 0.0);
  rec_b_[0] = std::sqrt(1.0 / 3.0);
  std::vector<double> prev(q, 0.0);
  std::vector<double> cur(q, 1.0 / rec_b_[0]);
  for (std::size_t j = 0; j + 1 < m; ++j) {
    double a = 0.0;
    for (std::size_t i = 0; i < q; ++i) a += w[i] * x[i] * cur[i] * cur[i];
    rec_a_[j] = a;
    std::vector<double> next(q);
    double norm2 = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
      next[i] = (x[i] - a) * cur[i] - (j > 0 ? rec_b_[j] * prev[i] : 0.0);
      norm2 += w[i] * next[i] * next[i];
    }
    const double b = std::sqrt(norm2);
    rec_b_[j + 1] = b;
    for (double& v : next) v /= b;
    prev = std::move(cur);
    cur = std::move(next);
  }

  // Monomial coefficients of x * p_j(x) / sqrt(L), carried through the same
  // recurrence (informational; evaluation never uses them).
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(order, order);  // p(j, k): coeff of x^k in p_j
  p(0, 0) = 1.0 / rec_b_[0];
  for (int j = 0; j + 1 < order; ++j) {
    Eigen::RowVectorXd next = Eigen::RowVectorXd::Zero(order);
    for (int k = 0; k + 1 < order; ++k) next(k + 1) += p(j, k);
    next -= rec_a_[static_cast<std::size_t>(j)] * p.row(j);
    if (j > 0) next -= rec_b_[static_cast<std::size_t>(j)] * p.row(j - 1);
    p.row(j + 1) = next / rec_b_[static_cast<std::size_t>(j + 1)];
  }
  coefficients_ = p / std::sqrt(length_);
}

void ModalBasis::check_domain(double s) const {
  const double tol = 1e-12 * length_;
  if (!(s >= -tol && s <= length_ + tol)) {
    std::ostringstream os;
    os << "basis evaluated at s = " << s << " outside [0, " << length_ << "]";
    throw DomainError(os.str());
  }
}

void ModalBasis::evaluate(double s, double* phi, double* dphi) const {
  const double x = s / length_;
  if (kind_ == BasisKind::RawMonomial) {
    double pw = 1.0;  // x^j
    for (int j = 0; j < order_; ++j) {
      if (dphi) dphi[j] = (j + 1) * pw / length_;
      pw *= x;
      if (phi) phi[j] = pw;
    }
    return;
  }
  const double scale = 1.0 / std::sqrt(length_);
  double p_prev = 0.0;
  double dp_prev = 0.0;
  double p = 1.0 / rec_b_[0];
  double dp = 0.0;
  for (int j = 0; j < order_; ++j) {
    if (phi) phi[j] = scale * x * p;
    if (dphi) dphi[j] = scale * (p + x * dp) / length_;
    if (j + 1 == order_) break;
    const auto ju = static_cast<std::size_t>(j);
    const double b_next = rec_b_[ju + 1];
    const double p_next = ((x - rec_a_[ju]) * p - rec_b_[ju] * p_prev) / b_next;
    const double dp_next = (p + (x - rec_a_[ju]) * dp - rec_b_[ju] * dp_prev) / b_next;
    p_prev = p;
    dp_prev = dp;
    p = p_next;
    dp = dp_next;
  }
}

Eigen::VectorXd ModalBasis::values(double s) const {
  check_domain(s);
  Eigen::VectorXd out(order_);
  evaluate(s, out.data(), nullptr);
  return out;
}

Eigen::VectorXd ModalBasis::derivatives(double s) const {
  check_domain(s);
  Eigen::VectorXd out(order_);
  evaluate(s, nullptr, out.data());
  return out;
}

BasisTable tabulate(const ModalBasis& basis, const std::vector<double>& s) {
  BasisTable table;
  const auto n = static_cast<Eigen::Index>(s.size());
  table.phi.resize(n, basis.order());
  table.dphi.resize(n, basis.order());
  for (Eigen::Index k = 0; k < n; ++k) {
    table.phi.row(k) = basis.values(s[static_cast<std::size_t>(k)]).transpose();
    table.dphi.row(k) = basis.derivatives(s[static_cast<std::size_t>(k)]).transpose();
  }
  return table;
}

}  // namespace cdcr
