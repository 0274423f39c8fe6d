#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace cdcr {

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int points, std::vector<double>& nodes, std::vector<double>& weights);

/// Composite Gauss-Legendre grid over [0, L] with cumulative-integration
/// support. Cumulative integrals at the nodes are exact for piecewise
/// polynomials of degree < points_per_panel; each pass is linear in the node
/// count.
class QuadratureGrid {
 public:
  QuadratureGrid(int panels, int points_per_panel, double length);

  int size() const { return static_cast<int>(nodes_.size()); }
  int panels() const { return panels_; }
  int points_per_panel() const { return points_; }
  double length() const { return length_; }

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

  double integrate(std::span<const double> f) const;

  /// out[k] = integral of f from 0 to nodes[k].
  void forward_cumulative(std::span<const double> f, std::span<double> out) const;
  /// out[k] = integral of f from nodes[k] to L.
  void backward_cumulative(std::span<const double> f, std::span<double> out) const;

  /// Column-wise versions for n x m sample blocks.
  void forward_cumulative(const Eigen::MatrixXd& f, Eigen::MatrixXd& out) const;
  void backward_cumulative(const Eigen::MatrixXd& f, Eigen::MatrixXd& out) const;

 private:
  int panels_;
  int points_;
  double length_;
  double half_width_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  // lower_(i, j): integral of the j-th panel Lagrange basis from the panel
  // start to node i; upper_(i, j): from node i to the panel end.
  Eigen::MatrixXd lower_;
  Eigen::MatrixXd upper_;
};

QuadratureGrid make_quadrature(int panels, int points_per_panel, double length);

/// g(s_k) = integral of f from s_k to L, one backward pass over the grid.
std::vector<double> nested_upper_integral(std::span<const double> f, const QuadratureGrid& grid);

/// Fourth-order cumulative integration over arbitrary increasing samples
/// (local cubic interpolation on each interval). Used for output grids and the
/// finite-difference node grid.
class SampledIntegrator {
 public:
  explicit SampledIntegrator(std::vector<double> s);

  std::size_t size() const { return s_.size(); }
  std::span<const double> samples() const { return s_; }

  /// out[k] = integral of f from s[0] to s[k]; out[0] = 0.
  void cumulative(std::span<const double> f, std::span<double> out) const;
  std::vector<double> cumulative(std::span<const double> f) const;
  double total(std::span<const double> f) const;

  /// w such that total(f) == dot(w, f).
  const std::vector<double>& weights() const { return total_weights_; }

 private:
  struct Interval {
    std::size_t first;  // first sample of the interpolation window
    std::size_t count;  // window size (2..4)
    double w[4];
  };
  std::vector<double> s_;
  std::vector<Interval> intervals_;
  std::vector<double> total_weights_;
};

}  // namespace cdcr
