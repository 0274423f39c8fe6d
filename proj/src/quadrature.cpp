#include "cdcr/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "cdcr/errors.hpp"
#include "cdcr/model.hpp"

namespace cdcr {

namespace {

double lagrange(std::span<const double> xs, std::size_t j, double x) {
  double v = 1.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (k != j) v *= (x - xs[k]) / (xs[j] - xs[k]);
  }
  return v;
}

}  // namespace

void gauss_legendre(int points, std::vector<double>& nodes, std::vector<double>& weights) {
  if (points < 1) throw ConfigError("Gauss-Legendre rule needs at least one point");
  nodes.assign(static_cast<std::size_t>(points), 0.0);
  weights.assign(static_cast<std::size_t>(points), 0.0);
  const int half = (points + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= points; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (points == 1) p0 = 1.0;
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= points; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = points == 1 ? 1.0 : points * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(points - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(points - 1 - i)] = w;
  }
}

QuadratureGrid::QuadratureGrid(int panels, int points_per_panel, double length)
    : panels_(panels), points_(points_per_panel), length_(length) {
  if (panels < 1) throw ConfigError("quadrature panels must be >= 1");
  if (points_per_panel < 2) throw ConfigError("quadrature points per panel must be >= 2");
  if (!(length > 0.0)) throw ConfigError("quadrature length must be positive");

  std::vector<double> ref_x;
  std::vector<double> ref_w;
  gauss_legendre(points_, ref_x, ref_w);

  half_width_ = 0.5 * length_ / panels_;
  nodes_.reserve(static_cast<std::size_t>(panels_ * points_));
  weights_.reserve(nodes_.capacity());
  for (int p = 0; p < panels_; ++p) {
    const double mid = (2 * p + 1) * half_width_;
    for (int q = 0; q < points_; ++q) {
      nodes_.push_back(mid + half_width_ * ref_x[static_cast<std::size_t>(q)]);
      weights_.push_back(half_width_ * ref_w[static_cast<std::size_t>(q)]);
    }
  }

  // Partial-panel integrals of each Lagrange basis polynomial. A points-point
  // Gauss rule on the sub-interval integrates the degree points-1 basis exactly.
  lower_.resize(points_, points_);
  upper_.resize(points_, points_);
  for (int i = 0; i < points_; ++i) {
    const double xi = ref_x[static_cast<std::size_t>(i)];
    for (int j = 0; j < points_; ++j) {
      double lo = 0.0;
      double hi = 0.0;
      for (int q = 0; q < points_; ++q) {
        const double t = ref_x[static_cast<std::size_t>(q)];
        const double w = ref_w[static_cast<std::size_t>(q)];
        const double y_lo = -1.0 + 0.5 * (xi + 1.0) * (t + 1.0);
        const double y_hi = xi + 0.5 * (1.0 - xi) * (t + 1.0);
        lo += w * lagrange(ref_x, static_cast<std::size_t>(j), y_lo);
        hi += w * lagrange(ref_x, static_cast<std::size_t>(j), y_hi);
      }
      lower_(i, j) = 0.5 * (xi + 1.0) * lo * half_width_;
      upper_(i, j) = 0.5 * (1.0 - xi) * hi * half_width_;
    }
  }
}

double QuadratureGrid::integrate(std::span<const double> f) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < weights_.size(); ++k) sum += weights_[k] * f[k];
  return sum;
}

void QuadratureGrid::forward_cumulative(std::span<const double> f, std::span<double> out) const {
  double carried = 0.0;
  for (int p = 0; p < panels_; ++p) {
    const int base = p * points_;
    double panel_total = 0.0;
    for (int i = 0; i < points_; ++i) {
      double v = 0.0;
      for (int j = 0; j < points_; ++j) v += lower_(i, j) * f[static_cast<std::size_t>(base + j)];
      out[static_cast<std::size_t>(base + i)] = carried + v;
      panel_total += weights_[static_cast<std::size_t>(base + i)] * f[static_cast<std::size_t>(base + i)];
    }
    carried += panel_total;
  }
}

void QuadratureGrid::backward_cumulative(std::span<const double> f, std::span<double> out) const {
  double carried = 0.0;
  for (int p = panels_ - 1; p >= 0; --p) {
    const int base = p * points_;
    double panel_total = 0.0;
    for (int i = 0; i < points_; ++i) {
      double v = 0.0;
      for (int j = 0; j < points_; ++j) v += upper_(i, j) * f[static_cast<std::size_t>(base + j)];
      out[static_cast<std::size_t>(base + i)] = carried + v;
      panel_total += weights_[static_cast<std::size_t>(base + i)] * f[static_cast<std::size_t>(base + i)];
    }
    carried += panel_total;
  }
}

void QuadratureGrid::forward_cumulative(const Eigen::MatrixXd& f, Eigen::MatrixXd& out) const {
  out.resize(f.rows(), f.cols());
  Eigen::RowVectorXd carried = Eigen::RowVectorXd::Zero(f.cols());
  for (int p = 0; p < panels_; ++p) {
    const auto block = f.middleRows(p * points_, points_);
    out.middleRows(p * points_, points_) = (lower_ * block).rowwise() + carried;
    const Eigen::Map<const Eigen::VectorXd> w(weights_.data() + p * points_, points_);
    carried += w.transpose() * block;
  }
}

void QuadratureGrid::backward_cumulative(const Eigen::MatrixXd& f, Eigen::MatrixXd& out) const {
  out.resize(f.rows(), f.cols());
  Eigen::RowVectorXd carried = Eigen::RowVectorXd::Zero(f.cols());
  for (int p = panels_ - 1; p >= 0; --p) {
    const auto block = f.middleRows(p * points_, points_);
    out.middleRows(p * points_, points_) = (upper_ * block).rowwise() + carried;
    const Eigen::Map<const Eigen::VectorXd> w(weights_.data() + p * points_, points_);
    carried += w.transpose() * block;
  }
}

QuadratureGrid make_quadrature(int panels, int points_per_panel, double length) {
  return QuadratureGrid(panels, points_per_panel, length);
}

std::vector<double> nested_upper_integral(std::span<const double> f, const QuadratureGrid& grid) {
  std::vector<double> g(f.size());
  grid.backward_cumulative(f, g);
  return g;
}

SampledIntegrator::SampledIntegrator(std::vector<double> s) : s_(std::move(s)) {
  const std::size_t n = s_.size();
  if (n < 2) throw ConfigError("sampled integration needs at least two samples");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(s_[i] > s_[i - 1])) throw ConfigError("sample positions must be strictly increasing");
  }
  const std::size_t width = std::min<std::size_t>(4, n);
  const double g = 0.5 / std::sqrt(3.0);
  intervals_.resize(n - 1);
  total_weights_.assign(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    Interval& iv = intervals_[k];
    iv.count = width;
    iv.first = k >= 1 ? k - 1 : 0;
    iv.first = std::min(iv.first, n - width);
    const std::span<const double> window(s_.data() + iv.first, width);
    const double a = s_[k];
    const double h = s_[k + 1] - a;
    // Two-point Gauss on [a, a+h] integrates the local cubic exactly.
    const double x1 = a + h * (0.5 - g);
    const double x2 = a + h * (0.5 + g);
    for (std::size_t j = 0; j < 4; ++j) {
      iv.w[j] = j < width ? 0.5 * h * (lagrange(window, j, x1) + lagrange(window, j, x2)) : 0.0;
      if (j < width) total_weights_[iv.first + j] += iv.w[j];
    }
  }
}

void SampledIntegrator::cumulative(std::span<const double> f, std::span<double> out) const {
  out[0] = 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < intervals_.size(); ++k) {
    const Interval& iv = intervals_[k];
    for (std::size_t j = 0; j < iv.count; ++j) acc += iv.w[j] * f[iv.first + j];
    out[k + 1] = acc;
  }
}

std::vector<double> SampledIntegrator::cumulative(std::span<const double> f) const {
  std::vector<double> out(s_.size());
  cumulative(f, out);
  return out;
}

double SampledIntegrator::total(std::span<const double> f) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < total_weights_.size(); ++k) acc += total_weights_[k] * f[k];
  return acc;
}

}  // namespace cdcr
