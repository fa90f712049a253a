#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace gerbelab {

using Point = std::array<double, 2>;

/// Rectangular parameter grid. Samples are stored row-major: point
/// p = i * points[1] + j sits at (lo[0] + i h_0, lo[1] + j h_1). One-
/// dimensional charts have points[1] == 1.
struct Chart {
  int dim = 2;
  Point lo{}, hi{};
  std::array<int, 2> points{1, 1};

  double spacing(int axis) const;
  std::size_t size() const noexcept { return static_cast<std::size_t>(points[0]) * points[1]; }
  Point coordinate(std::size_t p) const;
  bool contains(Point x, double slack = 1e-12) const;
};

enum class BaseKind { Interval, Circle, Sphere };

/// Cover of a small base by at most two charts with analytic overlap maps.
class ChartedBase {
 public:
  /// Two charts [0, 0.6] and [0.4, 1] (or one chart [0, 1]).
  static ChartedBase interval(int points, int chart_count = 2);
  /// Arcs with angle coordinates [-0.6 pi, 0.6 pi] and [0.4 pi, 1.6 pi].
  static ChartedBase circle(int points);
  /// Stereographic charts z and w = 1/z, each on the square [-R, R]^2.
  static ChartedBase sphere(int points, double half_width = 2.0);

  BaseKind kind() const noexcept { return kind_; }
  int dimension() const noexcept { return charts_.front().dim; }
  bool closed_surface() const noexcept { return kind_ == BaseKind::Sphere; }
  const std::vector<Chart>& charts() const noexcept { return charts_; }
  int chart_count() const noexcept { return static_cast<int>(charts_.size()); }
  /// Grid points per axis.
  int resolution() const noexcept { return charts_.front().points[0]; }

  /// Coordinates in chart `to` of the point with coordinates x in chart
  /// `from`, or nullopt when it lies outside chart `to`.
  std::optional<Point> transfer(int from, int to, Point x) const;
  /// d(coordinates in `to`) / d(coordinates in `from`) at x.
  Eigen::Matrix2d jacobian(int from, int to, Point x) const;
  /// Same base with h halved (n -> 2n - 1 points per axis).
  ChartedBase refined() const;
  ChartedBase with_resolution(int points) const;

 private:
  BaseKind kind_ = BaseKind::Interval;
  double half_width_ = 2.0;
  std::vector<Chart> charts_;
};

/// Smooth step of lambda_0 from 1 to 0 across [inner, outer] of a radial
/// coordinate: x on the interval, |theta| / pi on the circle, |z| on the
/// sphere.
struct PartitionProfile {
  double inner = 0.0;
  double outer = 0.0;
  static PartitionProfile standard(BaseKind kind);
};

/// Smooth 0 -> 1 transition on [0, 1] built from exp(-1/t).
double smooth_step(double t);

/// Matrix-group bundle given by one clutching map h_10 on the overlap,
/// written in chart-0 coordinates. h_01 is its inverse in G x| Z/2 and
/// h_kk = 1. An optional sign makes h_10 = (g, eps) twisted, with sigma
/// acting by complex conjugation.
struct BundleModel {
  ChartedBase base = ChartedBase::interval(3);
  PartitionProfile partition;
  int rank = 1;
  std::function<Eigen::MatrixXcd(Point)> clutching;
  std::function<int(Point)> clutching_sign;

  /// lambda_i at a point given in chart-k coordinates.
  double weight(int i, int k, Point x) const;
  /// h_ki at a point of chart k; throws PointOutsideCharts off the overlap.
  Eigen::MatrixXcd transition(int k, int i, Point x) const;
  int sign(int k, int i, Point x) const;
  bool defined(int k, int i, Point x) const;

  /// All transitions equal to the identity.
  static BundleModel trivial(const ChartedBase& base, int rank = 1);
  /// Two-chart S^2 with h_10 = V(z) diag(u^n, 1, ..) V(z)^*, u = z / |z|,
  /// times exp(i deformation Re z). V(z) is a rotation in the first two
  /// coordinates by angle `rotation` * Re z (rank >= 2 only), which makes
  /// the transition values noncommuting.
  static BundleModel sphere_clutching(int degree, int points, int rank = 1, double deformation = 0.0,
                                      double rotation = 0.0);
};

/// One entry (sqrt(lambda_i), h_ki) of the classifying map.
struct ClassifyingEntry {
  int chart = 0;
  double coordinate = 0.0;
  Eigen::MatrixXcd element;
  int sign = 1;
};

/// The classifying point of x (chart-k coordinates) over the charts with
/// lambda_i(x) > 0. Throws PointOutsideCharts.
std::vector<ClassifyingEntry> classifying_point(const BundleModel& model, int k, Point x);

/// Grid samples of one chart: weights lambda_i and transitions h_ki.
struct ChartSamples {
  std::vector<std::vector<double>> weight;
  /// Empty for i == k (the identity).
  std::vector<std::vector<Eigen::MatrixXcd>> transition;
  std::vector<std::vector<unsigned char>> defined;
  std::vector<std::vector<signed char>> sign;
};

struct SampledBundle {
  BundleModel model;
  std::vector<ChartSamples> charts;
  double max_unitarity_drift = 0.0;
  double max_partition_defect = 0.0;
};

/// Samples the model on every chart grid. Transitions farther than 1e-8
/// from unitary throw InvalidGroup unless `reorthonormalize`, which replaces
/// them by their unitary polar factor.
SampledBundle sample(const BundleModel& model, bool reorthonormalize = false);

/// Matrix-valued form on one chart grid: degree 1 has one component per
/// coordinate direction, degree 2 one dx ^ dy component (none in 1D).
struct ChartForm {
  int chart = 0;
  int degree = 0;
  std::vector<std::vector<Eigen::MatrixXcd>> components;
  std::vector<unsigned char> valid;
};

/// A_k = sum_i lambda_i sigma^{eps_ki}(h_ki^{-1} dh_ki) with second-order
/// finite differences. Throws GridTooCoarse.
ChartForm local_connection(const SampledBundle& data, int k);

/// F = dA + [A_x, A_y] dx ^ dy. Throws GridTooCoarse, ShapeMismatch.
ChartForm curvature(const ChartForm& a, const SampledBundle& data);

struct GaugeResidual {
  /// max |A_l - (Ad_{h_lk^{-1}} A_k + h_lk^{-1} dh_lk)|_F
  double connection = 0.0;
  /// max |F_l - Ad_{h_lk^{-1}} F_k|_F (2D only)
  double curvature = 0.0;
  std::size_t points = 0;
  /// Chart-l coordinates of the largest deviation.
  Point worst{};
  double max() const noexcept { return connection > curvature ? connection : curvature; }
};

/// Compares both gauge laws on interior grid points of chart l whose image
/// has an interpolation cell clear of chart k's outermost grid ring; forms
/// on chart k are bilinearly interpolated and pulled back through the
/// overlap Jacobian. Throws
/// NoOverlap, InvalidTwist (sign -1 on the overlap).
GaugeResidual gauge_residual(const SampledBundle& data, int k, int l);

struct ChernEstimate {
  double value = 0.0;
  /// Imaginary part of (i / 2 pi) int tr F, zero for unitary data.
  double imaginary = 0.0;
  long nearest = 0;
};

/// (i / 2 pi) sum_k sum_p lambda_k(p) tr F_k(p) h^2. Throws
/// NotClosedSurface, GridTooCoarse.
ChernEstimate chern_number(const SampledBundle& data);

}  // namespace gerbelab
