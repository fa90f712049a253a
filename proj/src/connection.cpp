#include "gerbelab/connection.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <fmt/format.h>

#include "gerbelab/error.hpp"
#include "gerbelab/kernels.hpp"

namespace gerbelab {

namespace {

using Eigen::MatrixXcd;
using Complex = std::complex<double>;
constexpr double pi = std::numbers::pi;

// sigma^eps for sigma = complex conjugation.
MatrixXcd twist(int eps, const MatrixXcd& m) { return eps < 0 ? MatrixXcd(m.conjugate()) : m; }

MatrixXcd unitary_part(const MatrixXcd& m) {
  Eigen::JacobiSVD<MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

Chart make_chart(int dim, Point lo, Point hi, int points) {
  Chart c;
  c.dim = dim;
  c.lo = lo;
  c.hi = hi;
  c.points = {points, dim == 2 ? points : 1};
  return c;
}

void check_grid(const Chart& c) {
  if (c.points[0] < 3 || (c.dim == 2 && c.points[1] < 3))
    throw Error(Errc::GridTooCoarse, fmt::format("grid {}x{} has fewer than 3 points on an axis", c.points[0], c.points[1]));
}

void check_chart_index(const SampledBundle& data, int k) {
  if (k < 0 || k >= data.model.base.chart_count())
    throw Error(Errc::ShapeMismatch, fmt::format("chart {} out of range", k));
}

// d/dx_axis of h_ki on chart k, with the stencil mask of the grid kernel.
struct Derivative {
  std::vector<MatrixXcd> value;
  std::vector<unsigned char> ok;
};

Derivative differentiate(const std::vector<MatrixXcd>& field, const std::vector<unsigned char>& valid, const Chart& c,
                         int axis) {
  Derivative d{std::vector<MatrixXcd>(field.size()), std::vector<unsigned char>(field.size(), 0)};
  kernels::grid_derivative_omp(field, valid, c.points[0], c.points[1], axis, c.spacing(axis), d.value, d.ok);
  return d;
}

// Value of a sampled component at chart coordinates y by bilinear
// interpolation; nullopt when the cell touches the outermost ring of the
// grid or an invalid sample.
std::optional<MatrixXcd> interpolate(const std::vector<MatrixXcd>& field, const std::vector<unsigned char>& valid,
                                     const Chart& c, Point y) {
  int base[2] = {0, 0};
  double frac[2] = {0.0, 0.0};
  for (int a = 0; a < c.dim; ++a) {
    const double f = (y[a] - c.lo[a]) / c.spacing(a);
    if (f < 1.0 || f > c.points[a] - 2) return std::nullopt;
    base[a] = std::clamp(static_cast<int>(std::floor(f)), 0, c.points[a] - 2);
    frac[a] = std::clamp(f - base[a], 0.0, 1.0);
  }
  MatrixXcd out = MatrixXcd::Zero(field.front().rows(), field.front().cols());
  const int corners_j = c.dim == 2 ? 2 : 1;
  for (int di = 0; di < 2; ++di)
    for (int dj = 0; dj < corners_j; ++dj) {
      const auto p = static_cast<std::size_t>(base[0] + di) * c.points[1] + static_cast<std::size_t>(base[1] + dj);
      if (!valid[p]) return std::nullopt;
      double w = di ? frac[0] : 1.0 - frac[0];
      if (c.dim == 2) w *= dj ? frac[1] : 1.0 - frac[1];
      out += w * field[p];
    }
  return out;
}

}  // namespace

double Chart::spacing(int axis) const {
  return points[axis] > 1 ? (hi[axis] - lo[axis]) / (points[axis] - 1) : 0.0;
}

Point Chart::coordinate(std::size_t p) const {
  const auto i = static_cast<int>(p / static_cast<std::size_t>(points[1]));
  const auto j = static_cast<int>(p % static_cast<std::size_t>(points[1]));
  return {lo[0] + i * spacing(0), dim == 2 ? lo[1] + j * spacing(1) : 0.0};
}

bool Chart::contains(Point x, double slack) const {
  for (int a = 0; a < dim; ++a)
    if (x[a] < lo[a] - slack || x[a] > hi[a] + slack) return false;
  return true;
}

ChartedBase ChartedBase::interval(int points, int chart_count) {
  if (chart_count != 1 && chart_count != 2) throw Error(Errc::ShapeMismatch, "the interval has one or two charts");
  ChartedBase b;
  b.kind_ = BaseKind::Interval;
  if (chart_count == 1) {
    b.charts_.push_back(make_chart(1, {0.0, 0.0}, {1.0, 0.0}, points));
  } else {
    b.charts_.push_back(make_chart(1, {0.0, 0.0}, {0.6, 0.0}, points));
    b.charts_.push_back(make_chart(1, {0.4, 0.0}, {1.0, 0.0}, points));
  }
  return b;
}

ChartedBase ChartedBase::circle(int points) {
  ChartedBase b;
  b.kind_ = BaseKind::Circle;
  b.charts_.push_back(make_chart(1, {-0.6 * pi, 0.0}, {0.6 * pi, 0.0}, points));
  b.charts_.push_back(make_chart(1, {0.4 * pi, 0.0}, {1.6 * pi, 0.0}, points));
  return b;
}

ChartedBase ChartedBase::sphere(int points, double half_width) {
  ChartedBase b;
  b.kind_ = BaseKind::Sphere;
  b.half_width_ = half_width;
  for (int k = 0; k < 2; ++k) b.charts_.push_back(make_chart(2, {-half_width, -half_width}, {half_width, half_width}, points));
  return b;
}

std::optional<Point> ChartedBase::transfer(int from, int to, Point x) const {
  const Chart& target = charts_.at(static_cast<std::size_t>(to));
  if (from == to) return target.contains(x) ? std::optional<Point>(x) : std::nullopt;
  switch (kind_) {
    case BaseKind::Interval:
      return target.contains(x) ? std::optional<Point>(x) : std::nullopt;
    case BaseKind::Circle:
      for (int m = -1; m <= 1; ++m) {
        Point y{x[0] + 2.0 * pi * m, 0.0};
        if (target.contains(y)) return y;
      }
      return std::nullopt;
    case BaseKind::Sphere: {
      const double r2 = x[0] * x[0] + x[1] * x[1];
      if (r2 < 1e-300) return std::nullopt;
      Point y{x[0] / r2, -x[1] / r2};
      return target.contains(y) ? std::optional<Point>(y) : std::nullopt;
    }
  }
  return std::nullopt;
}

Eigen::Matrix2d ChartedBase::jacobian(int from, int to, Point x) const {
  if (from == to || kind_ != BaseKind::Sphere) return Eigen::Matrix2d::Identity();
  // w = 1/z, dw/dz = -1/z^2 as a real 2x2 matrix
  const Complex z(x[0], x[1]);
  const Complex c = -1.0 / (z * z);
  Eigen::Matrix2d j;
  j << c.real(), -c.imag(), c.imag(), c.real();
  return j;
}

ChartedBase ChartedBase::refined() const { return with_resolution(2 * resolution() - 1); }

ChartedBase ChartedBase::with_resolution(int points) const {
  ChartedBase b = *this;
  for (auto& c : b.charts_) c.points = {points, c.dim == 2 ? points : 1};
  return b;
}

PartitionProfile PartitionProfile::standard(BaseKind kind) {
  if (kind == BaseKind::Sphere) return {0.8, 1.25};
  return {0.45, 0.55};
}

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double BundleModel::weight(int i, int k, Point x) const {
  if (base.chart_count() == 1) return 1.0;
  auto at0 = base.transfer(k, 0, x);
  double lambda0 = 0.0;
  if (at0) {
    double r = 0.0;
    switch (base.kind()) {
      case BaseKind::Interval: r = (*at0)[0]; break;
      case BaseKind::Circle: r = std::abs((*at0)[0]) / pi; break;
      case BaseKind::Sphere: r = std::hypot((*at0)[0], (*at0)[1]); break;
    }
    lambda0 = 1.0 - smooth_step((r - partition.inner) / (partition.outer - partition.inner));
  }
  if (i == 0) return lambda0;
  return base.transfer(k, 1, x) ? 1.0 - lambda0 : 0.0;
}

bool BundleModel::defined(int k, int i, Point x) const {
  if (!base.charts().at(static_cast<std::size_t>(k)).contains(x)) return false;
  return i == k || base.transfer(k, i, x).has_value();
}

int BundleModel::sign(int k, int i, Point x) const {
  if (i == k || !clutching_sign) return 1;
  if (!defined(k, i, x)) throw Error(Errc::PointOutsideCharts, fmt::format("({}, {}) is not on the overlap", x[0], x[1]));
  return clutching_sign(k == 0 ? x : *base.transfer(k, 0, x));
}

MatrixXcd BundleModel::transition(int k, int i, Point x) const {
  if (!defined(k, i, x))
    throw Error(Errc::PointOutsideCharts, fmt::format("({}, {}) in chart {} is not in chart {}", x[0], x[1], k, i));
  if (i == k) return MatrixXcd::Identity(rank, rank);
  if (k == 1) return clutching(*base.transfer(1, 0, x));
  // h_01 = (sigma^eps(g^{-1}), eps) for h_10 = (g, eps)
  return twist(sign(0, 1, x), clutching(x).inverse());
}

BundleModel BundleModel::trivial(const ChartedBase& base, int rank) {
  BundleModel m;
  m.base = base;
  m.partition = PartitionProfile::standard(base.kind());
  m.rank = rank;
  m.clutching = [rank](Point) { return MatrixXcd::Identity(rank, rank); };
  return m;
}

BundleModel BundleModel::sphere_clutching(int degree, int points, int rank, double deformation, double rotation) {
  if (rank < 1) throw Error(Errc::ShapeMismatch, "rank must be positive");
  BundleModel m;
  m.base = ChartedBase::sphere(points);
  m.partition = PartitionProfile::standard(BaseKind::Sphere);
  m.rank = rank;
  m.clutching = [=](Point z) {
    const double theta = std::atan2(z[1], z[0]);
    MatrixXcd d = MatrixXcd::Identity(rank, rank);
    d(0, 0) = std::polar(1.0, degree * theta);
    if (rank >= 2 && rotation != 0.0) {
      const double phi = rotation * z[0];
      MatrixXcd v = MatrixXcd::Identity(rank, rank);
      v(0, 0) = std::cos(phi);
      v(0, 1) = -std::sin(phi);
      v(1, 0) = std::sin(phi);
      v(1, 1) = std::cos(phi);
      d = v * d * v.adjoint();
    }
    return MatrixXcd(std::polar(1.0, deformation * z[0]) * d);
  };
  return m;
}

std::vector<ClassifyingEntry> classifying_point(const BundleModel& model, int k, Point x) {
  if (k < 0 || k >= model.base.chart_count() || !model.base.charts()[static_cast<std::size_t>(k)].contains(x))
    throw Error(Errc::PointOutsideCharts, fmt::format("({}, {}) is not in chart {}", x[0], x[1], k));
  std::vector<ClassifyingEntry> out;
  for (int i = 0; i < model.base.chart_count(); ++i) {
    const double w = model.weight(i, k, x);
    if (w <= 0.0) continue;
    out.push_back({i, std::sqrt(w), model.transition(k, i, x), model.sign(k, i, x)});
  }
  return out;
}

SampledBundle sample(const BundleModel& model, bool reorthonormalize) {
  SampledBundle out;
  out.model = model;
  const int charts = model.base.chart_count();
  const MatrixXcd id = MatrixXcd::Identity(model.rank, model.rank);
  for (int k = 0; k < charts; ++k) {
    const Chart& c = model.base.charts()[static_cast<std::size_t>(k)];
    const std::size_t n = c.size();
    ChartSamples s;
    s.weight.assign(static_cast<std::size_t>(charts), std::vector<double>(n, 0.0));
    s.transition.resize(static_cast<std::size_t>(charts));
    s.defined.assign(static_cast<std::size_t>(charts), std::vector<unsigned char>(n, 0));
    s.sign.assign(static_cast<std::size_t>(charts), std::vector<signed char>(n, 1));
    for (int i = 0; i < charts; ++i) {
      const auto iu = static_cast<std::size_t>(i);
      if (i != k) s.transition[iu].assign(n, id);
      for (std::size_t p = 0; p < n; ++p) {
        const Point x = c.coordinate(p);
        s.weight[iu][p] = model.weight(i, k, x);
        if (!model.defined(k, i, x)) continue;
        s.defined[iu][p] = 1;
        if (i == k) continue;
        s.sign[iu][p] = static_cast<signed char>(model.sign(k, i, x));
        MatrixXcd h = model.transition(k, i, x);
        if (h.rows() != model.rank || h.cols() != model.rank)
          throw Error(Errc::ShapeMismatch, fmt::format("transition of shape {}x{} for rank {}", h.rows(), h.cols(),
                                                       model.rank));
        const double drift = (h.adjoint() * h - id).norm();
        out.max_unitarity_drift = std::max(out.max_unitarity_drift, drift);
        if (drift > 1e-8) {
          if (!reorthonormalize)
            throw Error(Errc::InvalidGroup, fmt::format("transition h_{}{} at ({}, {}) is {:.3e} from unitary", k, i,
                                                        x[0], x[1], drift));
          h = unitary_part(h);
        }
        s.transition[iu][p] = std::move(h);
      }
    }
    for (std::size_t p = 0; p < n; ++p) {
      double total = 0.0;
      for (int i = 0; i < charts; ++i) total += s.weight[static_cast<std::size_t>(i)][p];
      out.max_partition_defect = std::max(out.max_partition_defect, std::abs(total - 1.0));
    }
    out.charts.push_back(std::move(s));
  }
  return out;
}

ChartForm local_connection(const SampledBundle& data, int k) {
  check_chart_index(data, k);
  const Chart& c = data.model.base.charts()[static_cast<std::size_t>(k)];
  check_grid(c);
  const ChartSamples& s = data.charts[static_cast<std::size_t>(k)];
  const std::size_t n = c.size();
  const int rank = data.model.rank;

  ChartForm a;
  a.chart = k;
  a.degree = 1;
  a.components.assign(static_cast<std::size_t>(c.dim), std::vector<MatrixXcd>(n, MatrixXcd::Zero(rank, rank)));
  a.valid.assign(n, 1);
  for (int i = 0; i < data.model.base.chart_count(); ++i) {
    if (i == k) continue;
    const auto iu = static_cast<std::size_t>(i);
    for (int axis = 0; axis < c.dim; ++axis) {
      Derivative d = differentiate(s.transition[iu], s.defined[iu], c, axis);
      auto& comp = a.components[static_cast<std::size_t>(axis)];
      for (std::size_t p = 0; p < n; ++p) {
        const double w = s.weight[iu][p];
        if (w <= 0.0) continue;
        if (!s.defined[iu][p] || !d.ok[p]) {
          a.valid[p] = 0;
          continue;
        }
        const MatrixXcd& h = s.transition[iu][p];
        comp[p] += w * twist(s.sign[iu][p], h.inverse() * d.value[p]);
      }
    }
  }
  return a;
}

ChartForm curvature(const ChartForm& a, const SampledBundle& data) {
  if (a.degree != 1) throw Error(Errc::ShapeMismatch, fmt::format("curvature of a degree-{} form", a.degree));
  check_chart_index(data, a.chart);
  const Chart& c = data.model.base.charts()[static_cast<std::size_t>(a.chart)];
  check_grid(c);
  ChartForm f;
  f.chart = a.chart;
  f.degree = 2;
  f.valid = a.valid;
  if (c.dim == 1) return f;

  Derivative dy_dx = differentiate(a.components[1], a.valid, c, 0);
  Derivative dx_dy = differentiate(a.components[0], a.valid, c, 1);
  const std::size_t n = c.size();
  std::vector<MatrixXcd> comp(n);
  for (std::size_t p = 0; p < n; ++p) {
    const MatrixXcd& ax = a.components[0][p];
    const MatrixXcd& ay = a.components[1][p];
    if (!dy_dx.ok[p] || !dx_dy.ok[p]) {
      f.valid[p] = 0;
      comp[p] = MatrixXcd::Zero(ax.rows(), ax.cols());
      continue;
    }
    comp[p] = dy_dx.value[p] - dx_dy.value[p] + ax * ay - ay * ax;
  }
  f.components.push_back(std::move(comp));
  return f;
}

GaugeResidual gauge_residual(const SampledBundle& data, int k, int l) {
  check_chart_index(data, k);
  check_chart_index(data, l);
  if (k == l) throw Error(Errc::NoOverlap, "gauge residual needs two different charts");
  const ChartedBase& base = data.model.base;
  const Chart& ck = base.charts()[static_cast<std::size_t>(k)];
  const Chart& cl = base.charts()[static_cast<std::size_t>(l)];
  const ChartSamples& sl = data.charts[static_cast<std::size_t>(l)];
  const auto ku = static_cast<std::size_t>(k);

  ChartForm ak = local_connection(data, k), al = local_connection(data, l);
  const bool surface = cl.dim == 2;
  std::optional<ChartForm> fk, fl;
  if (surface) {
    fk = curvature(ak, data);
    fl = curvature(al, data);
  }
  std::vector<Derivative> dh;
  for (int axis = 0; axis < cl.dim; ++axis) dh.push_back(differentiate(sl.transition[ku], sl.defined[ku], cl, axis));

  GaugeResidual out;
  for (std::size_t p = 0; p < cl.size(); ++p) {
    if (!sl.defined[ku][p] || !al.valid[p]) continue;
    if (sl.sign[ku][p] < 0)
      throw Error(Errc::InvalidTwist, "the displayed gauge law is stated for untwisted overlaps only");
    bool ok = true;
    for (const auto& d : dh) ok = ok && d.ok[p];
    const int i = static_cast<int>(p / static_cast<std::size_t>(cl.points[1]));
    const int j = static_cast<int>(p % static_cast<std::size_t>(cl.points[1]));
    ok = ok && i > 0 && i < cl.points[0] - 1 && (!surface || (j > 0 && j < cl.points[1] - 1));
    if (!ok) continue;
    const Point x = cl.coordinate(p);
    auto y = base.transfer(l, k, x);
    if (!y) continue;
    std::vector<MatrixXcd> ak_at;
    for (const auto& comp : ak.components) {
      auto v = interpolate(comp, ak.valid, ck, *y);
      if (!v) break;
      ak_at.push_back(std::move(*v));
    }
    if (ak_at.size() != ak.components.size()) continue;
    std::optional<MatrixXcd> fk_at;
    if (surface) {
      fk_at = interpolate(fk->components[0], fk->valid, ck, *y);
      if (!fk_at || !fl->valid[p]) continue;
    }

    const Eigen::Matrix2d jac = base.jacobian(l, k, x);
    const MatrixXcd& h = sl.transition[ku][p];
    const MatrixXcd hinv = h.inverse();
    for (int b = 0; b < cl.dim; ++b) {
      MatrixXcd pulled = MatrixXcd::Zero(h.rows(), h.cols());
      for (int a = 0; a < ck.dim; ++a) pulled += jac(a, b) * ak_at[static_cast<std::size_t>(a)];
      const MatrixXcd expected = hinv * pulled * h + hinv * dh[static_cast<std::size_t>(b)].value[p];
      const double dev = (al.components[static_cast<std::size_t>(b)][p] - expected).norm();
      if (dev > out.max()) out.worst = x;
      out.connection = std::max(out.connection, dev);
    }
    if (surface) {
      const MatrixXcd expected = jac.determinant() * (hinv * *fk_at * h);
      const double dev = (fl->components[0][p] - expected).norm();
      if (dev > out.max()) out.worst = x;
      out.curvature = std::max(out.curvature, dev);
    }
    ++out.points;
  }
  if (out.points == 0) throw Error(Errc::NoOverlap, fmt::format("charts {} and {} share no interior grid point", k, l));
  return out;
}

ChernEstimate chern_number(const SampledBundle& data) {
  const ChartedBase& base = data.model.base;
  if (!base.closed_surface()) throw Error(Errc::NotClosedSurface, "Chern numbers need a closed surface cover");
  Complex total{};
  for (int k = 0; k < base.chart_count(); ++k) {
    const Chart& c = base.charts()[static_cast<std::size_t>(k)];
    ChartForm f = curvature(local_connection(data, k), data);
    const auto& lambda = data.charts[static_cast<std::size_t>(k)].weight[static_cast<std::size_t>(k)];
    std::vector<double> w(c.size(), 0.0);
    const double area = c.spacing(0) * c.spacing(1);
    for (std::size_t p = 0; p < c.size(); ++p) {
      if (lambda[p] <= 0.0) continue;
      if (!f.valid[p])
        throw Error(Errc::GridTooCoarse, fmt::format("curvature undefined at a weighted point of chart {}", k));
      w[p] = lambda[p] * area;
    }
    total += kernels::weighted_trace_sum_omp(f.components[0], w, c.points[0], c.points[1]);
  }
  const Complex value = Complex(0.0, 1.0) / (2.0 * pi) * total;
  return {value.real(), value.imag(), std::lround(value.real())};
}

}  // namespace gerbelab
