#include "gerbelab/schwinger.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "gerbelab/error.hpp"
#include "gerbelab/kernels.hpp"

namespace gerbelab {

namespace {

void check_same_size(const LoopPolynomial& x, const LoopPolynomial& y) {
  if (x.size() != y.size()) throw Error(Errc::ShapeMismatch, fmt::format("loops of size {} and {}", x.size(), y.size()));
}

Eigen::MatrixXcd mode_operator(int size, int truncation) {
  Eigen::VectorXcd d(2 * truncation * size);
  for (int idx = 0; idx < 2 * truncation; ++idx)
    d.segment(idx * size, size).setConstant(static_cast<double>(idx - truncation));
  return d.asDiagonal();
}

Eigen::MatrixXcd assemble(const LoopPolynomial& x, int truncation) {
  Eigen::MatrixXcd out;
  kernels::toeplitz_assemble_omp(x.coefficients(), x.band(), truncation, out);
  return out;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

LoopPolynomial::LoopPolynomial(int size, int band) : size_(size), band_(band) {
  if (size < 1 || band < 0) throw Error(Errc::ShapeMismatch, fmt::format("loop of size {} and band {}", size, band));
  coeffs_.assign(static_cast<std::size_t>(2 * band + 1), Eigen::MatrixXcd::Zero(size, size));
}

LoopPolynomial LoopPolynomial::constant(const Eigen::MatrixXcd& c) { return monomial(0, c); }

LoopPolynomial LoopPolynomial::monomial(int m, const Eigen::MatrixXcd& c) {
  if (c.rows() != c.cols()) throw Error(Errc::ShapeMismatch, "loop coefficients must be square");
  LoopPolynomial out(static_cast<int>(c.rows()), std::abs(m));
  out.set(m, c);
  return out;
}

LoopPolynomial LoopPolynomial::random(std::mt19937_64& rng, int size, int band, bool skew_hermitian) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  LoopPolynomial out(size, band);
  for (auto& c : out.coeffs_)
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = Complex(u(rng), u(rng));
  if (skew_hermitian) {
    for (int m = 1; m <= band; ++m) out.set(-m, -out.coeff(m).adjoint());
    Eigen::MatrixXcd c0 = out.coeff(0);
    out.set(0, (c0 - c0.adjoint()) / 2.0);
    out.skew_ = true;
  }
  return out;
}

Eigen::MatrixXcd LoopPolynomial::coeff(int m) const {
  if (m < -band_ || m > band_) return Eigen::MatrixXcd::Zero(size_, size_);
  return coeffs_[static_cast<std::size_t>(m + band_)];
}

void LoopPolynomial::set(int m, const Eigen::MatrixXcd& c) {
  if (c.rows() != size_ || c.cols() != size_)
    throw Error(Errc::ShapeMismatch, fmt::format("coefficient {}x{} for a loop of size {}", c.rows(), c.cols(), size_));
  if (m < -band_ || m > band_) *this = widened(std::abs(m));
  coeffs_[static_cast<std::size_t>(m + band_)] = c;
}

double LoopPolynomial::skew_deviation() const {
  double dev = 0.0;
  for (int m = 0; m <= band_; ++m) dev = std::max(dev, max_abs(coeff(-m) + coeff(m).adjoint()));
  return dev;
}

void LoopPolynomial::validate(double tolerance) const {
  if (coeffs_.size() != static_cast<std::size_t>(2 * band_ + 1))
    throw Error(Errc::ShapeMismatch, "coefficient count does not match the band");
  for (const auto& c : coeffs_)
    if (c.rows() != size_ || c.cols() != size_) throw Error(Errc::ShapeMismatch, "coefficients differ in shape");
  if (skew_ && skew_deviation() > tolerance)
    throw Error(Errc::ShapeMismatch, fmt::format("loop flagged skew-hermitian deviates by {:.3e}", skew_deviation()));
}

double LoopPolynomial::norm() const {
  double s = 0.0;
  for (const auto& c : coeffs_) s += c.squaredNorm();
  return std::sqrt(s);
}

LoopPolynomial LoopPolynomial::widened(int band) const {
  if (band <= band_) return *this;
  LoopPolynomial out(size_, band);
  out.skew_ = skew_;
  for (int m = -band_; m <= band_; ++m) out.coeffs_[static_cast<std::size_t>(m + band)] = coeff(m);
  return out;
}

LoopPolynomial LoopPolynomial::derivative() const {
  LoopPolynomial out = *this;
  for (int m = -band_; m <= band_; ++m) out.coeffs_[static_cast<std::size_t>(m + band_)] *= Complex(0.0, m);
  return out;
}

LoopPolynomial& LoopPolynomial::operator+=(const LoopPolynomial& o) {
  check_same_size(*this, o);
  if (o.band_ > band_) *this = widened(o.band_);
  for (int m = -o.band_; m <= o.band_; ++m) coeffs_[static_cast<std::size_t>(m + band_)] += o.coeff(m);
  skew_ = skew_ && o.skew_;
  return *this;
}

LoopPolynomial operator*(Complex s, LoopPolynomial a) {
  for (auto& c : a.coeffs_) c *= s;
  if (s.imag() != 0.0) a.skew_ = false;
  return a;
}

LoopPolynomial operator*(const LoopPolynomial& a, const LoopPolynomial& b) {
  check_same_size(a, b);
  LoopPolynomial out(a.size_, a.band_ + b.band_);
  for (int p = -a.band_; p <= a.band_; ++p)
    for (int q = -b.band_; q <= b.band_; ++q)
      out.coeffs_[static_cast<std::size_t>(p + q + out.band_)] += a.coeff(p) * b.coeff(q);
  return out;
}

LoopPolynomial bracket(const LoopPolynomial& x, const LoopPolynomial& y) { return x * y - y * x; }

double tolerance_scale(std::initializer_list<const LoopPolynomial*> loops) {
  double s = 1.0;
  for (const auto* l : loops) s *= l->norm();
  return std::max(1.0, s);
}

BlockOperator block_operator(const LoopPolynomial& x, int truncation) {
  if (truncation < 1) throw Error(Errc::TruncationTooSmall, fmt::format("truncation {} < 1", truncation));
  BlockOperator op;
  op.truncation = truncation;
  op.size = x.size();
  op.full = assemble(x, truncation);
  const Eigen::Index h = static_cast<Eigen::Index>(truncation) * x.size();
  op.minus_minus = op.full.topLeftCorner(h, h);
  op.minus_plus = op.full.topRightCorner(h, h);
  op.plus_minus = op.full.bottomLeftCorner(h, h);
  op.plus_plus = op.full.bottomRightCorner(h, h);
  return op;
}

Complex schwinger_trace(const LoopPolynomial& x, const LoopPolynomial& y, int truncation, bool allow_small) {
  check_same_size(x, y);
  const int need = std::max({x.band(), y.band(), 1});
  if (truncation < need && !allow_small)
    throw Error(Errc::TruncationTooSmall, fmt::format("truncation {} below band {}", truncation, need));
  BlockOperator mx = block_operator(x, truncation), my = block_operator(y, truncation);
  return kernels::trace_of_product_omp(mx.minus_plus, my.plus_minus) -
         kernels::trace_of_product_omp(my.minus_plus, mx.plus_minus);
}

Complex schwinger_residue(const LoopPolynomial& x, const LoopPolynomial& y) {
  check_same_size(x, y);
  return kernels::residue_sum_omp(x.coefficients(), x.band(), y.coefficients(), y.band());
}

double cocycle_identity_defect(const LoopPolynomial& x, const LoopPolynomial& y, const LoopPolynomial& z) {
  return std::abs(schwinger_residue(bracket(x, y), z) + schwinger_residue(bracket(y, z), x) +
                  schwinger_residue(bracket(z, x), y));
}

CentralElement extension_bracket(const CentralElement& u, const CentralElement& v) {
  return {bracket(u.loop, v.loop), schwinger_residue(u.loop, v.loop)};
}

double jacobi_defect(const CentralElement& u, const CentralElement& v, const CentralElement& w) {
  CentralElement a = extension_bracket(extension_bracket(u, v), w);
  CentralElement b = extension_bracket(extension_bracket(v, w), u);
  CentralElement c = extension_bracket(extension_bracket(w, u), v);
  LoopPolynomial sum = a.loop + b.loop + c.loop;
  double dev = std::abs(a.central + b.central + c.central);
  for (const auto& m : sum.coefficients()) dev = std::max(dev, max_abs(m));
  return dev;
}

Eigen::MatrixXcd restrict_to(const Eigen::MatrixXcd& op, int size, int truncation, ModeWindow window) {
  if (window.empty()) return Eigen::MatrixXcd(0, 0);
  const Eigen::Index start = static_cast<Eigen::Index>(window.lo + truncation) * size;
  const Eigen::Index len = static_cast<Eigen::Index>(window.hi - window.lo + 1) * size;
  return op.block(start, start, len, len);
}

DiracDefect dirac_defect(const LoopPolynomial& x, int truncation) {
  if (truncation < x.band() + 1)
    throw Error(Errc::TruncationTooSmall, fmt::format("truncation {} below band + 1 = {}", truncation, x.band() + 1));
  DiracDefect out;
  const Eigen::MatrixXcd d = mode_operator(x.size(), truncation);
  const Eigen::MatrixXcd mx = assemble(x, truncation);
  out.computed = d * mx - mx * d;
  out.predicted = Complex(0.0, -1.0) * assemble(x.derivative(), truncation);
  const int reach = truncation - x.band();
  out.window = {-reach, std::min(reach, truncation - 1)};
  out.interior_deviation = max_abs(restrict_to(out.computed - out.predicted, x.size(), truncation, out.window));
  return out;
}

DefectCurvature defect_curvature(const LoopPolynomial& x, const LoopPolynomial& y, int truncation) {
  check_same_size(x, y);
  const int band = std::max(x.band(), y.band());
  if (truncation < 2 * band + 1)
    throw Error(Errc::TruncationTooSmall,
                fmt::format("truncation {} below 2 band + 1 = {}", truncation, 2 * band + 1));
  auto dfn = [&](const LoopPolynomial& l) {
    const Eigen::MatrixXcd d = mode_operator(l.size(), truncation);
    const Eigen::MatrixXcd m = assemble(l, truncation);
    return Eigen::MatrixXcd(d * m - m * d);
  };
  const Eigen::MatrixXcd dx = dfn(x), dy = dfn(y);
  const Eigen::MatrixXcd f = dx * dy - dy * dx - dfn(bracket(x, y));

  const LoopPolynomial xp = x.derivative(), yp = y.derivative();
  const Complex i(0.0, 1.0);
  const Eigen::MatrixXcd closed = -assemble(bracket(xp, yp), truncation) + i * assemble(bracket(xp, y), truncation) +
                                  i * assemble(bracket(x, yp), truncation);

  DefectCurvature out;
  out.window = {-(truncation - band - 1), truncation - band - 1};
  out.interior = restrict_to(f, x.size(), truncation, out.window);
  out.closed_form = restrict_to(closed, x.size(), truncation, out.window);
  out.deviation = max_abs(out.interior - out.closed_form);
  return out;
}

}  // namespace gerbelab
