#include <doctest.h>

#include <random>

#include "gerbelab/error.hpp"
#include "gerbelab/schwinger.hpp"

using namespace gerbelab;
using Eigen::MatrixXcd;

namespace {

// Entry-by-entry assembly over (output s, input r) pairs.
MatrixXcd brute_force_operator(const LoopPolynomial& x, int k) {
  const int n = x.size();
  MatrixXcd out = MatrixXcd::Zero(2 * k * n, 2 * k * n);
  for (int s = -k; s < k; ++s)
    for (int r = -k; r < k; ++r)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) out((s + k) * n + a, (r + k) * n + b) = x.coeff(s - r)(a, b);
  return out;
}

// Tr(A_{-+} B_{+-}) by explicit index sums over s < 0 <= r.
Complex brute_force_trace(const LoopPolynomial& x, const LoopPolynomial& y, int k) {
  Complex t{};
  for (int s = -k; s < 0; ++s)
    for (int r = 0; r < k; ++r) t += (x.coeff(s - r) * y.coeff(r - s)).trace() - (y.coeff(s - r) * x.coeff(r - s)).trace();
  return t;
}

MatrixXcd mat(std::initializer_list<std::initializer_list<Complex>> rows) {
  MatrixXcd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (auto row : rows) {
    Eigen::Index j = 0;
    for (auto v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::Parse;
}

}  // namespace

TEST_CASE("loop arithmetic") {
  std::mt19937_64 rng(1);
  auto x = LoopPolynomial::random(rng, 2, 2);
  auto y = LoopPolynomial::random(rng, 2, 3);
  auto p = x * y;
  CHECK(p.band() == 5);
  MatrixXcd c4 = x.coeff(1) * y.coeff(3) + x.coeff(2) * y.coeff(2);
  CHECK((p.coeff(4) - c4).norm() < 1e-14);
  CHECK(x.coeff(7).isZero());
  auto d = x.derivative();
  CHECK((d.coeff(-2) - Complex(0, -2) * x.coeff(-2)).norm() < 1e-14);
  CHECK(d.coeff(0).isZero());
  CHECK(bracket(x, x).norm() < 1e-14);

  auto skew = LoopPolynomial::random(rng, 3, 2, true);
  CHECK(skew.skew_deviation() < 1e-15);
  CHECK_NOTHROW(skew.validate());
  skew.set(1, MatrixXcd::Identity(3, 3));
  CHECK(code_of([&] { skew.validate(); }) == Errc::ShapeMismatch);
  CHECK(code_of([&] { x.set(0, MatrixXcd::Zero(3, 3)); }) == Errc::ShapeMismatch);
}

TEST_CASE("block operator layout") {
  // constant loop: block diagonal
  auto c = LoopPolynomial::constant(mat({{1, 2}, {3, 4}}));
  auto op = block_operator(c, 3);
  CHECK(op.minus_plus.isZero());
  CHECK(op.plus_minus.isZero());
  CHECK((op.plus_plus.block(2, 2, 2, 2) - mat({{1, 2}, {3, 4}})).norm() == 0.0);

  MatrixXcd one = MatrixXcd::Identity(1, 1);
  auto z = LoopPolynomial::monomial(1, one);
  auto zop = block_operator(z, 2);
  CHECK(zop.minus_plus.isZero());
  CHECK(zop.plus_minus.cwiseAbs().sum() == 1.0);
  CHECK(zop.plus_minus(0, 1) == Complex(1.0));  // mode -1 -> mode 0

  auto zinv = LoopPolynomial::monomial(-1, one);
  auto iop = block_operator(zinv, 2);
  CHECK(iop.minus_plus.cwiseAbs().sum() == 1.0);
  CHECK(iop.minus_plus(1, 0) == Complex(1.0));  // mode 0 -> mode -1

  std::mt19937_64 rng(2);
  for (int t = 0; t < 40; ++t) {
    const int n = 1 + static_cast<int>(rng() % 3), band = static_cast<int>(rng() % 5);
    const int k = 1 + static_cast<int>(rng() % 7);
    auto x = LoopPolynomial::random(rng, n, band);
    CHECK((block_operator(x, k).full - brute_force_operator(x, k)).norm() == 0.0);
  }
  CHECK(code_of([&] { block_operator(c, 0); }) == Errc::TruncationTooSmall);
}

TEST_CASE("Schwinger cocycle examples") {
  MatrixXcd e = mat({{1, 2}, {0, Complex(0, 1)}});
  MatrixXcd f = mat({{3, 0}, {Complex(1, -1), 2}});
  auto x = LoopPolynomial::monomial(1, e);
  auto y = LoopPolynomial::monomial(-1, f);
  const Complex expected = -(e * f).trace();
  CHECK(std::abs(schwinger_trace(x, y, 1) - expected) < 1e-14);
  CHECK(std::abs(schwinger_residue(x, y) - expected) < 1e-14);

  auto cx = LoopPolynomial::constant(e), cy = LoopPolynomial::constant(f);
  CHECK(std::abs(schwinger_trace(cx, cy, 1)) == 0.0);
  CHECK(std::abs(schwinger_residue(cx, cy)) == 0.0);

  std::mt19937_64 rng(3);
  auto r = LoopPolynomial::random(rng, 3, 4);
  CHECK(std::abs(schwinger_trace(r, r, 4)) < 1e-12);
  CHECK(code_of([&] { schwinger_trace(r, r, 3); }) == Errc::TruncationTooSmall);
  CHECK_NOTHROW(schwinger_trace(r, r, 3, true));
}

TEST_CASE("trace equals residue and is independent of truncation") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + static_cast<int>(rng() % 4), band = 1 + static_cast<int>(rng() % 8);
    auto x = LoopPolynomial::random(rng, n, band);
    auto y = LoopPolynomial::random(rng, n, 1 + static_cast<int>(rng() % band));
    const double tol = 1e-10 * tolerance_scale({&x, &y});
    const Complex res = schwinger_residue(x, y);
    const Complex at_band = schwinger_trace(x, y, band);
    CHECK(std::abs(at_band - res) <= tol);
    CHECK(std::abs(at_band - brute_force_trace(x, y, band)) <= tol);
    for (int k : {band + 1, band + 5}) CHECK(std::abs(schwinger_trace(x, y, k) - at_band) <= tol);
  }
}

TEST_CASE("truncation below the band misses modes") {
  std::mt19937_64 rng(5);
  auto x = LoopPolynomial::monomial(3, MatrixXcd::Identity(2, 2));
  auto y = LoopPolynomial::monomial(-3, MatrixXcd::Identity(2, 2));
  CHECK(std::abs(schwinger_residue(x, y) + 6.0) < 1e-14);
  // of the three pairs s < 0 <= r with r - s = 3 only (-2, 1) fits into -2..1
  CHECK(std::abs(schwinger_trace(x, y, 2, true) + 2.0) < 1e-14);
  CHECK(std::abs(schwinger_trace(x, y, 3) + 6.0) < 1e-14);
}

TEST_CASE("antisymmetry and bilinearity") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int t = 0; t < 50; ++t) {
    const int n = 1 + static_cast<int>(rng() % 4), band = 1 + static_cast<int>(rng() % 6);
    auto x1 = LoopPolynomial::random(rng, n, band), x2 = LoopPolynomial::random(rng, n, band);
    auto y = LoopPolynomial::random(rng, n, band);
    const Complex a(u(rng), u(rng)), b(u(rng), u(rng));
    auto combo = a * x1 + b * x2;
    const double tol = 1e-10 * tolerance_scale({&combo, &y}) * (1 + std::abs(a) + std::abs(b));
    CHECK(std::abs(schwinger_residue(x1, y) + schwinger_residue(y, x1)) <= tol);
    CHECK(std::abs(schwinger_trace(x1, y, band) + schwinger_trace(y, x1, band)) <= tol);
    CHECK(std::abs(schwinger_residue(combo, y) - a * schwinger_residue(x1, y) - b * schwinger_residue(x2, y)) <= tol);
    CHECK(std::abs(schwinger_trace(combo, y, band) - a * schwinger_trace(x1, y, band) -
                   b * schwinger_trace(x2, y, band)) <= tol);
  }
}

TEST_CASE("cocycle identity and Jacobi") {
  MatrixXcd e = mat({{0, 1}, {0, 0}}), f = mat({{0, 0}, {1, 0}}), h = mat({{1, 0}, {0, -1}});
  auto x = LoopPolynomial::monomial(1, e), y = LoopPolynomial::monomial(-1, f), z = LoopPolynomial::constant(h);
  CHECK(cocycle_identity_defect(x, y, z) == 0.0);
  CHECK(cocycle_identity_defect(LoopPolynomial::constant(e), LoopPolynomial::constant(f), z) == 0.0);

  // the central part of [(zE,0),(z^-1 F,0)] is -tr(EF)
  auto br = extension_bracket({x, 0.0}, {y, 0.0});
  CHECK(br.central == -(e * f).trace());
  CHECK((br.loop.coeff(0) - (e * f - f * e)).norm() == 0.0);

  LoopPolynomial zero(2, 0);
  auto central = extension_bracket({zero, Complex(5, 1)}, {x, 2.0});
  CHECK(central.loop.norm() == 0.0);
  CHECK(central.central == 0.0);

  std::mt19937_64 rng(7);
  for (int t = 0; t < 60; ++t) {
    const int n = 1 + static_cast<int>(rng() % 4), band = static_cast<int>(rng() % 9);
    auto a = LoopPolynomial::random(rng, n, band), b = LoopPolynomial::random(rng, n, band),
         c = LoopPolynomial::random(rng, n, band);
    const double tol = 1e-10 * tolerance_scale({&a, &b, &c});
    CHECK(cocycle_identity_defect(a, b, c) <= tol);
    CHECK(jacobi_defect({a, 0.3}, {b, -1.0}, {c, Complex(0, 2)}) <= tol);
  }
}

TEST_CASE("Dirac defect") {
  // N = 1, X = z, K = 3: [D, M_X] has entry (r + 1) - r = 1 below the diagonal
  auto z = LoopPolynomial::monomial(1, MatrixXcd::Identity(1, 1));
  auto dd = dirac_defect(z, 3);
  MatrixXcd expected = MatrixXcd::Zero(6, 6);
  for (int i = 0; i + 1 < 6; ++i) expected(i + 1, i) = 1.0;
  CHECK((dd.computed - expected).norm() == 0.0);
  CHECK((dd.predicted - expected).norm() == 0.0);
  CHECK(dd.window.lo == -2);
  CHECK(dd.window.hi == 2);

  auto c = LoopPolynomial::constant(mat({{1, 2}, {3, 4}}));
  auto cd = dirac_defect(c, 2);
  CHECK(cd.computed.isZero());
  CHECK(cd.predicted.isZero());

  std::mt19937_64 rng(8);
  for (int t = 0; t < 30; ++t) {
    const int n = 1 + static_cast<int>(rng() % 4), band = static_cast<int>(rng() % 8);
    auto x = LoopPolynomial::random(rng, n, band);
    CHECK(dirac_defect(x, band + 3).interior_deviation <= 1e-12);
  }
  CHECK(code_of([&] { dirac_defect(z, 1); }) == Errc::TruncationTooSmall);
}

TEST_CASE("defect curvature") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + static_cast<int>(rng() % 2), band = 1 + static_cast<int>(rng() % 4);
    auto x = LoopPolynomial::random(rng, n, band), y = LoopPolynomial::random(rng, n, band);
    const int k = 2 * band + 1 + static_cast<int>(rng() % 3);
    const double tol = 1e-10 * tolerance_scale({&x, &y}) * band * band;
    auto f = defect_curvature(x, y, k);
    CHECK(f.deviation <= tol);
    CHECK((f.interior + defect_curvature(y, x, k).interior).cwiseAbs().maxCoeff() <= tol);
    CHECK(defect_curvature(x, x, k).interior.cwiseAbs().maxCoeff() <= tol);
    // for N >= 2 the defect map is not a Lie algebra morphism: F is generically nonzero
    CHECK(f.interior.cwiseAbs().maxCoeff() > 1e-3);
  }
  auto scalar = LoopPolynomial::random(rng, 1, 3);
  CHECK(defect_curvature(scalar, LoopPolynomial::random(rng, 1, 3), 7).interior.cwiseAbs().maxCoeff() < 1e-12);
  auto x = LoopPolynomial::random(rng, 2, 2);
  auto c = LoopPolynomial::constant(mat({{1, 0}, {0, 2}}));
  auto fc = defect_curvature(x, c, 5);
  // with a constant argument F reduces to -Dfn([X, C])
  CHECK(fc.deviation <= 1e-10 * tolerance_scale({&x, &c}));
  auto d = LoopPolynomial::constant(mat({{1, 1}, {0, 2}}));
  CHECK(defect_curvature(c, d, 1).interior.cwiseAbs().maxCoeff() == 0.0);
  CHECK(code_of([&] { defect_curvature(x, x, 4); }) == Errc::TruncationTooSmall);
}
