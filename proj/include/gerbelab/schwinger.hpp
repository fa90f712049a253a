#pragma once

#include <complex>
#include <initializer_list>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace gerbelab {

using Complex = std::complex<double>;

/// Band-limited matrix loop X(z) = sum_{|m| <= band} X_m z^m.
class LoopPolynomial {
 public:
  LoopPolynomial() = default;
  /// All coefficients zero.
  LoopPolynomial(int size, int band);

  static LoopPolynomial constant(const Eigen::MatrixXcd& c);
  static LoopPolynomial monomial(int m, const Eigen::MatrixXcd& c);
  /// Entries uniform in the unit square of the complex plane; with
  /// `skew_hermitian` the result satisfies X_{-m} = -X_m^*.
  static LoopPolynomial random(std::mt19937_64& rng, int size, int band, bool skew_hermitian = false);

  int size() const noexcept { return size_; }
  int band() const noexcept { return band_; }
  /// X_m, zero outside the band.
  Eigen::MatrixXcd coeff(int m) const;
  void set(int m, const Eigen::MatrixXcd& c);
  /// Coefficients in ascending mode order, X_{-band} first.
  const std::vector<Eigen::MatrixXcd>& coefficients() const noexcept { return coeffs_; }

  bool skew_hermitian() const noexcept { return skew_; }
  void set_skew_hermitian(bool flag) noexcept { skew_ = flag; }
  /// max_m |X_{-m} + X_m^*|.
  double skew_deviation() const;
  /// Throws ShapeMismatch on ragged coefficients or a violated skew flag.
  void validate(double tolerance = 1e-12) const;

  /// sqrt(sum_m |X_m|_F^2).
  double norm() const;
  /// Same loop with a wider band (no-op when already at least `band`).
  LoopPolynomial widened(int band) const;
  /// The theta-derivative: (X')_m = i m X_m.
  LoopPolynomial derivative() const;

  LoopPolynomial& operator+=(const LoopPolynomial& o);
  friend LoopPolynomial operator+(LoopPolynomial a, const LoopPolynomial& b) { return a += b; }
  friend LoopPolynomial operator-(const LoopPolynomial& a, const LoopPolynomial& b) { return a + (-1.0) * b; }
  friend LoopPolynomial operator*(Complex s, LoopPolynomial a);
  /// Pointwise product, band = sum of bands.
  friend LoopPolynomial operator*(const LoopPolynomial& a, const LoopPolynomial& b);

 private:
  int size_ = 0;
  int band_ = 0;
  bool skew_ = false;
  std::vector<Eigen::MatrixXcd> coeffs_;
};

/// Pointwise commutator [X,Y]_m = sum_p (X_p Y_{m-p} - Y_p X_{m-p}).
LoopPolynomial bracket(const LoopPolynomial& x, const LoopPolynomial& y);

/// max(1, product of the loops' norms): the factor applied to absolute
/// tolerances when comparing multilinear quantities.
double tolerance_scale(std::initializer_list<const LoopPolynomial*> loops);

/// Truncated multiplication operator on modes -K..K-1, each mode an
/// N-dimensional block, split into H_- (modes < 0) and H_+ (modes >= 0).
/// Block names are output-input: minus_plus maps H_+ into H_-.
struct BlockOperator {
  int truncation = 0;
  int size = 0;
  Eigen::MatrixXcd full;
  Eigen::MatrixXcd plus_plus, plus_minus, minus_plus, minus_minus;
};

/// Block (s, r) = X_{s-r}. Throws TruncationTooSmall for K < 1.
BlockOperator block_operator(const LoopPolynomial& x, int truncation);

/// Tr((M_X)_{-+}(M_Y)_{+-} - (M_Y)_{-+}(M_X)_{+-}). Throws
/// TruncationTooSmall when K is below either band unless `allow_small`.
Complex schwinger_trace(const LoopPolynomial& x, const LoopPolynomial& y, int truncation, bool allow_small = false);

/// sum_m m tr(X_{-m} Y_m).
Complex schwinger_residue(const LoopPolynomial& x, const LoopPolynomial& y);

/// |c([X,Y],Z) + c([Y,Z],X) + c([Z,X],Y)| with c the residue form.
double cocycle_identity_defect(const LoopPolynomial& x, const LoopPolynomial& y, const LoopPolynomial& z);

/// Element (X, a) of the centrally extended loop algebra.
struct CentralElement {
  LoopPolynomial loop;
  Complex central{};
};

/// [(X,a),(Y,b)] = ([X,Y], c(X,Y)).
CentralElement extension_bracket(const CentralElement& u, const CentralElement& v);

/// Max entry modulus of the cyclic Jacobi sum over loop and central parts.
double jacobi_defect(const CentralElement& u, const CentralElement& v, const CentralElement& w);

/// Modes lo..hi (inclusive) on which truncated operator identities are
/// compared.
struct ModeWindow {
  int lo = 0;
  int hi = -1;
  bool empty() const noexcept { return hi < lo; }
};

/// Restriction of a truncated operator to the modes of `window`.
Eigen::MatrixXcd restrict_to(const Eigen::MatrixXcd& op, int size, int truncation, ModeWindow window);

struct DiracDefect {
  /// [D, M_X] on the full truncated space.
  Eigen::MatrixXcd computed;
  /// -i M_{X'} on the full truncated space.
  Eigen::MatrixXcd predicted;
  /// |mode| <= K - band.
  ModeWindow window;
  double interior_deviation = 0.0;
};

/// D is the mode-number operator. Throws TruncationTooSmall for K < band + 1.
DiracDefect dirac_defect(const LoopPolynomial& x, int truncation);

struct DefectCurvature {
  /// [Dfn(X), Dfn(Y)] - Dfn([X,Y]) restricted to `window`, Dfn = [D, M_.].
  Eigen::MatrixXcd interior;
  /// -M_{[X',Y']} + i M_{[X',Y]} + i M_{[X,Y']} on the same window.
  Eigen::MatrixXcd closed_form;
  /// |mode| <= K - band - 1, band the larger of the two; products of
  /// truncated operators are exact there.
  ModeWindow window;
  double deviation = 0.0;
};

/// Throws TruncationTooSmall for K < 2 band + 1.
DefectCurvature defect_curvature(const LoopPolynomial& x, const LoopPolynomial& y, int truncation);

}  // namespace gerbelab
