#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gerbelab {

enum class CoeffKind { Integers, IntegersMod, Reals, CircleRmodZ };
enum class Involution { Identity, Negation };

/// Abelian coefficient group together with the involution through which a
/// sign -1 acts. U(1) is stored additively as reals modulo one.
class CoefficientGroup {
 public:
  static CoefficientGroup integers(Involution inv = Involution::Identity);
  static CoefficientGroup integers_mod(std::int64_t n, Involution inv = Involution::Identity);
  static CoefficientGroup reals(Involution inv = Involution::Identity, double tolerance = 1e-9);
  static CoefficientGroup circle(Involution inv = Involution::Identity, double tolerance = 1e-9);

  CoeffKind kind() const noexcept { return kind_; }
  std::int64_t modulus() const noexcept { return modulus_; }
  Involution involution() const noexcept { return involution_; }
  double tolerance() const noexcept { return tolerance_; }
  bool exact() const noexcept { return kind_ == CoeffKind::Integers || kind_ == CoeffKind::IntegersMod; }
  /// True when a sign -1 acts nontrivially (negation on anything but Z/2).
  bool twist_acts() const noexcept {
    return involution_ == Involution::Negation && !(kind_ == CoeffKind::IntegersMod && modulus_ == 2);
  }

  /// Canonical representative: [0,n) for Z/n, [0,1) for R/Z.
  std::int64_t reduce(std::int64_t v) const;
  double reduce(double v) const;

  std::int64_t act(int sign, std::int64_t v) const {
    return (sign < 0 && involution_ == Involution::Negation) ? reduce(-v) : v;
  }
  double act(int sign, double v) const {
    return (sign < 0 && involution_ == Involution::Negation) ? reduce(-v) : v;
  }

  /// Equality up to tolerance, modulo one for the circle.
  bool equal(double a, double b) const;

  std::string name() const;

  friend bool operator==(const CoefficientGroup&, const CoefficientGroup&) = default;

 private:
  CoeffKind kind_ = CoeffKind::Integers;
  std::int64_t modulus_ = 0;
  Involution involution_ = Involution::Identity;
  double tolerance_ = 0.0;
};

/// Finite group given by its multiplication table; elements are 0..order-1.
class FiniteGroup {
 public:
  FiniteGroup() = default;

  /// Validates closure, associativity, identity and inverses.
  static FiniteGroup from_table(std::vector<std::vector<int>> table);
  /// Z/n written additively, element k is the residue k.
  static FiniteGroup cyclic(int n);
  /// Element (a, b) is numbered a * |rhs| + b.
  static FiniteGroup direct_product(const FiniteGroup& lhs, const FiniteGroup& rhs);

  int order() const noexcept { return static_cast<int>(table_.size()); }
  int identity() const noexcept { return identity_; }
  int mul(int a, int b) const { return table_[a][b]; }
  int inverse(int a) const { return inverse_[a]; }
  bool is_abelian() const;
  const std::vector<std::vector<int>>& table() const noexcept { return table_; }

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) { return a.table_ == b.table_; }

 private:
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
  int identity_ = 0;
};

/// Group automorphism of a finite group, stored as a permutation.
class Automorphism {
 public:
  Automorphism() = default;

  static Automorphism identity(const FiniteGroup& g);
  /// x -> x^{-1}; an automorphism only for abelian groups.
  static Automorphism inversion(const FiniteGroup& g);
  /// Validates bijectivity and multiplicativity.
  static Automorphism from_permutation(const FiniteGroup& g, std::vector<int> perm);

  int operator()(int x) const { return perm_[x]; }
  /// sigma^eps: identity for eps = +1, sigma for eps = -1.
  int power(int eps, int x) const { return eps < 0 ? perm_[x] : x; }
  bool is_involution() const;
  bool is_identity() const;
  const std::vector<int>& permutation() const noexcept { return perm_; }

 private:
  std::vector<int> perm_;
};

/// (g, eps) in G x_sigma Z/2.
struct SemidirectElement {
  int g = 0;
  int eps = 1;
  friend bool operator==(const SemidirectElement&, const SemidirectElement&) = default;
};

/// (g, e)(g', e') = (g sigma^e(g'), e e').
SemidirectElement semidirect_mul(const FiniteGroup& group, const Automorphism& sigma,
                                 SemidirectElement x, SemidirectElement y);
/// (g, e)^{-1} = (sigma^e(g^{-1}), e).
SemidirectElement semidirect_inverse(const FiniteGroup& group, const Automorphism& sigma,
                                     SemidirectElement x);
/// The whole semidirect product as a table group; (g, +1) -> g, (g, -1) -> |G| + g.
FiniteGroup semidirect_product(const FiniteGroup& group, const Automorphism& sigma);

/// 1 -> A -> hat -> base -> 1 with a cyclic central kernel A.
///
/// `kernel[i]` is the hat element identified with i in Z/|kernel|; it must
/// be the i-th power of kernel[1]. The section is any set map with
/// q o s = id; it need not be multiplicative.
struct CentralExtension {
  FiniteGroup hat;
  FiniteGroup base;
  std::vector<int> projection;
  std::vector<int> kernel;
  std::vector<int> section;
  Automorphism sigma_hat;
  Automorphism sigma;

  /// Z/|A| with the involution induced by sigma_hat on A.
  CoefficientGroup kernel_coefficients() const;
  std::optional<std::int64_t> kernel_coordinate(int hat_element) const;
  int kernel_element(std::int64_t coordinate) const;
};

enum class ExtensionDefect { None, NotHomomorphism, KernelMismatch, NotCentral, BadSection, NotEquivariant };

std::string to_string(ExtensionDefect d);

struct ExtensionReport {
  ExtensionDefect defect = ExtensionDefect::None;
  std::string detail;
  bool ok() const noexcept { return defect == ExtensionDefect::None; }
};

/// Checks, in order: q is a surjective homomorphism, the kernel list is
/// exactly q^{-1}(e) and cyclic with sigma_hat acting by +-1, centrality,
/// q o s = id, q o sigma_hat = sigma o q. Reports the first violation.
ExtensionReport verify_extension(const CentralExtension& ext);

/// s(x) s(y) s(xy)^{-1}, the group 2-cocycle of the section.
int section_defect(const CentralExtension& ext, int x, int y);

}  // namespace gerbelab
