#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gerbelab/coeffs.hpp"
#include "gerbelab/nerve.hpp"
#include "gerbelab/smith.hpp"

namespace gerbelab {

/// A coefficient group over a nerve together with a Z/2 edge cocycle eps;
/// a sign -1 acts on coefficients through the group's involution.
class TwistedLocalSystem {
 public:
  /// `eps` holds one sign per edge in canonical order. Throws InvalidTwist
  /// unless eps_ij eps_jk = eps_ik on every triangle.
  TwistedLocalSystem(Nerve nerve, CoefficientGroup coeff, std::vector<int> eps);
  static TwistedLocalSystem untwisted(Nerve nerve, CoefficientGroup coeff);

  const Nerve& nerve() const noexcept { return nerve_; }
  const CoefficientGroup& coefficients() const noexcept { return coeff_; }
  const std::vector<int>& twist() const noexcept { return eps_; }
  int edge_sign(std::size_t edge) const { return eps_[edge]; }

  /// Sign multiplying the leading face term of the coboundary on simplex #i
  /// of degree k >= 1: eps of its first edge when the involution acts
  /// nontrivially, +1 otherwise.
  const std::vector<int>& leading_signs(int k) const { return lead_[k]; }

  /// Same nerve and twist, different coefficients.
  TwistedLocalSystem with_coefficients(CoefficientGroup coeff) const;

 private:
  Nerve nerve_;
  CoefficientGroup coeff_;
  std::vector<int> eps_;
  std::vector<std::vector<int>> lead_;
};

/// One value per canonical k-simplex.
template <class T>
struct Cochain {
  int degree = 0;
  std::vector<T> values;
  friend bool operator==(const Cochain&, const Cochain&) = default;
};

using IntCochain = Cochain<std::int64_t>;
using RealCochain = Cochain<double>;

IntCochain zero_cochain(const Nerve& nerve, int degree);
RealCochain zero_real_cochain(const Nerve& nerve, int degree);

/// (dc)(i0..i_{k+1}) = eps_{i0 i1} . c(i1..i_{k+1}) + sum_{r>=1} (-1)^r c(..^i_r..).
/// Exact coefficient kinds only; values are reduced into Z/n.
IntCochain coboundary(const IntCochain& c, const TwistedLocalSystem& sys);
/// Reals or R/Z (reduced into [0,1)).
RealCochain coboundary(const RealCochain& c, const TwistedLocalSystem& sys);

/// Integer matrix of the coboundary C^k -> C^{k+1}, rows indexed by
/// (k+1)-simplices. Entries are 0, +-1.
IntMatrix coboundary_matrix(const TwistedLocalSystem& sys, int k);

/// H^k as free rank plus torsion invariants (Z, Z/n) or a dimension (R, Z/p).
struct CohomologyGroup {
  CoefficientGroup coeff;
  int degree = 0;
  std::size_t free_rank = 0;
  std::vector<BigInt> torsion;
  /// Set for fields: reals and prime moduli.
  std::optional<std::size_t> dimension;

  bool trivial() const noexcept { return free_rank == 0 && torsion.empty(); }
  /// "0", "dim d", "free r, torsion [t1, t2]".
  std::string describe() const;
};

CohomologyGroup cohomology(const TwistedLocalSystem& sys, int k);

/// Cohomology of an exact coefficient system with explicit generators and a
/// way to read off the class of any cocycle.
class CohomologyDecomposition {
 public:
  CohomologyDecomposition(const TwistedLocalSystem& sys, int k);

  const CohomologyGroup& group() const noexcept { return group_; }
  /// Cocycles generating the torsion summands (same order as group().torsion).
  const std::vector<IntCochain>& torsion_generators() const noexcept { return torsion_gens_; }
  const std::vector<IntCochain>& free_generators() const noexcept { return free_gens_; }

  /// Coordinates of [z] along the cyclic summands: torsion part reduced
  /// modulo the invariants, followed by the free part. Throws NotACocycle.
  std::vector<BigInt> class_coordinates(const IntCochain& z) const;
  bool is_trivial(const IntCochain& z) const;
  /// Order of [z]; nullopt when infinite.
  std::optional<BigInt> class_order(const IntCochain& z) const;

 private:
  std::vector<BigInt> basis_coordinates(const IntCochain& z) const;

  TwistedLocalSystem sys_;
  int degree_;
  CohomologyGroup group_;
  IntMatrix cocycle_basis_;   // columns span the cocycle lattice
  SmithForm basis_form_;      // of cocycle_basis_, for coordinates
  SmithForm relation_form_;   // of the relation matrix in basis coordinates
  std::vector<std::size_t> torsion_rows_;
  std::vector<IntCochain> torsion_gens_;
  std::vector<IntCochain> free_gens_;
};

/// w with w^T d ≡ 0 (mod modulus; 0 means exactly) and w . z ≢ 0: no
/// coboundary can pair nontrivially with w, so z is not one.
struct CoboundaryCertificate {
  std::vector<BigInt> functional;
  BigInt modulus;
};

struct CoboundaryResult {
  std::optional<IntCochain> primitive;
  std::optional<CoboundaryCertificate> certificate;
  /// Order of the class; 1 when trivial, nullopt when infinite.
  std::optional<BigInt> order;
  bool is_coboundary() const noexcept { return primitive.has_value(); }
};

/// Decides whether z = d b over an exact coefficient ring. Throws
/// NotACocycle when dz != 0.
CoboundaryResult is_coboundary(const IntCochain& z, const TwistedLocalSystem& sys);

/// Checks a certificate independently of how it was produced.
bool verify_certificate(const CoboundaryCertificate& cert, const IntCochain& z, const TwistedLocalSystem& sys);

struct RealCoboundaryResult {
  std::optional<RealCochain> primitive;
  /// z - d b for the least-squares b; lies in ker d^T and pairs with z to
  /// |residual|^2 when z is not a coboundary.
  RealCochain residual;
  double residual_norm = 0.0;
  bool is_coboundary() const noexcept { return primitive.has_value(); }
};

/// Least-squares version over the reals (coefficient kind Reals).
RealCoboundaryResult is_coboundary(const RealCochain& z, const TwistedLocalSystem& sys);

/// Result of the connecting map of 0 -> Z_a -> R_a -> U(1)_a -> 0.
struct BocksteinResult {
  IntCochain cocycle;
  bool trivial = false;
  std::optional<BigInt> order;
  std::optional<IntCochain> primitive;
  std::optional<CoboundaryCertificate> certificate;
};

/// Lifts a U(1)-valued cocycle to [0,1), applies the real coboundary and
/// reads off the integral cocycle and its class in H^{k+1}(X; Z_a).
/// Throws NotU1Cocycle or LiftNotIntegral.
BocksteinResult bockstein_dd(const RealCochain& a, const TwistedLocalSystem& sys);

/// Two-stage triviality test in H^k(X; U(1)_a): the Bockstein class must
/// vanish, then the corrected real cocycle must lie in the real
/// coboundaries plus the integral cocycles. Returns phi with d phi = a
/// modulo one, or nullopt.
std::optional<RealCochain> u1_primitive(const RealCochain& a, const TwistedLocalSystem& sys);

}  // namespace gerbelab
