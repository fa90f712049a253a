#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gerbelab/cech.hpp"
#include "gerbelab/coeffs.hpp"
#include "gerbelab/nerve.hpp"

namespace gerbelab {

/// Candidate G x_sigma Z/2 cocycle h_ij = (g_ij, eps_ij), stored on
/// ascending edges in canonical edge order.
struct TransitionData {
  Nerve nerve;
  FiniteGroup group;
  Automorphism sigma;
  std::vector<int> g;
  std::vector<int> eps;

  /// h_ij for any ordered pair of distinct vertices spanning an edge; the
  /// descending value is the semidirect inverse of the ascending one.
  SemidirectElement element(int i, int j) const;
};

/// Throws ShapeMismatch or InvalidGroup on malformed data (lengths, ranges,
/// signs); says nothing about the cocycle condition.
void validate(const TransitionData& td);

struct CocycleReport {
  bool ok = true;
  std::optional<Simplex> triangle;
  std::string detail;
};

/// eps_ij eps_jk = eps_ik and g_ij sigma^{eps_ij}(g_jk) = g_ik on every
/// triangle; the first failure is reported with both sides.
CocycleReport check_twisted_cocycle(const TransitionData& td);

/// A lift of every g_ij to the extended group.
struct LiftChoice {
  std::vector<int> hat;
  friend bool operator==(const LiftChoice&, const LiftChoice&) = default;
};

/// Lifts through the extension's stored section.
LiftChoice section_lifts(const TransitionData& td, const CentralExtension& ext);

/// The A-valued system of the obstruction: kernel coefficients with the
/// involution induced by sigma_hat, twisted by eps.
TwistedLocalSystem obstruction_system(const TransitionData& td, const CentralExtension& ext);

struct Obstruction {
  TransitionData transitions;
  CentralExtension extension;
  LiftChoice lifts;
  TwistedLocalSystem system;
  /// a_ijk in kernel coordinates, one entry per triangle.
  IntCochain cocycle;
  std::size_t tetrahedra_checked = 0;
  /// Whether the rearranged quadruple identity
  /// a_jkl a_ijl^{-1} a_ijk (sigma_hat^{eps_ij} a_ikl)^{-1} = 1 also held
  /// everywhere.
  bool rearranged_identity_holds = true;
};

/// a_ijk = lift_ij sigma_hat^{eps_ij}(lift_jk) lift_ik^{-1}, checked to lie in
/// the kernel and to satisfy a_ijk a_ikl = sigma_hat^{eps_ij}(a_jkl) a_ijl on
/// every tetrahedron. Throws NotACocycle, LiftMismatch, ValueNotInKernel,
/// CocycleIdentityViolated.
Obstruction obstruction(const TransitionData& td, const CentralExtension& ext, const LiftChoice& lifts);

/// a'_ijk = b_ij sigma_hat^{eps_ij}(b_jk) b_ik^{-1} a_ijk, i.e. a + db.
IntCochain change_lifts(const IntCochain& a, const IntCochain& b, const TwistedLocalSystem& sys);

/// lift'_ij = b_ij lift_ij; the obstruction of the result is change_lifts(a, b).
LiftChoice apply_lift_change(const LiftChoice& lifts, const IntCochain& b, const CentralExtension& ext);

/// Strict cocycle check lift_ij sigma_hat^{eps_ij}(lift_jk) = lift_ik.
CocycleReport check_strict_lift(const TransitionData& td, const CentralExtension& ext, const LiftChoice& lifts);

struct Trivialization {
  std::optional<LiftChoice> lifts;
  /// b with db = -a, so that b . lift is strict.
  std::optional<IntCochain> correction;
  std::optional<CoboundaryCertificate> certificate;
  std::optional<BigInt> order;
  bool trivial() const noexcept { return lifts.has_value(); }
};

/// Corrected lifts when [a] = 0 (re-verified strictly), otherwise the
/// certificate and the order of the class.
Trivialization trivialize(const Obstruction& ob);

struct GerbeModuleReport {
  bool ok = true;
  double max_deviation = 0.0;
  std::optional<Simplex> worst;
};

/// phi_ij phi_jk = exp(2 pi i a_ijk) phi_ik on every triangle, with one
/// square matrix per ascending edge and a in R/Z. Throws ShapeMismatch.
GerbeModuleReport check_gerbe_module(const Nerve& nerve, const std::vector<Eigen::MatrixXcd>& phi,
                                     const RealCochain& a, double tolerance = 1e-9);

/// Rank-one module for an obstruction whose U(1) image is trivial: scalar
/// phases theta with d theta = a / |A| modulo one. Returns nullopt when the
/// U(1) class does not vanish.
std::optional<std::vector<Eigen::MatrixXcd>> rank_one_module(const Obstruction& ob);

/// The obstruction as U(1) phases a / |A|.
RealCochain obstruction_phases(const Obstruction& ob);

}  // namespace gerbelab
