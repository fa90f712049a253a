#include "gerbelab/lifting.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include <fmt/format.h>

#include "gerbelab/error.hpp"

namespace gerbelab {

namespace {

std::string tuple_string(const Simplex& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + ")";
}

std::size_t edge(const Nerve& n, int i, int j) { return *n.index_of({i, j}); }

void check_compatible(const TransitionData& td, const CentralExtension& ext) {
  if (!(ext.base == td.group)) throw Error(Errc::InvalidGroup, "extension base differs from the transition group");
  if (ext.sigma.permutation() != td.sigma.permutation())
    throw Error(Errc::InvalidGroup, "extension sigma differs from the transition sigma");
  if (ext.projection.size() != static_cast<std::size_t>(ext.hat.order()) || ext.kernel.empty())
    throw Error(Errc::InvalidGroup, "extension projection or kernel is missing");
}

int hat_twisted_product(const CentralExtension& ext, int eps, int x, int y) {
  return ext.hat.mul(x, ext.sigma_hat.power(eps, y));
}

}  // namespace

SemidirectElement TransitionData::element(int i, int j) const {
  if (i < j) {
    std::size_t e = edge(nerve, i, j);
    return {g[e], eps[e]};
  }
  std::size_t e = edge(nerve, j, i);
  return semidirect_inverse(group, sigma, {g[e], eps[e]});
}

void validate(const TransitionData& td) {
  const std::size_t edges = td.nerve.count(1);
  if (td.g.size() != edges || td.eps.size() != edges)
    throw Error(Errc::ShapeMismatch, fmt::format("{} edges, {} values, {} signs", edges, td.g.size(), td.eps.size()));
  if (static_cast<int>(td.sigma.permutation().size()) != td.group.order())
    throw Error(Errc::InvalidGroup, "sigma has the wrong size");
  if (!td.sigma.is_involution()) throw Error(Errc::InvalidGroup, "sigma is not an involution");
  for (std::size_t e = 0; e < edges; ++e) {
    if (td.g[e] < 0 || td.g[e] >= td.group.order())
      throw Error(Errc::InvalidGroup, fmt::format("g on edge {} is {}", tuple_string(td.nerve.simplices(1)[e]), td.g[e]));
    if (td.eps[e] != 1 && td.eps[e] != -1)
      throw Error(Errc::InvalidTwist, fmt::format("sign on edge {} is {}", tuple_string(td.nerve.simplices(1)[e]),
                                                  td.eps[e]));
  }
}

CocycleReport check_twisted_cocycle(const TransitionData& td) {
  validate(td);
  auto tri = td.nerve.simplices(2);
  for (const Simplex& t : tri) {
    const std::size_t ij = edge(td.nerve, t[0], t[1]), jk = edge(td.nerve, t[1], t[2]), ik = edge(td.nerve, t[0], t[2]);
    if (td.eps[ij] * td.eps[jk] != td.eps[ik])
      return {false, t,
              fmt::format("eps_ij eps_jk = {} but eps_ik = {}", td.eps[ij] * td.eps[jk], td.eps[ik])};
    const int lhs = td.group.mul(td.g[ij], td.sigma.power(td.eps[ij], td.g[jk]));
    if (lhs != td.g[ik])
      return {false, t, fmt::format("g_ij sigma^eps_ij(g_jk) = {} but g_ik = {}", lhs, td.g[ik])};
  }
  return {};
}

LiftChoice section_lifts(const TransitionData& td, const CentralExtension& ext) {
  LiftChoice out;
  for (int v : td.g) out.hat.push_back(ext.section.at(static_cast<std::size_t>(v)));
  return out;
}

TwistedLocalSystem obstruction_system(const TransitionData& td, const CentralExtension& ext) {
  return TwistedLocalSystem(td.nerve, ext.kernel_coefficients(), td.eps);
}

Obstruction obstruction(const TransitionData& td, const CentralExtension& ext, const LiftChoice& lifts) {
  CocycleReport rep = check_twisted_cocycle(td);
  if (!rep.ok) throw Error(Errc::NotACocycle, "transition data fails on " + tuple_string(*rep.triangle) + ": " + rep.detail);
  check_compatible(td, ext);
  const Nerve& n = td.nerve;
  if (lifts.hat.size() != n.count(1))
    throw Error(Errc::ShapeMismatch, fmt::format("{} lifts for {} edges", lifts.hat.size(), n.count(1)));
  for (std::size_t e = 0; e < lifts.hat.size(); ++e) {
    const int h = lifts.hat[e];
    if (h < 0 || h >= ext.hat.order() || ext.projection[static_cast<std::size_t>(h)] != td.g[e])
      throw Error(Errc::LiftMismatch, fmt::format("lift {} on edge {} does not project to {}", h,
                                                  tuple_string(n.simplices(1)[e]), td.g[e]));
  }

  Obstruction ob{td, ext, lifts, obstruction_system(td, ext), zero_cochain(n, 2)};
  std::vector<int> raw(n.count(2));
  auto tri = n.simplices(2);
  for (std::size_t t = 0; t < tri.size(); ++t) {
    const Simplex& s = tri[t];
    const std::size_t ij = edge(n, s[0], s[1]), jk = edge(n, s[1], s[2]), ik = edge(n, s[0], s[2]);
    const int prod = hat_twisted_product(ext, td.eps[ij], lifts.hat[ij], lifts.hat[jk]);
    const int a = ext.hat.mul(prod, ext.hat.inverse(lifts.hat[ik]));
    auto coord = ext.kernel_coordinate(a);
    if (!coord) throw Error(Errc::ValueNotInKernel, fmt::format("a on {} is {}", tuple_string(s), a));
    raw[t] = a;
    ob.cocycle.values[t] = *coord;
  }

  const FiniteGroup& hat = ext.hat;
  for (const Simplex& q : n.simplices(3)) {
    auto a = [&](int i, int j, int k) { return raw[*n.index_of({q[i], q[j], q[k]})]; };
    const int e01 = td.eps[edge(n, q[0], q[1])];
    const int lhs = hat.mul(a(0, 1, 2), a(0, 2, 3));
    const int rhs = hat.mul(ext.sigma_hat.power(e01, a(1, 2, 3)), a(0, 1, 3));
    if (lhs != rhs)
      throw Error(Errc::CocycleIdentityViolated, fmt::format("on {}: a_ijk a_ikl = {} but sigma(a_jkl) a_ijl = {}",
                                                             tuple_string(q), lhs, rhs));
    const int rearranged =
        hat.mul(hat.mul(hat.mul(a(1, 2, 3), hat.inverse(a(0, 1, 3))), a(0, 1, 2)),
                hat.inverse(ext.sigma_hat.power(e01, a(0, 2, 3))));
    if (rearranged != hat.identity()) ob.rearranged_identity_holds = false;
    ++ob.tetrahedra_checked;
  }
  return ob;
}

IntCochain change_lifts(const IntCochain& a, const IntCochain& b, const TwistedLocalSystem& sys) {
  if (a.degree != b.degree + 1) throw Error(Errc::ShapeMismatch, "change of lifts needs degrees k and k-1");
  IntCochain db = coboundary(b, sys);
  if (db.values.size() != a.values.size()) throw Error(Errc::ShapeMismatch, "cochain lengths differ");
  for (std::size_t i = 0; i < db.values.size(); ++i) db.values[i] = sys.coefficients().reduce(db.values[i] + a.values[i]);
  return db;
}

LiftChoice apply_lift_change(const LiftChoice& lifts, const IntCochain& b, const CentralExtension& ext) {
  if (b.values.size() != lifts.hat.size()) throw Error(Errc::ShapeMismatch, "one kernel value per edge expected");
  LiftChoice out = lifts;
  for (std::size_t e = 0; e < out.hat.size(); ++e) out.hat[e] = ext.hat.mul(ext.kernel_element(b.values[e]), out.hat[e]);
  return out;
}

CocycleReport check_strict_lift(const TransitionData& td, const CentralExtension& ext, const LiftChoice& lifts) {
  const Nerve& n = td.nerve;
  for (const Simplex& s : n.simplices(2)) {
    const std::size_t ij = edge(n, s[0], s[1]), jk = edge(n, s[1], s[2]), ik = edge(n, s[0], s[2]);
    const int lhs = hat_twisted_product(ext, td.eps[ij], lifts.hat[ij], lifts.hat[jk]);
    if (lhs != lifts.hat[ik])
      return {false, s, fmt::format("lift_ij sigma_hat(lift_jk) = {} but lift_ik = {}", lhs, lifts.hat[ik])};
  }
  return {};
}

Trivialization trivialize(const Obstruction& ob) {
  IntCochain target = ob.cocycle;
  for (auto& v : target.values) v = ob.system.coefficients().reduce(-v);
  CoboundaryResult r = is_coboundary(target, ob.system);
  Trivialization out;
  out.order = r.order;
  if (!r.primitive) {
    out.certificate = std::move(r.certificate);
    return out;
  }
  LiftChoice fixed = apply_lift_change(ob.lifts, *r.primitive, ob.extension);
  CocycleReport strict = check_strict_lift(ob.transitions, ob.extension, fixed);
  if (!strict.ok)
    throw Error(Errc::CocycleIdentityViolated, "corrected lifts fail on " + tuple_string(*strict.triangle) + ": " +
                                                   strict.detail);
  out.lifts = std::move(fixed);
  out.correction = std::move(r.primitive);
  return out;
}

GerbeModuleReport check_gerbe_module(const Nerve& nerve, const std::vector<Eigen::MatrixXcd>& phi,
                                     const RealCochain& a, double tolerance) {
  if (phi.size() != nerve.count(1) || a.values.size() != nerve.count(2) || a.degree != 2)
    throw Error(Errc::ShapeMismatch, fmt::format("{} matrices for {} edges, {} phases for {} triangles", phi.size(),
                                                 nerve.count(1), a.values.size(), nerve.count(2)));
  const Eigen::Index size = phi.empty() ? 0 : phi.front().rows();
  for (const auto& m : phi)
    if (m.rows() != size || m.cols() != size) throw Error(Errc::ShapeMismatch, "matrices must share one square shape");

  GerbeModuleReport rep;
  auto tri = nerve.simplices(2);
  for (std::size_t t = 0; t < tri.size(); ++t) {
    const Simplex& s = tri[t];
    const auto& ij = phi[edge(nerve, s[0], s[1])];
    const auto& jk = phi[edge(nerve, s[1], s[2])];
    const auto& ik = phi[edge(nerve, s[0], s[2])];
    const std::complex<double> phase = std::polar(1.0, 2.0 * std::numbers::pi * a.values[t]);
    const double dev = (ij * jk - phase * ik).norm();
    if (dev > rep.max_deviation) {
      rep.max_deviation = dev;
      rep.worst = s;
    }
  }
  rep.ok = rep.max_deviation <= tolerance;
  return rep;
}

RealCochain obstruction_phases(const Obstruction& ob) {
  const double order = static_cast<double>(ob.extension.kernel.size());
  RealCochain out{2, {}};
  for (auto v : ob.cocycle.values) out.values.push_back(static_cast<double>(v) / order);
  return out;
}

std::optional<std::vector<Eigen::MatrixXcd>> rank_one_module(const Obstruction& ob) {
  // the module relation carries no twist on phi, so the phases are solved
  // over the untwisted circle
  auto sys = TwistedLocalSystem::untwisted(ob.transitions.nerve, CoefficientGroup::circle());
  std::optional<RealCochain> theta;
  try {
    theta = u1_primitive(obstruction_phases(ob), sys);
  } catch (const Error& e) {
    if (e.code() != Errc::NotU1Cocycle) throw;
    return std::nullopt;
  }
  if (!theta) return std::nullopt;
  std::vector<Eigen::MatrixXcd> phi;
  for (double v : theta->values)
    phi.push_back(Eigen::MatrixXcd::Constant(1, 1, std::polar(1.0, 2.0 * std::numbers::pi * v)));
  return phi;
}

}  // namespace gerbelab
