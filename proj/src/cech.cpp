#include "gerbelab/cech.hpp"

#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "gerbelab/error.hpp"
#include "gerbelab/kernels.hpp"

namespace gerbelab {

namespace {

void check_degree(const Nerve& nerve, int k) {
  if (k < 0 || k >= Nerve::kMaxDimension)
    throw Error(Errc::DegreeOverflow, fmt::format("coboundary of a degree {} cochain", k));
  (void)nerve;
}

template <class T>
void check_shape(const Cochain<T>& c, const Nerve& nerve) {
  if (c.degree < 0 || c.degree > Nerve::kMaxDimension || c.values.size() != nerve.count(c.degree))
    throw Error(Errc::ShapeMismatch, fmt::format("degree {} cochain with {} values, nerve has {} simplices", c.degree,
                                                 c.values.size(), nerve.count(c.degree)));
}

std::vector<BigInt> to_big(const IntCochain& c, const CoefficientGroup& coeff) {
  std::vector<BigInt> out;
  out.reserve(c.values.size());
  for (std::int64_t v : c.values) out.emplace_back(coeff.reduce(v));
  return out;
}

IntCochain from_big(const std::vector<BigInt>& v, int degree, const CoefficientGroup& coeff) {
  IntCochain out{degree, {}};
  out.values.reserve(v.size());
  for (const BigInt& x : v) {
    BigInt r = x;
    if (coeff.kind() == CoeffKind::IntegersMod) {
      r %= coeff.modulus();
      if (r < 0) r += coeff.modulus();
    }
    out.values.push_back(r.convert_to<std::int64_t>());
  }
  return out;
}

BigInt floor_mod(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  return r < 0 ? BigInt(r + m) : r;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Eigen::MatrixXd to_real(const IntMatrix& m) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(r, c).convert_to<double>();
  return out;
}

IntMatrix coboundary_matrix_or_empty(const TwistedLocalSystem& sys, int k) {
  if (k < 0) return IntMatrix(sys.nerve().count(0), 0);
  if (k >= Nerve::kMaxDimension) return IntMatrix(0, sys.nerve().count(k));
  return coboundary_matrix(sys, k);
}

// [A | n I], the matrix whose integer solutions describe A x = b modulo n.
IntMatrix append_modulus(const IntMatrix& a, std::int64_t n) {
  IntMatrix out(a.rows(), a.cols() + a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
    out(r, a.cols() + r) = n;
  }
  return out;
}

// y with K y = x for a full-column-rank K given by its Smith form.
std::optional<std::vector<BigInt>> lattice_coordinates(const SmithForm& s, std::size_t cols,
                                                       const std::vector<BigInt>& x) {
  std::vector<BigInt> t = s.u * x;
  std::vector<BigInt> y(cols);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i < s.rank) {
      if (t[i] % s.invariants[i] != 0) return std::nullopt;
      y[i] = t[i] / s.invariants[i];
    } else if (t[i] != 0) {
      return std::nullopt;
    }
  }
  return s.v * y;
}

double distance_to_integer(double x) { return std::abs(x - std::round(x)); }

}  // namespace

// ------------------------------------------------------------ local system

TwistedLocalSystem::TwistedLocalSystem(Nerve nerve, CoefficientGroup coeff, std::vector<int> eps)
    : nerve_(std::move(nerve)), coeff_(coeff), eps_(std::move(eps)) {
  if (eps_.size() != nerve_.count(1))
    throw Error(Errc::InvalidTwist, fmt::format("{} signs for {} edges", eps_.size(), nerve_.count(1)));
  for (std::size_t e = 0; e < eps_.size(); ++e)
    if (eps_[e] != 1 && eps_[e] != -1) throw Error(Errc::InvalidTwist, fmt::format("edge sign {}", eps_[e]));
  auto tri = nerve_.simplices(2);
  for (std::size_t t = 0; t < tri.size(); ++t) {
    // faces: r=0 -> (j,k), r=1 -> (i,k), r=2 -> (i,j)
    int jk = eps_[nerve_.face_index(2, t, 0)];
    int ik = eps_[nerve_.face_index(2, t, 1)];
    int ij = eps_[nerve_.face_index(2, t, 2)];
    if (ij * jk != ik)
      throw Error(Errc::InvalidTwist,
                  fmt::format("twist is not a cocycle on ({},{},{})", tri[t][0], tri[t][1], tri[t][2]));
  }
  lead_.resize(Nerve::kMaxDimension + 1);
  for (int d = 1; d <= Nerve::kMaxDimension; ++d) {
    auto simp = nerve_.simplices(d);
    lead_[d].assign(simp.size(), 1);
    if (!coeff_.twist_acts()) continue;
    for (std::size_t i = 0; i < simp.size(); ++i) {
      auto e = nerve_.index_of({simp[i][0], simp[i][1]});
      lead_[d][i] = eps_[*e];
    }
  }
}

TwistedLocalSystem TwistedLocalSystem::untwisted(Nerve nerve, CoefficientGroup coeff) {
  std::vector<int> eps(nerve.count(1), 1);
  return TwistedLocalSystem(std::move(nerve), coeff, std::move(eps));
}

TwistedLocalSystem TwistedLocalSystem::with_coefficients(CoefficientGroup coeff) const {
  return TwistedLocalSystem(nerve_, coeff, eps_);
}

// --------------------------------------------------------------- cochains

IntCochain zero_cochain(const Nerve& nerve, int degree) {
  return IntCochain{degree, std::vector<std::int64_t>(nerve.count(degree), 0)};
}

RealCochain zero_real_cochain(const Nerve& nerve, int degree) {
  return RealCochain{degree, std::vector<double>(nerve.count(degree), 0.0)};
}

IntCochain coboundary(const IntCochain& c, const TwistedLocalSystem& sys) {
  const auto& coeff = sys.coefficients();
  if (!coeff.exact()) throw Error(Errc::UnsupportedCoefficient, "integer cochain over " + coeff.name());
  check_shape(c, sys.nerve());
  check_degree(sys.nerve(), c.degree);
  IntCochain out{c.degree + 1, std::vector<std::int64_t>(sys.nerve().count(c.degree + 1))};
  kernels::coboundary_omp<std::int64_t>(sys.nerve(), c.degree, sys.leading_signs(c.degree + 1), c.values,
                                        out.values);
  for (auto& v : out.values) v = coeff.reduce(v);
  return out;
}

RealCochain coboundary(const RealCochain& c, const TwistedLocalSystem& sys) {
  const auto& coeff = sys.coefficients();
  if (coeff.exact()) throw Error(Errc::UnsupportedCoefficient, "real cochain over " + coeff.name());
  check_shape(c, sys.nerve());
  check_degree(sys.nerve(), c.degree);
  RealCochain out{c.degree + 1, std::vector<double>(sys.nerve().count(c.degree + 1))};
  kernels::coboundary_omp<double>(sys.nerve(), c.degree, sys.leading_signs(c.degree + 1), c.values, out.values);
  for (auto& v : out.values) v = coeff.reduce(v);
  return out;
}

IntMatrix coboundary_matrix(const TwistedLocalSystem& sys, int k) {
  const Nerve& nerve = sys.nerve();
  check_degree(nerve, k);
  const auto& lead = sys.leading_signs(k + 1);
  IntMatrix m(nerve.count(k + 1), nerve.count(k));
  for (std::size_t s = 0; s < nerve.count(k + 1); ++s) {
    m(s, nerve.face_index(k + 1, s, 0)) = lead[s];
    for (int r = 1; r <= k + 1; ++r) m(s, nerve.face_index(k + 1, s, r)) = (r % 2 == 0) ? 1 : -1;
  }
  return m;
}

// ------------------------------------------------------------- cohomology

std::string CohomologyGroup::describe() const {
  if (trivial()) return "0";
  if (dimension) return fmt::format("dim {}", *dimension);
  std::string t;
  for (std::size_t i = 0; i < torsion.size(); ++i) t += (i ? ", " : "") + to_string(torsion[i]);
  return fmt::format("free {}, torsion [{}]", free_rank, t);
}

CohomologyGroup cohomology(const TwistedLocalSystem& sys, int k) {
  const auto& coeff = sys.coefficients();
  if (k < 0 || k > Nerve::kMaxDimension) throw Error(Errc::DegreeOverflow, fmt::format("degree {}", k));
  switch (coeff.kind()) {
    case CoeffKind::CircleRmodZ:
      throw Error(Errc::UnsupportedCoefficient, "cohomology with R/Z coefficients; use the Bockstein map");
    case CoeffKind::Reals: {
      const std::size_t rank_out = smith_normal_form(coboundary_matrix_or_empty(sys, k), false).rank;
      const std::size_t rank_in = smith_normal_form(coboundary_matrix_or_empty(sys, k - 1), false).rank;
      CohomologyGroup g{coeff, k, 0, {}, std::nullopt};
      g.free_rank = sys.nerve().count(k) - rank_out - rank_in;
      g.dimension = g.free_rank;
      return g;
    }
    default:
      return CohomologyDecomposition(sys, k).group();
  }
}

CohomologyDecomposition::CohomologyDecomposition(const TwistedLocalSystem& sys, int k)
    : sys_(sys), degree_(k), group_{sys.coefficients(), k, 0, {}, std::nullopt} {
  const auto& coeff = sys.coefficients();
  if (!coeff.exact()) throw Error(Errc::UnsupportedCoefficient, "decomposition over " + coeff.name());
  if (k < 0 || k > Nerve::kMaxDimension) throw Error(Errc::DegreeOverflow, fmt::format("degree {}", k));
  const std::size_t m = sys.nerve().count(k);
  const std::int64_t n = coeff.kind() == CoeffKind::IntegersMod ? coeff.modulus() : 0;
  const IntMatrix out = coboundary_matrix_or_empty(sys, k);
  const IntMatrix in = coboundary_matrix_or_empty(sys, k - 1);

  // cocycle lattice
  if (n == 0) {
    cocycle_basis_ = integer_kernel(out);
  } else {
    IntMatrix gens = integer_kernel(append_modulus(out, n)).rows_range(0, m);
    SmithForm g = smith_normal_form(gens);
    cocycle_basis_ = IntMatrix(m, g.rank);
    for (std::size_t i = 0; i < g.rank; ++i)
      for (std::size_t r = 0; r < m; ++r) cocycle_basis_(r, i) = g.u_inv(r, i) * g.invariants[i];
  }
  const std::size_t dim = cocycle_basis_.cols();
  basis_form_ = smith_normal_form(cocycle_basis_);

  // relations in lattice coordinates
  const std::size_t extra = n == 0 ? 0 : m;
  IntMatrix rel(dim, in.cols() + extra);
  for (std::size_t c = 0; c < in.cols() + extra; ++c) {
    std::vector<BigInt> col(m);
    if (c < in.cols()) {
      col = in.column(c);
    } else {
      col[c - in.cols()] = n;
    }
    auto y = lattice_coordinates(basis_form_, dim, col);
    if (!y) throw Error(Errc::NotACocycle, "coboundary outside the cocycle lattice");
    for (std::size_t r = 0; r < dim; ++r) rel(r, c) = (*y)[r];
  }
  relation_form_ = smith_normal_form(rel);

  const IntMatrix gens = cocycle_basis_ * relation_form_.u_inv;
  for (std::size_t i = 0; i < relation_form_.rank; ++i) {
    if (relation_form_.invariants[i] == 1) continue;
    torsion_rows_.push_back(i);
    group_.torsion.push_back(relation_form_.invariants[i]);
    torsion_gens_.push_back(from_big(gens.column(i), k, coeff));
  }
  for (std::size_t i = relation_form_.rank; i < dim; ++i) free_gens_.push_back(from_big(gens.column(i), k, coeff));
  group_.free_rank = dim - relation_form_.rank;
  if (n != 0 && is_prime(n)) group_.dimension = group_.torsion.size();
}

std::vector<BigInt> CohomologyDecomposition::basis_coordinates(const IntCochain& z) const {
  check_shape(z, sys_.nerve());
  if (z.degree != degree_) throw Error(Errc::ShapeMismatch, fmt::format("degree {} class in H^{}", z.degree, degree_));
  if (degree_ < Nerve::kMaxDimension) {
    IntCochain dz = coboundary(z, sys_);
    for (std::int64_t v : dz.values)
      if (v != 0) throw Error(Errc::NotACocycle, "coboundary is nonzero");
  }
  auto y = lattice_coordinates(basis_form_, cocycle_basis_.cols(), to_big(z, sys_.coefficients()));
  if (!y) throw Error(Errc::NotACocycle, "cochain outside the cocycle lattice");
  return relation_form_.u * *y;
}

std::vector<BigInt> CohomologyDecomposition::class_coordinates(const IntCochain& z) const {
  std::vector<BigInt> y = basis_coordinates(z);
  std::vector<BigInt> out;
  for (std::size_t t = 0; t < torsion_rows_.size(); ++t)
    out.push_back(floor_mod(y[torsion_rows_[t]], group_.torsion[t]));
  for (std::size_t i = relation_form_.rank; i < y.size(); ++i) out.push_back(y[i]);
  return out;
}

bool CohomologyDecomposition::is_trivial(const IntCochain& z) const {
  for (const BigInt& c : class_coordinates(z))
    if (c != 0) return false;
  return true;
}

std::optional<BigInt> CohomologyDecomposition::class_order(const IntCochain& z) const {
  std::vector<BigInt> c = class_coordinates(z);
  for (std::size_t i = torsion_rows_.size(); i < c.size(); ++i)
    if (c[i] != 0) return std::nullopt;
  BigInt order = 1;
  for (std::size_t t = 0; t < torsion_rows_.size(); ++t) {
    const BigInt& d = group_.torsion[t];
    BigInt part = d / gcd(d, c[t]);
    order = order / gcd(order, part) * part;
  }
  return order;
}

// ------------------------------------------------------------ coboundaries

CoboundaryResult is_coboundary(const IntCochain& z, const TwistedLocalSystem& sys) {
  const auto& coeff = sys.coefficients();
  if (!coeff.exact()) throw Error(Errc::UnsupportedCoefficient, "exact solve over " + coeff.name());
  check_shape(z, sys.nerve());
  if (z.degree < Nerve::kMaxDimension) {
    for (std::int64_t v : coboundary(z, sys).values)
      if (v != 0) throw Error(Errc::NotACocycle, "coboundary is nonzero");
  }
  const std::int64_t n = coeff.kind() == CoeffKind::IntegersMod ? coeff.modulus() : 0;
  const IntMatrix in = coboundary_matrix_or_empty(sys, z.degree - 1);
  const std::vector<BigInt> rhs = to_big(z, coeff);

  CoboundaryResult result;
  LatticeSolution sol = solve_integer(n == 0 ? in : append_modulus(in, n), rhs);
  if (sol.solution) {
    std::vector<BigInt> b(sol.solution->begin(), sol.solution->begin() + static_cast<std::ptrdiff_t>(in.cols()));
    result.primitive = from_big(b, z.degree - 1, coeff);
    result.order = BigInt(1);
    return result;
  }
  CoboundaryCertificate cert{sol.certificate->functional, sol.certificate->modulus};
  if (n != 0) {
    // every invariant of [d | nI] divides n
    const BigInt scale = BigInt(n) / cert.modulus;
    for (auto& w : cert.functional) w = floor_mod(w * scale, BigInt(n));
    cert.modulus = n;
  }
  result.certificate = std::move(cert);
  result.order = CohomologyDecomposition(sys, z.degree).class_order(z);
  return result;
}

bool verify_certificate(const CoboundaryCertificate& cert, const IntCochain& z, const TwistedLocalSystem& sys) {
  const auto& coeff = sys.coefficients();
  if (!coeff.exact() || z.values.size() != cert.functional.size()) return false;
  if (coeff.kind() == CoeffKind::IntegersMod && (cert.modulus == 0 || BigInt(coeff.modulus()) % cert.modulus != 0))
    return false;
  auto vanishes = [&](const BigInt& x) { return cert.modulus == 0 ? x == 0 : x % cert.modulus == 0; };
  const IntMatrix in = coboundary_matrix_or_empty(sys, z.degree - 1);
  for (std::size_t c = 0; c < in.cols(); ++c) {
    BigInt s = 0;
    for (std::size_t r = 0; r < in.rows(); ++r) s += cert.functional[r] * in(r, c);
    if (!vanishes(s)) return false;
  }
  BigInt pairing = 0;
  for (std::size_t r = 0; r < z.values.size(); ++r) pairing += cert.functional[r] * z.values[r];
  return !vanishes(pairing);
}

RealCoboundaryResult is_coboundary(const RealCochain& z, const TwistedLocalSystem& sys) {
  const auto& coeff = sys.coefficients();
  if (coeff.kind() != CoeffKind::Reals) throw Error(Errc::UnsupportedCoefficient, "real solve over " + coeff.name());
  check_shape(z, sys.nerve());
  const Eigen::Map<const Eigen::VectorXd> rhs(z.values.data(), static_cast<Eigen::Index>(z.values.size()));
  const double scale = std::max(1.0, rhs.norm());
  if (z.degree < Nerve::kMaxDimension) {
    for (double v : coboundary(z, sys).values)
      if (std::abs(v) > coeff.tolerance() * scale) throw Error(Errc::NotACocycle, "real coboundary is nonzero");
  }
  const Eigen::MatrixXd in = to_real(coboundary_matrix_or_empty(sys, z.degree - 1));
  Eigen::VectorXd b = Eigen::VectorXd::Zero(in.cols());
  if (in.cols() > 0 && in.rows() > 0) b = in.completeOrthogonalDecomposition().solve(rhs);
  const Eigen::VectorXd res = rhs - in * b;

  RealCoboundaryResult out;
  out.residual = RealCochain{z.degree, std::vector<double>(res.data(), res.data() + res.size())};
  out.residual_norm = res.norm();
  if (out.residual_norm <= coeff.tolerance() * scale)
    out.primitive = RealCochain{z.degree - 1, std::vector<double>(b.data(), b.data() + b.size())};
  return out;
}

// --------------------------------------------------------------- Bockstein

BocksteinResult bockstein_dd(const RealCochain& a, const TwistedLocalSystem& sys) {
  const auto& coeff = sys.coefficients();
  if (coeff.kind() != CoeffKind::CircleRmodZ)
    throw Error(Errc::UnsupportedCoefficient, "Bockstein needs R/Z coefficients, got " + coeff.name());
  check_shape(a, sys.nerve());
  const auto reals = sys.with_coefficients(CoefficientGroup::reals(coeff.involution(), coeff.tolerance()));
  const auto ints = sys.with_coefficients(CoefficientGroup::integers(coeff.involution()));

  RealCochain lift{a.degree, {}};
  for (double v : a.values) lift.values.push_back(coeff.reduce(v));
  const RealCochain d = coboundary(lift, reals);

  IntCochain n{a.degree + 1, {}};
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    if (distance_to_integer(d.values[i]) > coeff.tolerance())
      throw Error(Errc::NotU1Cocycle, fmt::format("coboundary entry {} is {} modulo one", i, d.values[i]));
    n.values.push_back(static_cast<std::int64_t>(std::llround(d.values[i])));
  }
  if (n.degree < Nerve::kMaxDimension) {
    for (std::int64_t v : coboundary(n, ints).values)
      if (v != 0) throw Error(Errc::LiftNotIntegral, "rounded lift coboundary is not closed");
  }

  BocksteinResult out;
  CoboundaryResult cls = is_coboundary(n, ints);
  out.cocycle = std::move(n);
  out.trivial = cls.is_coboundary();
  out.order = cls.order;
  out.primitive = std::move(cls.primitive);
  out.certificate = std::move(cls.certificate);
  return out;
}

std::optional<RealCochain> u1_primitive(const RealCochain& a, const TwistedLocalSystem& sys) {
  const auto& coeff = sys.coefficients();
  if (a.degree < 1) throw Error(Errc::DegreeOverflow, "a degree 0 cochain has no primitive");
  BocksteinResult dd = bockstein_dd(a, sys);
  if (!dd.trivial) return std::nullopt;

  const auto ints = sys.with_coefficients(CoefficientGroup::integers(coeff.involution()));
  const auto reals = sys.with_coefficients(CoefficientGroup::reals(coeff.involution(), coeff.tolerance()));

  // r = lift - m is a real cocycle; it must be a real coboundary plus an
  // integral cocycle, and integral cocycles are spanned by the free
  // generators modulo real coboundaries.
  Eigen::VectorXd r(static_cast<Eigen::Index>(a.values.size()));
  for (std::size_t i = 0; i < a.values.size(); ++i)
    r[static_cast<Eigen::Index>(i)] =
        coeff.reduce(a.values[i]) - static_cast<double>(dd.primitive->values[i]);

  const Eigen::MatrixXd in = to_real(coboundary_matrix_or_empty(reals, a.degree - 1));
  const CohomologyDecomposition h(ints, a.degree);
  const auto& free = h.free_generators();
  Eigen::MatrixXd sys_matrix(in.rows(), in.cols() + static_cast<Eigen::Index>(free.size()));
  sys_matrix.leftCols(in.cols()) = in;
  for (std::size_t j = 0; j < free.size(); ++j)
    for (std::size_t i = 0; i < free[j].values.size(); ++i)
      sys_matrix(static_cast<Eigen::Index>(i), in.cols() + static_cast<Eigen::Index>(j)) =
          static_cast<double>(free[j].values[i]);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(sys_matrix.cols());
  if (sys_matrix.cols() > 0 && sys_matrix.rows() > 0) x = sys_matrix.completeOrthogonalDecomposition().solve(r);
  const double integrality = std::max(coeff.tolerance(), 1e-7);
  for (std::size_t j = 0; j < free.size(); ++j) {
    const double c = x[in.cols() + static_cast<Eigen::Index>(j)];
    if (distance_to_integer(c) > integrality) return std::nullopt;
  }
  Eigen::VectorXd rest = r;
  for (std::size_t j = 0; j < free.size(); ++j) {
    const double c = std::round(x[in.cols() + static_cast<Eigen::Index>(j)]);
    for (std::size_t i = 0; i < free[j].values.size(); ++i)
      rest[static_cast<Eigen::Index>(i)] -= c * static_cast<double>(free[j].values[i]);
  }
  Eigen::VectorXd b = Eigen::VectorXd::Zero(in.cols());
  if (in.cols() > 0 && in.rows() > 0) b = in.completeOrthogonalDecomposition().solve(rest);

  RealCochain phi{a.degree - 1, {}};
  for (Eigen::Index i = 0; i < b.size(); ++i) phi.values.push_back(coeff.reduce(b[i]));
  const RealCochain check = coboundary(phi, sys);
  const double tol = coeff.tolerance() * std::max(1.0, rest.norm());
  for (std::size_t i = 0; i < check.values.size(); ++i) {
    double diff = check.values[i] - a.values[i];
    if (distance_to_integer(diff) > tol) return std::nullopt;
  }
  return phi;
}

}  // namespace gerbelab
