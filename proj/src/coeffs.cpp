#include "gerbelab/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gerbelab/error.hpp"

namespace gerbelab {

CoefficientGroup CoefficientGroup::integers(Involution inv) {
  CoefficientGroup c;
  c.kind_ = CoeffKind::Integers;
  c.involution_ = inv;
  return c;
}

CoefficientGroup CoefficientGroup::integers_mod(std::int64_t n, Involution inv) {
  if (n < 2) throw Error(Errc::UnsupportedCoefficient, "modulus must be at least 2");
  CoefficientGroup c;
  c.kind_ = CoeffKind::IntegersMod;
  c.modulus_ = n;
  c.involution_ = inv;
  return c;
}

CoefficientGroup CoefficientGroup::reals(Involution inv, double tolerance) {
  CoefficientGroup c;
  c.kind_ = CoeffKind::Reals;
  c.involution_ = inv;
  c.tolerance_ = tolerance;
  return c;
}

CoefficientGroup CoefficientGroup::circle(Involution inv, double tolerance) {
  CoefficientGroup c;
  c.kind_ = CoeffKind::CircleRmodZ;
  c.involution_ = inv;
  c.tolerance_ = tolerance;
  return c;
}

std::int64_t CoefficientGroup::reduce(std::int64_t v) const {
  if (kind_ != CoeffKind::IntegersMod) return v;
  std::int64_t r = v % modulus_;
  return r < 0 ? r + modulus_ : r;
}

double CoefficientGroup::reduce(double v) const {
  if (kind_ != CoeffKind::CircleRmodZ) return v;
  double r = v - std::floor(v);
  return r >= 1.0 ? 0.0 : r;
}

bool CoefficientGroup::equal(double a, double b) const {
  double d = a - b;
  if (kind_ == CoeffKind::CircleRmodZ) d -= std::round(d);
  return std::abs(d) <= tolerance_;
}

std::string CoefficientGroup::name() const {
  std::string base;
  switch (kind_) {
    case CoeffKind::Integers: base = "Z"; break;
    case CoeffKind::IntegersMod: base = "Z/" + std::to_string(modulus_); break;
    case CoeffKind::Reals: base = "R"; break;
    case CoeffKind::CircleRmodZ: base = "R/Z"; break;
  }
  return involution_ == Involution::Negation ? base + "(-)" : base;
}

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<int>> table) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw Error(Errc::InvalidGroup, "empty table");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) throw Error(Errc::InvalidGroup, "table is not square");
    for (int v : row)
      if (v < 0 || v >= n) throw Error(Errc::InvalidGroup, "table entry out of range");
  }
  int identity = -1;
  for (int e = 0; e < n && identity < 0; ++e) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x) ok = table[e][x] == x && table[x][e] == x;
    if (ok) identity = e;
  }
  if (identity < 0) throw Error(Errc::InvalidGroup, "no identity element");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw Error(Errc::InvalidGroup, "not associative at (" + std::to_string(a) + "," + std::to_string(b) +
                                              "," + std::to_string(c) + ")");
  std::vector<int> inverse(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      if (table[a][b] == identity && table[b][a] == identity) inverse[a] = b;
    if (inverse[a] < 0) throw Error(Errc::InvalidGroup, "element " + std::to_string(a) + " has no inverse");
  }
  FiniteGroup g;
  g.table_ = std::move(table);
  g.inverse_ = std::move(inverse);
  g.identity_ = identity;
  return g;
}

FiniteGroup FiniteGroup::cyclic(int n) {
  if (n < 1) throw Error(Errc::InvalidGroup, "cyclic order must be positive");
  FiniteGroup g;
  g.table_.assign(n, std::vector<int>(n));
  g.inverse_.resize(n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) g.table_[a][b] = (a + b) % n;
    g.inverse_[a] = (n - a) % n;
  }
  return g;
}

FiniteGroup FiniteGroup::direct_product(const FiniteGroup& lhs, const FiniteGroup& rhs) {
  const int m = rhs.order();
  const int n = lhs.order() * m;
  FiniteGroup g;
  g.table_.assign(n, std::vector<int>(n));
  g.inverse_.resize(n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) g.table_[x][y] = lhs.mul(x / m, y / m) * m + rhs.mul(x % m, y % m);
    g.inverse_[x] = lhs.inverse(x / m) * m + rhs.inverse(x % m);
  }
  g.identity_ = lhs.identity() * m + rhs.identity();
  return g;
}

bool FiniteGroup::is_abelian() const {
  for (int a = 0; a < order(); ++a)
    for (int b = a + 1; b < order(); ++b)
      if (table_[a][b] != table_[b][a]) return false;
  return true;
}

Automorphism Automorphism::identity(const FiniteGroup& g) {
  Automorphism a;
  a.perm_.resize(g.order());
  std::iota(a.perm_.begin(), a.perm_.end(), 0);
  return a;
}

Automorphism Automorphism::inversion(const FiniteGroup& g) {
  std::vector<int> perm(g.order());
  for (int x = 0; x < g.order(); ++x) perm[x] = g.inverse(x);
  return from_permutation(g, std::move(perm));
}

Automorphism Automorphism::from_permutation(const FiniteGroup& g, std::vector<int> perm) {
  const int n = g.order();
  if (static_cast<int>(perm.size()) != n) throw Error(Errc::InvalidGroup, "automorphism has wrong length");
  std::vector<bool> seen(n, false);
  for (int v : perm) {
    if (v < 0 || v >= n || seen[v]) throw Error(Errc::InvalidGroup, "automorphism is not a bijection");
    seen[v] = true;
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (perm[g.mul(a, b)] != g.mul(perm[a], perm[b]))
        throw Error(Errc::InvalidGroup, "map is not multiplicative at (" + std::to_string(a) + "," +
                                            std::to_string(b) + ")");
  Automorphism out;
  out.perm_ = std::move(perm);
  return out;
}

bool Automorphism::is_involution() const {
  for (std::size_t x = 0; x < perm_.size(); ++x)
    if (perm_[perm_[x]] != static_cast<int>(x)) return false;
  return true;
}

bool Automorphism::is_identity() const {
  for (std::size_t x = 0; x < perm_.size(); ++x)
    if (perm_[x] != static_cast<int>(x)) return false;
  return true;
}

SemidirectElement semidirect_mul(const FiniteGroup& group, const Automorphism& sigma, SemidirectElement x,
                                 SemidirectElement y) {
  return {group.mul(x.g, sigma.power(x.eps, y.g)), x.eps * y.eps};
}

SemidirectElement semidirect_inverse(const FiniteGroup& group, const Automorphism& sigma, SemidirectElement x) {
  return {sigma.power(x.eps, group.inverse(x.g)), x.eps};
}

FiniteGroup semidirect_product(const FiniteGroup& group, const Automorphism& sigma) {
  const int n = group.order();
  auto encode = [n](SemidirectElement e) { return e.g + (e.eps < 0 ? n : 0); };
  auto decode = [n](int v) { return SemidirectElement{v % n, v < n ? 1 : -1}; };
  std::vector<std::vector<int>> table(2 * n, std::vector<int>(2 * n));
  for (int a = 0; a < 2 * n; ++a)
    for (int b = 0; b < 2 * n; ++b) table[a][b] = encode(semidirect_mul(group, sigma, decode(a), decode(b)));
  return FiniteGroup::from_table(std::move(table));
}

CoefficientGroup CentralExtension::kernel_coefficients() const {
  const auto n = static_cast<std::int64_t>(kernel.size());
  bool negates = n > 2 && sigma_hat(kernel[1]) != kernel[1];
  Involution inv = negates ? Involution::Negation : Involution::Identity;
  if (n < 2) return CoefficientGroup::integers_mod(2, inv);  // trivial kernel never produces a nonzero entry
  return CoefficientGroup::integers_mod(n, inv);
}

std::optional<std::int64_t> CentralExtension::kernel_coordinate(int hat_element) const {
  auto it = std::find(kernel.begin(), kernel.end(), hat_element);
  if (it == kernel.end()) return std::nullopt;
  return static_cast<std::int64_t>(it - kernel.begin());
}

int CentralExtension::kernel_element(std::int64_t coordinate) const {
  const auto n = static_cast<std::int64_t>(kernel.size());
  std::int64_t r = coordinate % n;
  if (r < 0) r += n;
  return kernel[static_cast<std::size_t>(r)];
}

std::string to_string(ExtensionDefect d) {
  switch (d) {
    case ExtensionDefect::None: return "None";
    case ExtensionDefect::NotHomomorphism: return "NotHomomorphism";
    case ExtensionDefect::KernelMismatch: return "KernelMismatch";
    case ExtensionDefect::NotCentral: return "NotCentral";
    case ExtensionDefect::BadSection: return "BadSection";
    case ExtensionDefect::NotEquivariant: return "NotEquivariant";
  }
  return "Unknown";
}

ExtensionReport verify_extension(const CentralExtension& ext) {
  const FiniteGroup& hat = ext.hat;
  const FiniteGroup& base = ext.base;
  const int n = hat.order();
  auto fail = [](ExtensionDefect d, std::string detail) { return ExtensionReport{d, std::move(detail)}; };

  if (static_cast<int>(ext.projection.size()) != n)
    return fail(ExtensionDefect::NotHomomorphism, "projection has wrong length");
  for (int v : ext.projection)
    if (v < 0 || v >= base.order()) return fail(ExtensionDefect::NotHomomorphism, "projection value out of range");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (ext.projection[hat.mul(a, b)] != base.mul(ext.projection[a], ext.projection[b]))
        return fail(ExtensionDefect::NotHomomorphism,
                    "q(" + std::to_string(a) + "*" + std::to_string(b) + ") != q(a) q(b)");
  {
    std::vector<bool> hit(base.order(), false);
    for (int v : ext.projection) hit[v] = true;
    for (int x = 0; x < base.order(); ++x)
      if (!hit[x]) return fail(ExtensionDefect::NotHomomorphism, "q misses " + std::to_string(x));
  }

  std::vector<int> expected;
  for (int a = 0; a < n; ++a)
    if (ext.projection[a] == base.identity()) expected.push_back(a);
  std::vector<int> listed = ext.kernel;
  std::sort(listed.begin(), listed.end());
  if (listed != expected) return fail(ExtensionDefect::KernelMismatch, "kernel list differs from q^{-1}(e)");
  if (ext.kernel.empty() || ext.kernel[0] != hat.identity())
    return fail(ExtensionDefect::KernelMismatch, "kernel[0] must be the identity");
  for (std::size_t i = 1; i < ext.kernel.size(); ++i)
    if (ext.kernel[i] != hat.mul(ext.kernel[i - 1], ext.kernel[1]))
      return fail(ExtensionDefect::KernelMismatch, "kernel[i] must be the i-th power of kernel[1]");

  for (int k : ext.kernel)
    for (int h = 0; h < n; ++h)
      if (hat.mul(k, h) != hat.mul(h, k))
        return fail(ExtensionDefect::NotCentral,
                    "kernel element " + std::to_string(k) + " does not commute with " + std::to_string(h));

  if (static_cast<int>(ext.section.size()) != base.order())
    return fail(ExtensionDefect::BadSection, "section has wrong length");
  for (int x = 0; x < base.order(); ++x) {
    int s = ext.section[x];
    if (s < 0 || s >= n || ext.projection[s] != x)
      return fail(ExtensionDefect::BadSection, "q(s(" + std::to_string(x) + ")) != " + std::to_string(x));
  }

  if (static_cast<int>(ext.sigma_hat.permutation().size()) != n ||
      static_cast<int>(ext.sigma.permutation().size()) != base.order())
    return fail(ExtensionDefect::NotEquivariant, "involutions have wrong size");
  if (!ext.sigma_hat.is_involution() || !ext.sigma.is_involution())
    return fail(ExtensionDefect::NotEquivariant, "sigma and sigma_hat must square to the identity");
  for (int h = 0; h < n; ++h)
    if (ext.projection[ext.sigma_hat(h)] != ext.sigma(ext.projection[h]))
      return fail(ExtensionDefect::NotEquivariant,
                  "q(sigma_hat(" + std::to_string(h) + ")) != sigma(q(" + std::to_string(h) + "))");

  // sigma_hat restricted to the cyclic kernel must act by +-1 for the local system to make sense
  if (ext.kernel.size() > 1) {
    int g = ext.kernel[1];
    int image = ext.sigma_hat(g);
    if (image != g && image != hat.inverse(g))
      return fail(ExtensionDefect::KernelMismatch, "sigma_hat acts on the kernel by neither identity nor negation");
  }
  return {};
}

int section_defect(const CentralExtension& ext, int x, int y) {
  const auto& hat = ext.hat;
  return hat.mul(hat.mul(ext.section[x], ext.section[y]), hat.inverse(ext.section[ext.base.mul(x, y)]));
}

}  // namespace gerbelab
