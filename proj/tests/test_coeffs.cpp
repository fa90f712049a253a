#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "gerbelab/coeffs.hpp"
#include "gerbelab/error.hpp"

using namespace gerbelab;

namespace {

// S3 as permutations of {0,1,2}, composed right to left.
FiniteGroup symmetric_three() {
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::vector<std::vector<int>> table(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      std::array<int, 3> c{};
      for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
      table[a][b] = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  return FiniteGroup::from_table(table);
}

bool isomorphic(const FiniteGroup& g, const FiniteGroup& h) {
  if (g.order() != h.order()) return false;
  std::vector<int> f(g.order());
  std::iota(f.begin(), f.end(), 0);
  do {
    bool ok = true;
    for (int a = 0; a < g.order() && ok; ++a)
      for (int b = 0; b < g.order() && ok; ++b) ok = f[g.mul(a, b)] == h.mul(f[a], f[b]);
    if (ok) return true;
  } while (std::next_permutation(f.begin(), f.end()));
  return false;
}

CentralExtension z2_z4_z2() {
  CentralExtension e;
  e.hat = FiniteGroup::cyclic(4);
  e.base = FiniteGroup::cyclic(2);
  e.projection = {0, 1, 0, 1};
  e.kernel = {0, 2};
  e.section = {0, 1};
  e.sigma_hat = Automorphism::identity(e.hat);
  e.sigma = Automorphism::identity(e.base);
  return e;
}

CentralExtension z3_z9_z3(bool negate_hat) {
  CentralExtension e;
  e.hat = FiniteGroup::cyclic(9);
  e.base = FiniteGroup::cyclic(3);
  for (int x = 0; x < 9; ++x) e.projection.push_back(x % 3);
  e.kernel = {0, 3, 6};
  e.section = {0, 1, 2};
  e.sigma_hat = negate_hat ? Automorphism::inversion(e.hat) : Automorphism::identity(e.hat);
  e.sigma = Automorphism::inversion(e.base);
  return e;
}

}  // namespace

TEST_CASE("coefficient groups") {
  auto z2 = CoefficientGroup::integers_mod(2, Involution::Negation);
  CHECK_FALSE(z2.twist_acts());
  CHECK(z2.act(-1, std::int64_t{1}) == 1);
  auto z3 = CoefficientGroup::integers_mod(3, Involution::Negation);
  CHECK(z3.twist_acts());
  CHECK(z3.act(-1, std::int64_t{1}) == 2);
  CHECK(z3.reduce(std::int64_t{-4}) == 2);
  auto u1 = CoefficientGroup::circle(Involution::Negation);
  CHECK(u1.reduce(-0.25) == doctest::Approx(0.75));
  CHECK(u1.equal(0.9999999999, 0.0));
  CHECK(u1.act(-1, 0.25) == doctest::Approx(0.75));
  CHECK(CoefficientGroup::integers().tolerance() == 0.0);
  CHECK(z3.name() == "Z/3(-)");
  CHECK_THROWS_AS(CoefficientGroup::integers_mod(1), Error);
}

TEST_CASE("group tables are validated") {
  CHECK_THROWS_AS(FiniteGroup::from_table({{0, 1}, {0, 1}}), Error);
  CHECK_THROWS_AS(FiniteGroup::from_table({{0, 1}, {1, 1}}), Error);
  CHECK_THROWS_AS(FiniteGroup::from_table({}), Error);
  FiniteGroup s3 = symmetric_three();
  CHECK_FALSE(s3.is_abelian());
  CHECK(FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(3)).is_abelian());
  CHECK_THROWS_AS(Automorphism::inversion(s3), Error);
  CHECK_THROWS_AS(Automorphism::from_permutation(FiniteGroup::cyclic(3), {0, 0, 1}), Error);
}

TEST_CASE("semidirect product examples") {
  FiniteGroup z3 = FiniteGroup::cyclic(3);
  Automorphism neg = Automorphism::inversion(z3);
  CHECK(semidirect_mul(z3, neg, {1, -1}, {1, -1}) == SemidirectElement{0, 1});

  // trivial sigma recovers the direct product
  Automorphism id = Automorphism::identity(z3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) CHECK(semidirect_mul(z3, id, {a, 1}, {b, 1}) == SemidirectElement{(a + b) % 3, 1});

  // Z3 x| Z2 with negation is S3
  FiniteGroup h = semidirect_product(z3, neg);
  CHECK(isomorphic(h, symmetric_three()));
  CHECK_FALSE(isomorphic(semidirect_product(z3, id), symmetric_three()));
}

TEST_CASE("semidirect products are groups") {
  std::vector<std::pair<FiniteGroup, Automorphism>> cases;
  for (int n = 1; n <= 12; ++n) {
    auto g = FiniteGroup::cyclic(n);
    cases.emplace_back(g, Automorphism::inversion(g));
    cases.emplace_back(g, Automorphism::identity(g));
  }
  auto v4 = FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2));
  cases.emplace_back(v4, Automorphism::from_permutation(v4, {0, 2, 1, 3}));

  for (auto& [g, s] : cases) {
    const int n = g.order();
    std::vector<SemidirectElement> all;
    for (int x = 0; x < n; ++x)
      for (int e : {1, -1}) all.push_back({x, e});
    const SemidirectElement one{g.identity(), 1};
    for (auto x : all) {
      CHECK(semidirect_mul(g, s, one, x) == x);
      CHECK(semidirect_mul(g, s, x, one) == x);
      CHECK(semidirect_mul(g, s, x, semidirect_inverse(g, s, x)) == one);
      CHECK(semidirect_mul(g, s, semidirect_inverse(g, s, x), x) == one);
      for (auto y : all)
        for (auto z : all)
          CHECK(semidirect_mul(g, s, semidirect_mul(g, s, x, y), z) ==
                semidirect_mul(g, s, x, semidirect_mul(g, s, y, z)));
    }
  }
}

TEST_CASE("semidirect associativity on a larger group, randomized") {
  auto g = FiniteGroup::direct_product(FiniteGroup::cyclic(5), FiniteGroup::cyclic(7));
  Automorphism s = Automorphism::inversion(g);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> el(0, g.order() - 1);
  for (int t = 0; t < 2000; ++t) {
    SemidirectElement x{el(rng), rng() % 2 ? 1 : -1}, y{el(rng), rng() % 2 ? 1 : -1}, z{el(rng), rng() % 2 ? 1 : -1};
    CHECK(semidirect_mul(g, s, semidirect_mul(g, s, x, y), z) == semidirect_mul(g, s, x, semidirect_mul(g, s, y, z)));
  }
}

TEST_CASE("extension verification") {
  CHECK(verify_extension(z2_z4_z2()).ok());
  CHECK(verify_extension(z3_z9_z3(true)).ok());
  auto bad = verify_extension(z3_z9_z3(false));
  CHECK(bad.defect == ExtensionDefect::NotEquivariant);
  CHECK(bad.detail.find("sigma_hat(1)") != std::string::npos);

  auto e = z2_z4_z2();
  e.section = {0, 2};
  CHECK(verify_extension(e).defect == ExtensionDefect::BadSection);
  e = z2_z4_z2();
  e.projection = {0, 1, 1, 0};
  CHECK(verify_extension(e).defect == ExtensionDefect::NotHomomorphism);
  e = z2_z4_z2();
  e.kernel = {0};
  CHECK(verify_extension(e).defect == ExtensionDefect::KernelMismatch);
}

TEST_CASE("non-central kernel is rejected") {
  // S3 -> Z2 (sign); kernel A3 is normal but not central
  FiniteGroup s3 = symmetric_three();
  CentralExtension e;
  e.hat = s3;
  e.base = FiniteGroup::cyclic(2);
  // permutations in lexicographic order: parities 0,1,1,0,0,1
  e.projection = {0, 1, 1, 0, 0, 1};
  e.kernel = {0, 3, 4};
  if (s3.mul(3, 3) != 4) e.kernel = {0, 4, 3};
  e.section = {0, 1};
  e.sigma_hat = Automorphism::identity(s3);
  e.sigma = Automorphism::identity(e.base);
  CHECK(verify_extension(e).defect == ExtensionDefect::NotCentral);
}

TEST_CASE("kernel coordinates and the section defect") {
  auto e = z3_z9_z3(true);
  auto coeff = e.kernel_coefficients();
  CHECK(coeff.modulus() == 3);
  CHECK(coeff.involution() == Involution::Negation);
  CHECK(e.kernel_coordinate(6) == 2);
  CHECK_FALSE(e.kernel_coordinate(1).has_value());
  CHECK(e.kernel_element(-1) == 6);

  for (auto ext : {z2_z4_z2(), z3_z9_z3(true)}) {
    for (int x = 0; x < ext.base.order(); ++x)
      for (int y = 0; y < ext.base.order(); ++y) {
        int d = section_defect(ext, x, y);
        CHECK(ext.kernel_coordinate(d).has_value());
        for (int h = 0; h < ext.hat.order(); ++h) CHECK(ext.hat.mul(d, h) == ext.hat.mul(h, d));
      }
  }
  CHECK(section_defect(z2_z4_z2(), 1, 1) == 2);
}
