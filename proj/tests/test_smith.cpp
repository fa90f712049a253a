#include <doctest.h>

#include <random>

#include "gerbelab/smith.hpp"
#include "oracles.hpp"

using namespace gerbelab;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

oracle::Matrix to_oracle(const IntMatrix& m) {
  oracle::Matrix out(m.rows(), std::vector<std::int64_t>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j).convert_to<std::int64_t>();
  return out;
}

void check_form(const IntMatrix& a, const SmithForm& s) {
  IntMatrix d = s.u * a * s.v;
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j) {
      if (i == j && i < s.rank) {
        CHECK(d(i, j) == s.invariants[i]);
        CHECK(s.invariants[i] > 0);
        if (i > 0) CHECK(s.invariants[i] % s.invariants[i - 1] == 0);
      } else {
        CHECK(d(i, j) == 0);
      }
    }
  CHECK(s.u * s.u_inv == IntMatrix::identity(a.rows()));
  CHECK(s.v * s.v_inv == IntMatrix::identity(a.cols()));
}

}  // namespace

TEST_CASE("small known forms") {
  IntMatrix a(2, 2);
  a(0, 0) = 2;
  a(0, 1) = 4;
  a(1, 0) = 6;
  a(1, 1) = 8;
  SmithForm s = smith_normal_form(a);
  check_form(a, s);
  CHECK(s.invariants == std::vector<BigInt>{2, 4});

  IntMatrix z(3, 0);
  SmithForm e = smith_normal_form(z);
  CHECK(e.rank == 0);
  CHECK(e.u == IntMatrix::identity(3));
}

TEST_CASE("random matrices agree with the naive oracle") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const std::size_t r = 1 + rng() % 7, c = 1 + rng() % 7;
    IntMatrix a = random_matrix(rng, r, c, -3, 3);
    SmithForm s = smith_normal_form(a);
    check_form(a, s);
    auto ref = oracle::elementary_divisors(to_oracle(a));
    CHECK(static_cast<int>(s.rank) == ref.rank);
    std::vector<std::int64_t> got;
    for (auto& d : s.invariants)
      if (d > 1) got.push_back(d.convert_to<std::int64_t>());
    CHECK(got == ref.torsion);
    CHECK(smith_normal_form(a, false).invariants == s.invariants);
  }
}

TEST_CASE("wide entries fall back to arbitrary precision") {
  IntMatrix a(2, 2);
  const BigInt big = BigInt(1) << 62;
  a(0, 0) = big + 1;
  a(0, 1) = big;
  a(1, 0) = big;
  a(1, 1) = big - 1;
  SmithForm s = smith_normal_form(a);
  check_form(a, s);
  // determinant is (2^62)^2 - 1 - 2^124 = -1
  CHECK(s.invariants == std::vector<BigInt>{1, 1});

  std::mt19937_64 rng(5);
  IntMatrix m = random_matrix(rng, 6, 6, -1000000, 1000000);
  for (std::size_t i = 0; i < 6; ++i) m(i, i) *= BigInt(1) << 40;
  check_form(m, smith_normal_form(m));
}

TEST_CASE("integer kernel") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 50; ++t) {
    IntMatrix a = random_matrix(rng, 3, 6, -2, 2);
    IntMatrix k = integer_kernel(a);
    IntMatrix prod = a * k;
    for (std::size_t i = 0; i < prod.rows(); ++i)
      for (std::size_t j = 0; j < prod.cols(); ++j) CHECK(prod(i, j) == 0);
    CHECK(k.cols() + smith_normal_form(a, false).rank == 6);
  }
}

TEST_CASE("integer solve: solutions and certificates") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 100; ++t) {
    IntMatrix a = random_matrix(rng, 5, 4, -3, 3);
    std::vector<BigInt> x(4);
    for (auto& v : x) v = static_cast<int>(rng() % 7) - 3;
    auto b = a * x;
    auto sol = solve_integer(a, b);
    REQUIRE(sol.solution);
    CHECK(a * *sol.solution == b);

    std::vector<BigInt> junk(5);
    for (auto& v : junk) v = static_cast<int>(rng() % 9) - 4;
    auto s2 = solve_integer(a, junk);
    if (s2.solution) {
      CHECK(a * *s2.solution == junk);
    } else {
      const auto& cert = *s2.certificate;
      auto vanishes = [&](const BigInt& v) { return cert.modulus == 0 ? v == 0 : v % cert.modulus == 0; };
      std::vector<BigInt> wa = a.transpose() * cert.functional;
      for (auto& v : wa) CHECK(vanishes(v));
      BigInt pairing = 0;
      for (std::size_t i = 0; i < 5; ++i) pairing += cert.functional[i] * junk[i];
      CHECK_FALSE(vanishes(pairing));
    }
  }
}
