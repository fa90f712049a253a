#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "gerbelab/error.hpp"
#include "gerbelab/nerve.hpp"
#include "oracles.hpp"

using namespace gerbelab;

namespace {

// Every edge in exactly two triangles and every vertex link a single cycle.
bool is_closed_surface(const Nerve& n) {
  std::map<Simplex, int> edge_uses;
  for (const Simplex& t : n.simplices(2)) {
    edge_uses[{t[0], t[1]}]++;
    edge_uses[{t[0], t[2]}]++;
    edge_uses[{t[1], t[2]}]++;
  }
  for (const Simplex& e : n.simplices(1))
    if (edge_uses[e] != 2) return false;
  for (int v = 0; v < n.vertex_count(); ++v) {
    std::map<int, std::vector<int>> link;
    for (const Simplex& t : n.simplices(2)) {
      std::vector<int> rest;
      for (int w : t)
        if (w != v) rest.push_back(w);
      if (rest.size() != 2) continue;
      link[rest[0]].push_back(rest[1]);
      link[rest[1]].push_back(rest[0]);
    }
    for (auto& [w, nb] : link)
      if (nb.size() != 2) return false;
    // walk the cycle
    int start = link.begin()->first, prev = -1, cur = start;
    std::size_t steps = 0;
    do {
      int next = link[cur][0] == prev ? link[cur][1] : link[cur][0];
      prev = cur;
      cur = next;
      ++steps;
    } while (cur != start && steps <= link.size());
    if (steps != link.size()) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("circle cover") {
  Nerve n = build_nerve(3, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(n.vertex_count() == 3);
  CHECK(n.count(1) == 3);
  CHECK(n.count(2) == 0);
  std::vector<Simplex> edges(n.simplices(1).begin(), n.simplices(1).end());
  CHECK(edges == std::vector<Simplex>{{0, 1}, {0, 2}, {1, 2}});
  CHECK(n == complexes::circle());
}

TEST_CASE("boundary of the 3-simplex") {
  Nerve n = build_nerve(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
  CHECK(n.count(0) == 4);
  CHECK(n.count(1) == 6);
  CHECK(n.count(2) == 4);
  CHECK(n.count(3) == 0);
  CHECK(n.dimension() == 2);
}

TEST_CASE("six-vertex projective plane") {
  Nerve n = complexes::rp2_six();
  CHECK(n.count(0) == 6);
  CHECK(n.count(1) == 15);
  CHECK(n.count(2) == 10);
  CHECK(n.euler_characteristic() == 1);
  CHECK(is_closed_surface(n));
}

TEST_CASE("RP2 x S1 is a closed 3-manifold triangulation") {
  Nerve n = complexes::rp2_times_circle();
  CHECK(n.vertex_count() == 18);
  CHECK(n.dimension() == 3);
  CHECK(n.count(3) == 90);
  CHECK(n.euler_characteristic() == 0);
  std::map<Simplex, int> uses;
  for (const Simplex& t : n.simplices(3))
    for (int r = 0; r < 4; ++r) {
      Simplex f = t;
      f.erase(f.begin() + r);
      uses[f]++;
    }
  for (const Simplex& f : n.simplices(2)) CHECK(uses[f] == 2);
}

TEST_CASE("sphere Euler characteristics") {
  for (int k = 0; k <= 3; ++k) CHECK(complexes::sphere(k).euler_characteristic() == 1 + (k % 2 == 0 ? 1 : -1));
  CHECK_THROWS_AS(complexes::sphere(4), Error);
}

TEST_CASE("input validation") {
  auto code = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::Parse;
  };
  CHECK(code([] { build_nerve(3, {{0, 0, 1}}); }) == Errc::DegenerateSimplex);
  CHECK(code([] { build_nerve(6, {{0, 1, 2, 3, 4, 5}}); }) == Errc::DimensionTooLarge);
  CHECK(code([] { build_nerve(3, {{0, 3}}); }) == Errc::VertexOutOfRange);
  CHECK(code([] { build_nerve(3, {{-1, 2}}); }) == Errc::VertexOutOfRange);
  CHECK(build_nerve(5, {{4, 0, 2, 1, 3}}).count(4) == 1);
}

TEST_CASE("face table matches deleted vertices") {
  Nerve n = complexes::sphere(3);
  for (int k = 1; k <= n.dimension(); ++k)
    for (std::size_t i = 0; i < n.count(k); ++i)
      for (int r = 0; r <= k; ++r) {
        Simplex f = n.simplices(k)[i];
        f.erase(f.begin() + r);
        CHECK(n.simplices(k - 1)[n.face_index(k, i, r)] == f);
      }
}

TEST_CASE("random complexes: closure, ordering, index stability") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int v = 3 + static_cast<int>(rng() % 5);
    auto maximal = oracle::random_maximal(rng, v, 4, 1 + static_cast<int>(rng() % 6));
    Nerve a = build_nerve(v, maximal);
    Nerve b = build_nerve(v, maximal);
    auto ref = oracle::closure(v, maximal);
    for (int k = 0; k <= 4; ++k) {
      auto s = a.simplices(k);
      std::vector<Simplex> got(s.begin(), s.end());
      CHECK(got == ref[static_cast<std::size_t>(k)]);
      CHECK(std::is_sorted(got.begin(), got.end()));
      std::vector<Simplex> again(b.simplices(k).begin(), b.simplices(k).end());
      CHECK(got == again);
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(a.index_of(got[i]) == i);
        for (int r = 0; r <= k && k > 0; ++r) {
          Simplex f = got[i];
          f.erase(f.begin() + r);
          CHECK(a.index_of(f).has_value());
        }
      }
    }
  }
}
