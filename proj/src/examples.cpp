#include "gerbelab/examples.hpp"

namespace gerbelab::examples {

IntCochain rp2_generator() {
  auto sys = TwistedLocalSystem::untwisted(complexes::rp2_six(), CoefficientGroup::integers_mod(2));
  return CohomologyDecomposition(sys, 1).torsion_generators().at(0);
}

std::vector<int> signs(const IntCochain& w) {
  std::vector<int> out;
  for (auto v : w.values) out.push_back(v % 2 == 0 ? 1 : -1);
  return out;
}

IntCochain circle_generator() { return IntCochain{1, {0, 1, 0}}; }

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

CentralExtension z3_z9_z3() {
  CentralExtension e;
  e.hat = FiniteGroup::cyclic(9);
  e.base = FiniteGroup::cyclic(3);
  for (int x = 0; x < 9; ++x) e.projection.push_back(x % 3);
  e.kernel = {0, 3, 6};
  e.section = {0, 1, 2};
  e.sigma_hat = Automorphism::inversion(e.hat);
  e.sigma = Automorphism::inversion(e.base);
  return e;
}

CentralExtension split_z2() {
  CentralExtension e;
  e.hat = FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2));
  e.base = FiniteGroup::cyclic(2);
  e.projection = {0, 0, 1, 1};
  e.kernel = {0, 1};
  e.section = {0, 2};
  e.sigma_hat = Automorphism::identity(e.hat);
  e.sigma = Automorphism::identity(e.base);
  return e;
}

FiniteGroup quaternions() {
  // unit products u*v = sign * w
  const int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  const int sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  std::vector<std::vector<int>> t(8, std::vector<int>(8));
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      const int u = a / 2, v = b / 2;
      t[a][b] = 2 * unit[u][v] + ((a % 2 + b % 2 + sign[u][v]) % 2);
    }
  return FiniteGroup::from_table(t);
}

CentralExtension q8_v4() {
  CentralExtension e;
  e.hat = quaternions();
  e.base = FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2));
  const int image[4] = {0, 2, 1, 3};  // units 1, i, j, k as a * 2 + b
  for (int x = 0; x < 8; ++x) e.projection.push_back(image[x / 2]);
  e.kernel = {0, 1};
  e.section = {0, 4, 2, 6};
  std::vector<int> conj(8);
  const int i = 2;
  for (int x = 0; x < 8; ++x) conj[x] = e.hat.mul(e.hat.mul(i, x), e.hat.inverse(i));
  e.sigma_hat = Automorphism::from_permutation(e.hat, conj);
  e.sigma = Automorphism::identity(e.base);
  return e;
}

TransitionData transitions(const Nerve& n, const FiniteGroup& g, const Automorphism& sigma,
                           std::vector<int> values, std::vector<int> eps) {
  return TransitionData{n, g, sigma, std::move(values), std::move(eps)};
}

TransitionData rp2_z2() {
  auto w = rp2_generator();
  std::vector<int> g(w.values.begin(), w.values.end());
  auto z2 = FiniteGroup::cyclic(2);
  return transitions(complexes::rp2_six(), z2, Automorphism::identity(z2), g, std::vector<int>(g.size(), 1));
}

TransitionData sphere_z2() {
  Nerve s2 = complexes::sphere(2);
  const int label[4] = {0, 1, 0, 1};
  std::vector<int> g;
  for (const Simplex& e : s2.simplices(1)) g.push_back((label[e[0]] + label[e[1]]) % 2);
  auto z2 = FiniteGroup::cyclic(2);
  return transitions(s2, z2, Automorphism::identity(z2), g, std::vector<int>(g.size(), 1));
}

TransitionData gauge(const TransitionData& td, std::mt19937_64& rng) {
  std::vector<SemidirectElement> k;
  for (int v = 0; v < td.nerve.vertex_count(); ++v)
    k.push_back({static_cast<int>(rng() % static_cast<unsigned>(td.group.order())), rng() % 2 ? 1 : -1});
  TransitionData out = td;
  auto edges = td.nerve.simplices(1);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const int i = edges[e][0], j = edges[e][1];
    auto h = semidirect_mul(td.group, td.sigma, k[static_cast<std::size_t>(i)], {td.g[e], td.eps[e]});
    h = semidirect_mul(td.group, td.sigma, h, semidirect_inverse(td.group, td.sigma, k[static_cast<std::size_t>(j)]));
    out.g[e] = h.g;
    out.eps[e] = h.eps;
  }
  return out;
}

TransitionData rp2_circle_v4() {
  Nerve total = complexes::rp2_times_circle();
  auto w1 = pull_back(total, complexes::rp2_six(), rp2_generator(), [](int v) { return v / 3; });
  auto w2 = pull_back(total, complexes::circle(), circle_generator(), [](int v) { return v % 3; });
  auto v4 = FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2));
  std::vector<int> g;
  for (std::size_t e = 0; e < w1.values.size(); ++e) g.push_back(static_cast<int>(w1.values[e] * 2 + w2.values[e]));
  return transitions(total, v4, Automorphism::identity(v4), g, std::vector<int>(g.size(), 1));
}

}  // namespace gerbelab::examples
