#pragma once

// Small worked examples shared by the test suites, the acceptance runner and
// the CLI's verify command.

#include <random>
#include <utility>
#include <vector>

#include "gerbelab/cech.hpp"
#include "gerbelab/coeffs.hpp"
#include "gerbelab/lifting.hpp"
#include "gerbelab/nerve.hpp"

namespace gerbelab::examples {

/// Generator of H^1(RP2; Z/2) as a 0/1 edge cochain.
IntCochain rp2_generator();

std::vector<int> signs(const IntCochain& w);

/// Pulls an edge cochain on `base` back along a vertex map to `total`
/// (degenerate edges get 0).
template <class F>
IntCochain pull_back(const Nerve& total, const Nerve& base, const IntCochain& w, F vertex_map) {
  IntCochain out = zero_cochain(total, 1);
  auto edges = total.simplices(1);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    int a = vertex_map(edges[e][0]), b = vertex_map(edges[e][1]);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    out.values[e] = w.values[*base.index_of({a, b})];
  }
  return out;
}

/// Circle class on complexes::circle(): 1 on the edge (0,2).
IntCochain circle_generator();

CentralExtension z2_z4_z2();

CentralExtension z3_z9_z3();

/// Z/2 x Z/2 -> Z/2 onto the first factor with the homomorphic section x -> (x, 0).
CentralExtension split_z2();

/// Quaternion group; element 2u + s is (-1)^s times unit u in {1, i, j, k}.
FiniteGroup quaternions();

/// Q8 -> Z/2 x Z/2 (i -> (1,0), j -> (0,1)), kernel {1, -1}, sigma_hat =
/// conjugation by i.
CentralExtension q8_v4();

TransitionData transitions(const Nerve& n, const FiniteGroup& g, const Automorphism& sigma,
                           std::vector<int> values, std::vector<int> eps);

/// RP2 with G = Z/2 carrying the generator, no twist.
TransitionData rp2_z2();

/// The same kind of data on the boundary of the 3-simplex, where it is the
/// coboundary of vertex labels (0,1,0,1).
TransitionData sphere_z2();

/// V4 = Z/2 x Z/2 data on RP2 x S1 whose components pull back the
/// generators of both factors.
TransitionData rp2_circle_v4();

/// Gauge transform h_ij -> k_i h_ij k_j^{-1} of a cocycle by random vertex
/// elements of the semidirect product.
TransitionData gauge(const TransitionData& td, std::mt19937_64& rng);

}  // namespace gerbelab::examples
