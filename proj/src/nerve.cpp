#include "gerbelab/nerve.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <string>

#include "gerbelab/error.hpp"

namespace gerbelab {

namespace {

std::string describe(const Simplex& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + ")";
}

}  // namespace

int Nerve::dimension() const noexcept {
  for (int k = kMaxDimension; k >= 0; --k)
    if (!simplices_[k].empty()) return k;
  return -1;
}

std::span<const Simplex> Nerve::simplices(int k) const {
  if (k < 0 || k > kMaxDimension) return {};
  return simplices_[k];
}

std::size_t Nerve::count(int k) const { return simplices(k).size(); }

std::optional<std::size_t> Nerve::index_of(const Simplex& s) const {
  int k = static_cast<int>(s.size()) - 1;
  if (k < 0 || k > kMaxDimension) return std::nullopt;
  auto it = index_[k].find(s);
  if (it == index_[k].end()) return std::nullopt;
  return it->second;
}

long Nerve::euler_characteristic() const {
  long chi = 0;
  for (int k = 0; k <= kMaxDimension; ++k) chi += (k % 2 == 0 ? 1L : -1L) * static_cast<long>(count(k));
  return chi;
}

Nerve build_nerve(int vertex_count, const std::vector<Simplex>& maximal) {
  if (vertex_count <= 0) throw Error(Errc::VertexOutOfRange, "vertex count must be positive");

  std::array<std::set<Simplex>, Nerve::kMaxDimension + 1> closure;
  for (int v = 0; v < vertex_count; ++v) closure[0].insert({v});

  for (Simplex s : maximal) {
    if (s.empty()) continue;
    for (int v : s)
      if (v < 0 || v >= vertex_count)
        throw Error(Errc::VertexOutOfRange, "vertex " + std::to_string(v) + " in " + describe(s));
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw Error(Errc::DegenerateSimplex, "repeated vertex in " + describe(s));
    if (static_cast<int>(s.size()) > Nerve::kMaxDimension + 1)
      throw Error(Errc::DimensionTooLarge, describe(s) + " has dimension " + std::to_string(s.size() - 1));

    // all nonempty subsets via bitmasks; at most 31 of them
    const unsigned n = static_cast<unsigned>(s.size());
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      Simplex face;
      for (unsigned b = 0; b < n; ++b)
        if (mask & (1u << b)) face.push_back(s[b]);
      closure[face.size() - 1].insert(std::move(face));
    }
  }

  Nerve nerve;
  nerve.vertex_count_ = vertex_count;
  for (int k = 0; k <= Nerve::kMaxDimension; ++k) {
    nerve.simplices_[k].assign(closure[k].begin(), closure[k].end());
    for (std::size_t i = 0; i < nerve.simplices_[k].size(); ++i) nerve.index_[k][nerve.simplices_[k][i]] = i;
  }
  for (int k = 1; k <= Nerve::kMaxDimension; ++k) {
    auto& table = nerve.faces_[k];
    table.reserve(nerve.simplices_[k].size() * (k + 1));
    for (const Simplex& s : nerve.simplices_[k]) {
      for (int r = 0; r <= k; ++r) {
        Simplex face;
        face.reserve(k);
        for (int j = 0; j <= k; ++j)
          if (j != r) face.push_back(s[j]);
        table.push_back(nerve.index_[k - 1].at(face));
      }
    }
  }
  return nerve;
}

namespace complexes {

Nerve circle() { return build_nerve(3, {{0, 1}, {1, 2}, {0, 2}}); }

Nerve sphere(int n) {
  if (n < 0 || n > 3) throw Error(Errc::DimensionTooLarge, "sphere dimension must lie in 0..3");
  const int vertices = n + 2;
  std::vector<Simplex> facets;
  for (int omit = 0; omit < vertices; ++omit) {
    Simplex f;
    for (int v = 0; v < vertices; ++v)
      if (v != omit) f.push_back(v);
    facets.push_back(std::move(f));
  }
  return build_nerve(vertices, facets);
}

Nerve rp2_six() {
  // hemi-icosahedron: cone over the pentagon 1..5 plus the five chord triangles
  return build_nerve(6, {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 1, 5},
                         {1, 2, 4}, {2, 3, 5}, {1, 3, 4}, {2, 4, 5}, {1, 3, 5}});
}

Nerve product(const Nerve& k, const Nerve& l) {
  const int width = l.vertex_count();
  std::vector<Simplex> cells;
  for (int p = 0; p <= k.dimension(); ++p) {
    for (int q = 0; q <= l.dimension(); ++q) {
      if (p + q > Nerve::kMaxDimension) continue;
      for (const Simplex& a : k.simplices(p)) {
        for (const Simplex& b : l.simplices(q)) {
          // monotone lattice paths from (0,0) to (p,q): choose which steps move in a
          const int steps = p + q;
          for (unsigned mask = 0; mask < (1u << steps); ++mask) {
            if (std::popcount(mask) != p) continue;
            Simplex cell;
            int i = 0, j = 0;
            cell.push_back(a[i] * width + b[j]);
            for (int s = 0; s < steps; ++s) {
              if (mask & (1u << s)) ++i;
              else ++j;
              cell.push_back(a[i] * width + b[j]);
            }
            cells.push_back(std::move(cell));
          }
        }
      }
    }
  }
  return build_nerve(k.vertex_count() * width, cells);
}

Nerve rp2_times_circle() { return product(rp2_six(), circle()); }

}  // namespace complexes

}  // namespace gerbelab
