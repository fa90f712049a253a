#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace gerbelab {

/// Strictly increasing vertex tuple; the increasing order is the orientation.
using Simplex = std::vector<int>;

/// Nerve of a finite cover: an abstract ordered simplicial complex of
/// dimension at most four. Every vertex 0..vertex_count-1 is a 0-simplex.
///
/// Simplices of each degree are sorted lexicographically and the position of
/// a simplex in that list is its cochain coordinate. Instances are immutable.
class Nerve {
 public:
  static constexpr int kMaxDimension = 4;

  Nerve() = default;

  int vertex_count() const noexcept { return vertex_count_; }
  /// Largest k with a k-simplex, or -1 for the empty complex.
  int dimension() const noexcept;

  std::span<const Simplex> simplices(int k) const;
  std::size_t count(int k) const;
  std::optional<std::size_t> index_of(const Simplex& s) const;

  /// Index (in degree k-1) of the face of simplex #i of degree k obtained by
  /// deleting its r-th vertex.
  std::size_t face_index(int k, std::size_t i, int r) const { return faces_[k][i * (k + 1) + r]; }

  long euler_characteristic() const;

  friend bool operator==(const Nerve& a, const Nerve& b) {
    return a.vertex_count_ == b.vertex_count_ && a.simplices_ == b.simplices_;
  }

  friend Nerve build_nerve(int vertex_count, const std::vector<Simplex>& maximal);

 private:
  int vertex_count_ = 0;
  std::array<std::vector<Simplex>, kMaxDimension + 1> simplices_;
  std::array<std::map<Simplex, std::size_t>, kMaxDimension + 1> index_;
  std::array<std::vector<std::size_t>, kMaxDimension + 1> faces_;
};

/// Downward closure of the given simplices. Vertex order inside each input
/// tuple is irrelevant; repeated vertices or more than five vertices are
/// rejected.
Nerve build_nerve(int vertex_count, const std::vector<Simplex>& maximal);

/// Standard complexes used throughout the tests and the CLI.
namespace complexes {

/// Three vertices, three edges: the smallest circle.
Nerve circle();
/// Boundary of the (n+1)-simplex, a triangulated n-sphere (n <= 3).
Nerve sphere(int n);
/// Six-vertex, ten-triangle real projective plane.
Nerve rp2_six();
/// Ordered (staircase) product triangulation of two nerves; the result must
/// still have dimension <= 4. Vertex (a, b) is numbered a * |L| + b.
Nerve product(const Nerve& k, const Nerve& l);
/// rp2_six() x circle(), an 18-vertex triangulated 3-manifold.
Nerve rp2_times_circle();

}  // namespace complexes

}  // namespace gerbelab
