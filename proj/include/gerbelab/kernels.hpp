#pragma once

// Data-parallel inner loops. Every kernel has a serial reference and an
// OpenMP version with identical per-element arithmetic, so the two agree
// bit for bit; reductions are done in a fixed order on the calling thread.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gerbelab/nerve.hpp"

namespace gerbelab::kernels {

using Complex = std::complex<double>;
using MatrixC = Eigen::MatrixXcd;

/// Number of OpenMP threads available (1 without OpenMP).
int thread_count();

// ---------------------------------------------------------------- cochains

/// out[s] = lead[s] * in[face_0(s)] + sum_{r>=1} (-1)^r in[face_r(s)] over
/// all (k+1)-simplices s. No reduction is applied.
template <class T>
void coboundary_serial(const Nerve& nerve, int k, std::span<const int> lead, std::span<const T> in,
                       std::span<T> out) {
  const std::size_t n = nerve.count(k + 1);
  for (std::size_t s = 0; s < n; ++s) {
    T acc = static_cast<T>(lead[s]) * in[nerve.face_index(k + 1, s, 0)];
    for (int r = 1; r <= k + 1; ++r) {
      const T& v = in[nerve.face_index(k + 1, s, r)];
      acc = (r % 2 == 0) ? acc + v : acc - v;
    }
    out[s] = acc;
  }
}

template <class T>
void coboundary_omp(const Nerve& nerve, int k, std::span<const int> lead, std::span<const T> in,
                    std::span<T> out) {
  const auto n = static_cast<std::ptrdiff_t>(nerve.count(k + 1));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < n; ++s) {
    const auto su = static_cast<std::size_t>(s);
    T acc = static_cast<T>(lead[su]) * in[nerve.face_index(k + 1, su, 0)];
    for (int r = 1; r <= k + 1; ++r) {
      const T& v = in[nerve.face_index(k + 1, su, r)];
      acc = (r % 2 == 0) ? acc + v : acc - v;
    }
    out[su] = acc;
  }
}

// ----------------------------------------------------------- loop algebra

/// Truncated multiplication operator on modes -K..K-1 (ascending), each
/// mode an N-dimensional block: block (s, r) = X_{s-r}. `coeffs[m + M]`
/// holds X_m for |m| <= M.
void toeplitz_assemble_serial(std::span<const MatrixC> coeffs, int band, int truncation, MatrixC& out);
void toeplitz_assemble_omp(std::span<const MatrixC> coeffs, int band, int truncation, MatrixC& out);

/// sum_m m tr(X_{-m} Y_m) over the common band, summed in ascending m.
Complex residue_sum_serial(std::span<const MatrixC> x, int band_x, std::span<const MatrixC> y, int band_y);
/// Per-mode terms computed in parallel, then summed in ascending m.
Complex residue_sum_omp(std::span<const MatrixC> x, int band_x, std::span<const MatrixC> y, int band_y);

/// tr(A B) for conformable dense blocks.
Complex trace_of_product_serial(const MatrixC& a, const MatrixC& b);
/// Row partial sums in parallel, combined in ascending row order.
Complex trace_of_product_omp(const MatrixC& a, const MatrixC& b);

// ------------------------------------------------------------------ grids

/// Second-order derivative along one axis of a row-major nx-by-ny field of
/// matrices: centered inside, one-sided three-point stencils at the edges.
/// `valid` masks samples; a point whose stencil touches an invalid sample
/// falls back to a one-sided stencil, and is flagged in `ok` when neither
/// side is usable.
void grid_derivative_serial(std::span<const MatrixC> field, std::span<const unsigned char> valid, int nx, int ny,
                            int axis, double spacing, std::span<MatrixC> out, std::span<unsigned char> ok);
void grid_derivative_omp(std::span<const MatrixC> field, std::span<const unsigned char> valid, int nx, int ny,
                         int axis, double spacing, std::span<MatrixC> out, std::span<unsigned char> ok);

/// sum_p w[p] * tr(field[p]) in row-major order.
Complex weighted_trace_sum_serial(std::span<const MatrixC> field, std::span<const double> weight);
/// Row partials in parallel, combined in ascending row order.
Complex weighted_trace_sum_omp(std::span<const MatrixC> field, std::span<const double> weight, int nx, int ny);

}  // namespace gerbelab::kernels
