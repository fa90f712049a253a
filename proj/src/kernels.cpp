#include "gerbelab/kernels.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gerbelab::kernels {

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

// Fills the column block of input mode index c (mode r = c - K).
void assemble_column(std::span<const MatrixC> coeffs, int band, int truncation, int c, MatrixC& out) {
  const auto n = coeffs.empty() ? 0 : coeffs.front().rows();
  const int r = c - truncation;
  for (int s_idx = 0; s_idx < 2 * truncation; ++s_idx) {
    const int m = (s_idx - truncation) - r;
    if (m < -band || m > band) continue;
    out.block(s_idx * n, c * n, n, n) = coeffs[static_cast<std::size_t>(m + band)];
  }
}

Complex residue_term(std::span<const MatrixC> x, int band_x, std::span<const MatrixC> y, int band_y, int m) {
  // m tr(X_{-m} Y_m)
  const MatrixC& xm = x[static_cast<std::size_t>(-m + band_x)];
  const MatrixC& ym = y[static_cast<std::size_t>(m + band_y)];
  return static_cast<double>(m) * (xm.transpose().cwiseProduct(ym)).sum();
}

void derivative_at(std::span<const MatrixC> field, std::span<const unsigned char> valid, int nx, int ny, int axis,
                   double spacing, std::size_t p, std::span<MatrixC> out, std::span<unsigned char> ok) {
  const int i = static_cast<int>(p) / ny, j = static_cast<int>(p) % ny;
  const int t = axis == 0 ? i : j;
  const int len = axis == 0 ? nx : ny;
  const std::ptrdiff_t stride = axis == 0 ? ny : 1;
  const auto pp = static_cast<std::ptrdiff_t>(p);
  auto usable = [&](int offset) {
    int u = t + offset;
    return u >= 0 && u < len && valid[static_cast<std::size_t>(pp + offset * stride)];
  };
  auto at = [&](int offset) -> const MatrixC& { return field[static_cast<std::size_t>(pp + offset * stride)]; };

  if (!valid[p]) {
    out[p] = MatrixC::Zero(field[p].rows(), field[p].cols());
    ok[p] = 0;
    return;
  }
  if (usable(-1) && usable(1)) {
    out[p] = (at(1) - at(-1)) / (2.0 * spacing);
  } else if (usable(1) && usable(2)) {
    out[p] = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * spacing);
  } else if (usable(-1) && usable(-2)) {
    out[p] = (3.0 * at(0) - 4.0 * at(-1) + at(-2)) / (2.0 * spacing);
  } else {
    out[p] = MatrixC::Zero(field[p].rows(), field[p].cols());
    ok[p] = 0;
    return;
  }
  ok[p] = 1;
}

}  // namespace

void toeplitz_assemble_serial(std::span<const MatrixC> coeffs, int band, int truncation, MatrixC& out) {
  const auto n = coeffs.empty() ? 0 : coeffs.front().rows();
  out = MatrixC::Zero(2 * truncation * n, 2 * truncation * n);
  for (int c = 0; c < 2 * truncation; ++c) assemble_column(coeffs, band, truncation, c, out);
}

void toeplitz_assemble_omp(std::span<const MatrixC> coeffs, int band, int truncation, MatrixC& out) {
  const auto n = coeffs.empty() ? 0 : coeffs.front().rows();
  out = MatrixC::Zero(2 * truncation * n, 2 * truncation * n);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < 2 * truncation; ++c) assemble_column(coeffs, band, truncation, c, out);
}

Complex residue_sum_serial(std::span<const MatrixC> x, int band_x, std::span<const MatrixC> y, int band_y) {
  const int band = std::min(band_x, band_y);
  Complex total{0.0, 0.0};
  for (int m = -band; m <= band; ++m) total += residue_term(x, band_x, y, band_y, m);
  return total;
}

Complex residue_sum_omp(std::span<const MatrixC> x, int band_x, std::span<const MatrixC> y, int band_y) {
  const int band = std::min(band_x, band_y);
  std::vector<Complex> terms(static_cast<std::size_t>(2 * band + 1));
#pragma omp parallel for schedule(static)
  for (int m = -band; m <= band; ++m) terms[static_cast<std::size_t>(m + band)] = residue_term(x, band_x, y, band_y, m);
  Complex total{0.0, 0.0};
  for (const Complex& t : terms) total += t;
  return total;
}

Complex trace_of_product_serial(const MatrixC& a, const MatrixC& b) {
  Complex total{0.0, 0.0};
  for (Eigen::Index i = 0; i < a.rows(); ++i) total += a.row(i).transpose().cwiseProduct(b.col(i)).sum();
  return total;
}

Complex trace_of_product_omp(const MatrixC& a, const MatrixC& b) {
  std::vector<Complex> rows(static_cast<std::size_t>(a.rows()));
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    rows[static_cast<std::size_t>(i)] = a.row(i).transpose().cwiseProduct(b.col(i)).sum();
  Complex total{0.0, 0.0};
  for (const Complex& r : rows) total += r;
  return total;
}

void grid_derivative_serial(std::span<const MatrixC> field, std::span<const unsigned char> valid, int nx, int ny,
                            int axis, double spacing, std::span<MatrixC> out, std::span<unsigned char> ok) {
  for (std::size_t p = 0; p < field.size(); ++p) derivative_at(field, valid, nx, ny, axis, spacing, p, out, ok);
}

void grid_derivative_omp(std::span<const MatrixC> field, std::span<const unsigned char> valid, int nx, int ny,
                         int axis, double spacing, std::span<MatrixC> out, std::span<unsigned char> ok) {
  const auto total = static_cast<std::ptrdiff_t>(field.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < total; ++p)
    derivative_at(field, valid, nx, ny, axis, spacing, static_cast<std::size_t>(p), out, ok);
}

Complex weighted_trace_sum_serial(std::span<const MatrixC> field, std::span<const double> weight) {
  Complex total{0.0, 0.0};
  for (std::size_t p = 0; p < field.size(); ++p)
    if (weight[p] != 0.0) total += weight[p] * field[p].trace();
  return total;
}

Complex weighted_trace_sum_omp(std::span<const MatrixC> field, std::span<const double> weight, int nx, int ny) {
  std::vector<Complex> rows(static_cast<std::size_t>(nx));
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nx; ++i) {
    Complex acc{0.0, 0.0};
    for (int j = 0; j < ny; ++j) {
      const auto p = static_cast<std::size_t>(i) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(j);
      if (weight[p] != 0.0) acc += weight[p] * field[p].trace();
    }
    rows[static_cast<std::size_t>(i)] = acc;
  }
  Complex total{0.0, 0.0};
  for (const Complex& r : rows) total += r;
  return total;
}

}  // namespace gerbelab::kernels
