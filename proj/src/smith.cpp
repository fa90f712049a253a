#include "gerbelab/smith.hpp"

#include <cstdint>
#include <limits>
#include <utility>

namespace gerbelab {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

std::vector<BigInt> IntMatrix::column(std::size_t c) const {
  std::vector<BigInt> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

std::vector<BigInt> IntMatrix::row(std::size_t r) const {
  return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
          data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
}

IntMatrix IntMatrix::columns(std::size_t first, std::size_t count) const {
  IntMatrix out(rows_, count);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < count; ++c) out(r, c) = (*this)(r, first + c);
  return out;
}

IntMatrix IntMatrix::rows_range(std::size_t first, std::size_t count) const {
  IntMatrix out(count, cols_);
  for (std::size_t r = 0; r < count; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(r, c) = (*this)(first + r, c);
  return out;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const BigInt& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

std::vector<BigInt> operator*(const IntMatrix& a, const std::vector<BigInt>& x) {
  std::vector<BigInt> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (a(i, k) != 0) out[i] += a(i, k) * x[k];
  return out;
}

std::string to_string(const BigInt& v) { return v.str(); }

namespace {

struct Overflow {};

// Arithmetic used by the elimination; the int64 overloads trap overflow so
// the caller can restart in arbitrary precision.
inline std::int64_t sub_mul(std::int64_t a, std::int64_t q, std::int64_t b) {
  std::int64_t p, r;
  if (__builtin_mul_overflow(q, b, &p) || __builtin_sub_overflow(a, p, &r)) throw Overflow{};
  return r;
}
inline std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow{};
  return r;
}
inline std::int64_t negate(std::int64_t a) {
  if (a == std::numeric_limits<std::int64_t>::min()) throw Overflow{};
  return -a;
}
inline std::int64_t magnitude(std::int64_t a) { return a < 0 ? negate(a) : a; }

inline BigInt sub_mul(const BigInt& a, const BigInt& q, const BigInt& b) { return a - q * b; }
inline BigInt add(const BigInt& a, const BigInt& b) { return a + b; }
inline BigInt negate(const BigInt& a) { return -a; }
inline BigInt magnitude(const BigInt& a) { return abs(a); }

template <class T>
struct Dense {
  std::size_t rows = 0, cols = 0;
  std::vector<T> data;
  Dense(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, T(0)) {}
  T& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const T& at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  static Dense eye(std::size_t n) {
    Dense d(n, n);
    for (std::size_t i = 0; i < n; ++i) d.at(i, i) = T(1);
    return d;
  }
  IntMatrix to_int_matrix() const {
    IntMatrix out(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) out(r, c) = BigInt(at(r, c));
    return out;
  }
};

template <class T>
class Eliminator {
 public:
  Eliminator(Dense<T> a, bool transforms)
      : a_(std::move(a)),
        track_(transforms),
        u_(Dense<T>::eye(track_ ? a_.rows : 0)),
        ui_(Dense<T>::eye(track_ ? a_.rows : 0)),
        v_(Dense<T>::eye(track_ ? a_.cols : 0)),
        vi_(Dense<T>::eye(track_ ? a_.cols : 0)) {}

  void run() {
    const std::size_t m = a_.rows, n = a_.cols;
    std::size_t t = 0;
    while (t < m && t < n) {
      if (!bring_smallest_to(t, t, m, n)) break;
      for (;;) {
        bool clean = true;
        for (std::size_t i = t + 1; i < m; ++i) {
          if (a_.at(i, t) == T(0)) continue;
          row_sub(i, t, a_.at(i, t) / a_.at(t, t));
          if (a_.at(i, t) != T(0)) clean = false;
        }
        for (std::size_t j = t + 1; j < n; ++j) {
          if (a_.at(t, j) == T(0)) continue;
          col_sub(j, t, a_.at(t, j) / a_.at(t, t));
          if (a_.at(t, j) != T(0)) clean = false;
        }
        if (!clean) {
          bring_smallest_in_cross(t);
          continue;
        }
        // divisibility of the trailing block by the pivot
        bool fixed = false;
        for (std::size_t i = t + 1; i < m && !fixed; ++i)
          for (std::size_t j = t + 1; j < n && !fixed; ++j)
            if (a_.at(i, j) % a_.at(t, t) != T(0)) {
              row_add(t, i);
              fixed = true;
            }
        if (!fixed) break;
      }
      if (a_.at(t, t) < T(0)) row_negate(t);
      ++t;
    }
    rank_ = t;
  }

  std::size_t rank() const { return rank_; }
  const Dense<T>& a() const { return a_; }
  const Dense<T>& u() const { return u_; }
  const Dense<T>& u_inv() const { return ui_; }
  const Dense<T>& v() const { return v_; }
  const Dense<T>& v_inv() const { return vi_; }

 private:
  // A pivot of minimal magnitude in the trailing block is swapped to (t,t).
  bool bring_smallest_to(std::size_t t, std::size_t, std::size_t m, std::size_t n) {
    std::size_t bi = m, bj = n;
    T best(0);
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j) {
        const T& x = a_.at(i, j);
        if (x == T(0)) continue;
        T mag = magnitude(x);
        if (bi == m || mag < best) {
          best = mag;
          bi = i;
          bj = j;
        }
      }
    if (bi == m) return false;
    if (bi != t) row_swap(t, bi);
    if (bj != t) col_swap(t, bj);
    return true;
  }

  void bring_smallest_in_cross(std::size_t t) {
    std::size_t bi = t, bj = t;
    T best = magnitude(a_.at(t, t));
    for (std::size_t i = t + 1; i < a_.rows; ++i)
      if (a_.at(i, t) != T(0) && magnitude(a_.at(i, t)) < best) {
        best = magnitude(a_.at(i, t));
        bi = i;
        bj = t;
      }
    for (std::size_t j = t + 1; j < a_.cols; ++j)
      if (a_.at(t, j) != T(0) && magnitude(a_.at(t, j)) < best) {
        best = magnitude(a_.at(t, j));
        bi = t;
        bj = j;
      }
    if (bi != t) row_swap(t, bi);
    if (bj != t) col_swap(t, bj);
  }

  // row_i -= q * row_j
  void row_sub(std::size_t i, std::size_t j, const T& q) {
    for (std::size_t c = 0; c < a_.cols; ++c) a_.at(i, c) = sub_mul(a_.at(i, c), q, a_.at(j, c));
    if (!track_) return;
    for (std::size_t c = 0; c < u_.cols; ++c) u_.at(i, c) = sub_mul(u_.at(i, c), q, u_.at(j, c));
    // inverse: col_j += q * col_i
    for (std::size_t r = 0; r < ui_.rows; ++r) ui_.at(r, j) = sub_mul(ui_.at(r, j), negate(q), ui_.at(r, i));
  }

  // row_i += row_j
  void row_add(std::size_t i, std::size_t j) {
    for (std::size_t c = 0; c < a_.cols; ++c) a_.at(i, c) = add(a_.at(i, c), a_.at(j, c));
    if (!track_) return;
    for (std::size_t c = 0; c < u_.cols; ++c) u_.at(i, c) = add(u_.at(i, c), u_.at(j, c));
    for (std::size_t r = 0; r < ui_.rows; ++r) ui_.at(r, j) = sub_mul(ui_.at(r, j), T(1), ui_.at(r, i));
  }

  void row_swap(std::size_t i, std::size_t j) {
    for (std::size_t c = 0; c < a_.cols; ++c) std::swap(a_.at(i, c), a_.at(j, c));
    if (!track_) return;
    for (std::size_t c = 0; c < u_.cols; ++c) std::swap(u_.at(i, c), u_.at(j, c));
    for (std::size_t r = 0; r < ui_.rows; ++r) std::swap(ui_.at(r, i), ui_.at(r, j));
  }

  void row_negate(std::size_t i) {
    for (std::size_t c = 0; c < a_.cols; ++c) a_.at(i, c) = negate(a_.at(i, c));
    if (!track_) return;
    for (std::size_t c = 0; c < u_.cols; ++c) u_.at(i, c) = negate(u_.at(i, c));
    for (std::size_t r = 0; r < ui_.rows; ++r) ui_.at(r, i) = negate(ui_.at(r, i));
  }

  // col_i -= q * col_j
  void col_sub(std::size_t i, std::size_t j, const T& q) {
    for (std::size_t r = 0; r < a_.rows; ++r) a_.at(r, i) = sub_mul(a_.at(r, i), q, a_.at(r, j));
    if (!track_) return;
    for (std::size_t r = 0; r < v_.rows; ++r) v_.at(r, i) = sub_mul(v_.at(r, i), q, v_.at(r, j));
    // inverse: row_j += q * row_i
    for (std::size_t c = 0; c < vi_.cols; ++c) vi_.at(j, c) = sub_mul(vi_.at(j, c), negate(q), vi_.at(i, c));
  }

  void col_swap(std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < a_.rows; ++r) std::swap(a_.at(r, i), a_.at(r, j));
    if (!track_) return;
    for (std::size_t r = 0; r < v_.rows; ++r) std::swap(v_.at(r, i), v_.at(r, j));
    for (std::size_t c = 0; c < vi_.cols; ++c) std::swap(vi_.at(i, c), vi_.at(j, c));
  }

  Dense<T> a_;
  bool track_;
  Dense<T> u_, ui_, v_, vi_;
  std::size_t rank_ = 0;
};

template <class T>
SmithForm package(const Eliminator<T>& e, bool transforms) {
  SmithForm out;
  out.rank = e.rank();
  for (std::size_t i = 0; i < e.rank(); ++i) out.invariants.push_back(BigInt(e.a().at(i, i)));
  if (transforms) {
    out.u = e.u().to_int_matrix();
    out.u_inv = e.u_inv().to_int_matrix();
    out.v = e.v().to_int_matrix();
    out.v_inv = e.v_inv().to_int_matrix();
  }
  return out;
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& a, bool with_transforms) {
  const auto lo = BigInt(std::numeric_limits<std::int64_t>::min() / 4);
  const auto hi = BigInt(std::numeric_limits<std::int64_t>::max() / 4);
  bool small = true;
  for (std::size_t r = 0; r < a.rows() && small; ++r)
    for (std::size_t c = 0; c < a.cols() && small; ++c) small = a(r, c) > lo && a(r, c) < hi;

  if (small) {
    Dense<std::int64_t> d(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
      for (std::size_t c = 0; c < a.cols(); ++c) d.at(r, c) = a(r, c).convert_to<std::int64_t>();
    try {
      Eliminator<std::int64_t> e(std::move(d), with_transforms);
      e.run();
      return package(e, with_transforms);
    } catch (const Overflow&) {
      // fall through to arbitrary precision
    }
  }
  Dense<BigInt> d(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) d.at(r, c) = a(r, c);
  Eliminator<BigInt> e(std::move(d), with_transforms);
  e.run();
  return package(e, with_transforms);
}

IntMatrix integer_kernel(const IntMatrix& a) {
  SmithForm s = smith_normal_form(a);
  return s.v.columns(s.rank, a.cols() - s.rank);
}

LatticeSolution solve_integer(const IntMatrix& a, const std::vector<BigInt>& b) {
  SmithForm s = smith_normal_form(a);
  // D y = U b with x = V y
  std::vector<BigInt> ub = s.u * b;
  std::vector<BigInt> y(a.cols());
  for (std::size_t i = 0; i < ub.size(); ++i) {
    if (i < s.rank) {
      if (ub[i] % s.invariants[i] != 0) {
        return {std::nullopt, LatticeCertificate{s.u.row(i), s.invariants[i]}};
      }
      y[i] = ub[i] / s.invariants[i];
    } else if (ub[i] != 0) {
      return {std::nullopt, LatticeCertificate{s.u.row(i), BigInt(0)}};
    }
  }
  return {s.v * y, std::nullopt};
}

}  // namespace gerbelab
