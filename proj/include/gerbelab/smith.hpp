#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace gerbelab {

using BigInt = boost::multiprecision::cpp_int;

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  BigInt& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const BigInt& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<BigInt> column(std::size_t c) const;
  std::vector<BigInt> row(std::size_t r) const;
  /// Columns [first, first + count).
  IntMatrix columns(std::size_t first, std::size_t count) const;
  IntMatrix rows_range(std::size_t first, std::size_t count) const;
  IntMatrix transpose() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend std::vector<BigInt> operator*(const IntMatrix& a, const std::vector<BigInt>& x);
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

/// D = U * A * V with U, V unimodular and D diagonal with positive
/// invariants d_0 | d_1 | ... | d_{rank-1}. The inverses are tracked along
/// with the transforms.
struct SmithForm {
  std::vector<BigInt> invariants;
  std::size_t rank = 0;
  IntMatrix u, u_inv, v, v_inv;
};

/// Smith normal form. Runs on checked 64-bit integers first and falls back
/// to arbitrary precision when an intermediate value overflows.
SmithForm smith_normal_form(const IntMatrix& a, bool with_transforms = true);

/// Basis (as columns) of the integer kernel {x : A x = 0}.
IntMatrix integer_kernel(const IntMatrix& a);

/// Witness that b is not in the image of A over Z: w with w^T A = 0 mod
/// `modulus` (0 meaning exactly) and w . b != 0 mod `modulus`.
struct LatticeCertificate {
  std::vector<BigInt> functional;
  BigInt modulus;
};

struct LatticeSolution {
  std::optional<std::vector<BigInt>> solution;
  std::optional<LatticeCertificate> certificate;
};

/// Integer solution of A x = b, or a certificate of insolvability.
LatticeSolution solve_integer(const IntMatrix& a, const std::vector<BigInt>& b);

std::string to_string(const BigInt& v);

}  // namespace gerbelab
