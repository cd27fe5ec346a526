#pragma once

#include "crn/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace crn {

// Dense exact-rational matrix. Sizes in this project are tiny (tens), so
// plain Gaussian elimination over cpp_rational is the workhorse.
class RatMat {
public:
  RatMat() = default;
  RatMat(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols, Rat(0)) {}

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  Rat& at(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const Rat& at(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

  static RatMat identity(std::size_t n);
  RatMat transpose() const;
  RatMat operator*(const RatMat& o) const;
  RatMat operator-(const RatMat& o) const;
  bool operator==(const RatMat& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
  bool is_zero() const;

  // Reduced row echelon form; returns pivot column indices in order. When
  // col_order is given, candidate pivot columns are tried in that order.
  RatMat rref(std::vector<std::size_t>* pivot_cols = nullptr,
              const std::vector<std::size_t>* col_order = nullptr) const;

  std::size_t rank() const;
  // Columns form a basis of the kernel (n x nullity). Free columns follow the
  // complement of the pivot set in the given (or natural) column order.
  RatMat nullspace(const std::vector<std::size_t>* col_order = nullptr) const;
  // Square nonsingular inverse; nullopt if singular.
  std::optional<RatMat> inverse() const;
  // Moore-Penrose-style generalized inverse from the rank factorization
  // M = C R: H = R^T (R R^T)^-1 (C^T C)^-1 C^T. Satisfies M H M = M exactly.
  RatMat generalized_inverse() const;

private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<Rat> a_;
};

// Independent rank routine used as a cross-check oracle: fraction-free
// Bareiss elimination over big integers (inputs scaled to integers).
std::size_t rank_bareiss(const RatMat& m);

} // namespace crn
