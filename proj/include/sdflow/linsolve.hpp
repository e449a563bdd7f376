#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

#include "sdflow/assembly.hpp"

namespace sdflow {

enum class MatrixSymmetry { General, SymmetricPositiveDefinite };

class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(const std::string& what, long pivot_index)
      : std::runtime_error(what), pivot_index_(pivot_index) {}
  /// Index of the offending pivot, or -1 when the backend does not report one.
  long pivot_index() const { return pivot_index_; }

 private:
  long pivot_index_;
};

/// Sparse direct factorization of one square matrix: LU with partial
/// pivoting for general matrices, LDL^T for SPD ones. Immutable once built;
/// solve() is const and may be called concurrently.
class Factorization {
 public:
  static Factorization factorize(const SparseMatrix& a,
                                 MatrixSymmetry symmetry = MatrixSymmetry::General);

  Factorization(Factorization&&) noexcept;
  Factorization& operator=(Factorization&&) noexcept;
  ~Factorization();

  /// Throws std::invalid_argument on dimension mismatch.
  Vector solve(const Vector& rhs) const;

  int dimension() const { return dimension_; }
  MatrixSymmetry symmetry() const { return symmetry_; }

 private:
  struct Impl;
  Factorization(std::unique_ptr<Impl> impl, int dimension, MatrixSymmetry symmetry);

  std::unique_ptr<Impl> impl_;
  int dimension_ = 0;
  MatrixSymmetry symmetry_ = MatrixSymmetry::General;
};

/// Number of factorizations performed by this process so far.
std::uint64_t factorization_count();

}  // namespace sdflow
