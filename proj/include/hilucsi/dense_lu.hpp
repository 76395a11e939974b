#pragma once

#include <span>
#include <vector>

#include "hilucsi/sparse.hpp"

namespace hilucsi {

/// \brief dense LU with partial pivoting for the terminal level
///
/// Pivots smaller than 1e-14 * max|S| are replaced by that bound with the
/// pivot's sign, so factorization and solves never break down.
class DenseLU {
 public:
  DenseLU() = default;

  /// factorize a row-major n x n matrix
  static DenseLU factorize(std::vector<double> matrix, index_t n);
  static DenseLU factorize(const SparseMatrix &s);

  index_t size() const { return n_; }

  /// x = S^{-1} b
  std::vector<double> solve(std::span<const double> b) const;

  std::span<const index_t> pivots() const { return piv_; }

 private:
  index_t n_ = 0;
  std::vector<double> lu_;    // row-major, L below diagonal, U on and above
  std::vector<index_t> piv_;  // row swapped with k at step k
};

}  // namespace hilucsi
