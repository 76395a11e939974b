#pragma once

#include <cstdint>
#include <span>

#include "hilucsi/sparse.hpp"

namespace hilucsi {

struct SchurResult {
  SparseMatrix sc;
  std::uint64_t nnz_work = 0;  // products touched by the multiply
};

/// \brief sc = c_hat - le * diag(db) * uf with a row-oriented sparse accumulator
///
/// Entries that cancel to exactly zero are pruned; numerically tiny values
/// are kept for the next level to handle.
SchurResult compute_schur(const SparseMatrix &c_hat, const SparseMatrix &le,
                          std::span<const double> db, const SparseMatrix &uf);

}  // namespace hilucsi
