#pragma once

#include <cstdint>
#include <span>
#include <tuple>
#include <vector>

namespace hilucsi {

using index_t = std::int64_t;

/// \brief compressed sparse row matrix with sorted, duplicate-free rows
///
/// Interpreted as immutable once built; all free functions below return fresh
/// matrices. Indices are 64-bit throughout.
struct SparseMatrix {
  index_t n_rows = 0;
  index_t n_cols = 0;
  std::vector<index_t> row_offsets;  // length n_rows + 1
  std::vector<index_t> col_indices;
  std::vector<double> values;

  index_t nnz() const { return static_cast<index_t>(col_indices.size()); }

  std::span<const index_t> row_cols(index_t i) const {
    return {col_indices.data() + row_offsets[i],
            static_cast<std::size_t>(row_offsets[i + 1] - row_offsets[i])};
  }
  std::span<const double> row_vals(index_t i) const {
    return {values.data() + row_offsets[i],
            static_cast<std::size_t>(row_offsets[i + 1] - row_offsets[i])};
  }

  /// entry lookup by binary search; 0 if absent
  double coeff(index_t i, index_t j) const;

  /// full structural + value sanity check (sorted rows, ranges, finiteness)
  bool valid() const;

  bool operator==(const SparseMatrix &) const = default;
};

/// \brief a bijection on [0, n) stored in both directions
///
/// forward[k] is the source index that moves to position k, so a permuted
/// matrix reads B(i, j) = A(forward[i], forward[j]).
struct Permutation {
  std::vector<index_t> forward;
  std::vector<index_t> inverse;

  static Permutation identity(index_t n);
  /// build from a forward vector, deriving the inverse; validates bijectivity
  static Permutation from_forward(std::vector<index_t> fwd);

  index_t size() const { return static_cast<index_t>(forward.size()); }
  bool valid() const;
  Permutation inverted() const { return Permutation{inverse, forward}; }

  bool operator==(const Permutation &) const = default;
};

/// apply q then p: result.forward[i] = p.forward[q.forward[i]]
Permutation compose(const Permutation &p, const Permutation &q);

/// \brief row/column permutations plus strictly positive diagonal scalings
///
/// Scales are indexed by source (pre-permutation) row/column, so the scaled
/// permuted matrix is B(i,j) = row_scale[pr(i)] * A(pr(i), pc(j)) * col_scale[pc(j)]
/// with pr/pc the forward maps.
struct PermScale {
  Permutation row_perm;
  Permutation col_perm;
  std::vector<double> row_scale;
  std::vector<double> col_scale;

  static PermScale identity(index_t n);
  bool valid() const;
};

/// assemble from (row, col, value) triplets; duplicates are summed and
/// explicit zeros dropped
SparseMatrix build_from_triplets(
    std::span<const std::tuple<index_t, index_t, double>> entries,
    index_t n_rows, index_t n_cols);

SparseMatrix transpose(const SparseMatrix &a);

/// 0/1 pattern of a + a^T; requires square input
SparseMatrix symmetrized_pattern(const SparseMatrix &a);

/// D_r P_r^T A P_c D_c with the conventions of PermScale
SparseMatrix apply_perm_scale(const SparseMatrix &a, const PermScale &ps);

/// y = A x
std::vector<double> spmv(const SparseMatrix &a, std::span<const double> x);

/// diagonal of the scaled permuted matrix without materializing it
std::vector<double> scaled_permuted_diag(const SparseMatrix &a, const PermScale &ps);

/// rows/cols restricted to `sel` (given in order), reindexed to [0, |sel|)
SparseMatrix extract_submatrix(const SparseMatrix &a, std::span<const index_t> sel);

/// B(i,j) = A(p.forward[i], p.forward[j]) for square a
SparseMatrix symmetric_permute(const SparseMatrix &a, const Permutation &p);

}  // namespace hilucsi
