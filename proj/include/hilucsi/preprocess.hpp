#pragma once

#include <vector>

#include "hilucsi/sparse.hpp"

namespace hilucsi {

/// \brief outcome of one level's preprocessing pipeline
///
/// `statically_deferred` holds positions of the scaled permuted matrix whose
/// diagonal is too small for the leading block; `fill_order` permutes the kept
/// positions (indices into the ascending kept list).
struct PreprocessReport {
  PermScale perm_scale;
  std::vector<index_t> statically_deferred;
  Permutation fill_order;
  bool symmetric_mode = false;
};

/// indices i with |a_ii| < 1/kappa_d on the already-scaled matrix (absent
/// diagonals count as zero)
std::vector<index_t> static_defer(const SparseMatrix &a_scaled, double kappa_d);

/// \brief equilibration, static deferring, and fill-reduction ordering in order
///
/// Symmetric mode symmetrizes the equilibration and uses RCM on the first
/// level, AMD elsewhere. When equilibration hits a structurally singular
/// matrix and `allow_singular_fallback` is set, identity scaling is used and
/// the unmatched rows join the statically deferred set; otherwise the error
/// propagates.
PreprocessReport preprocess_level(const SparseMatrix &a, double kappa_d,
                                  int level, bool symmetric,
                                  bool allow_singular_fallback);

}  // namespace hilucsi
