#pragma once

#include "hilucsi/sparse.hpp"

namespace hilucsi {

/// \brief reverse Cuthill-McKee ordering of a structurally symmetric pattern
///
/// BFS per connected component from a pseudo-peripheral start vertex
/// (alternating-BFS heuristic), neighbors visited by increasing degree, the
/// final order reversed. Ties always break toward the lowest index.
Permutation rcm_order(const SparseMatrix &pattern);

/// approximate-minimum-degree elimination ordering; forward[k] is the vertex
/// eliminated k-th
Permutation amd_order(const SparseMatrix &pattern);

}  // namespace hilucsi
