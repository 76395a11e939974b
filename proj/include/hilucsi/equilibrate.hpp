#pragma once

#include "hilucsi/sparse.hpp"

namespace hilucsi {

/// \brief max-product matching and scaling in the style of MC64 option 5
///
/// Finds a row permutation placing a maximum-product set of entries on the
/// diagonal, and scalings derived from the dual potentials of the underlying
/// assignment problem, so that matched entries of the scaled permuted matrix
/// have magnitude 1 and all entries have magnitude at most 1.
///
/// \throws StructurallySingularError when no perfect matching exists; the
///         exception carries the rows left unmatched by a maximum matching.
PermScale equilibrate(const SparseMatrix &a);

/// replace both scalings by sqrt(row_scale * col_scale) elementwise and apply
/// the row permutation to both sides
PermScale symmetrize_equilibration(const PermScale &ps);

}  // namespace hilucsi
