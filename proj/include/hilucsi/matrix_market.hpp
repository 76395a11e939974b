#pragma once

#include <string>
#include <utility>

#include "hilucsi/sparse.hpp"

namespace hilucsi {

enum class SymmetryTag { General, Symmetric };

/// \brief read a Matrix Market coordinate file (real/integer, general/symmetric)
///
/// Symmetric inputs are expanded to full storage; 1-based indices on disk
/// become 0-based in memory. The tag records what the header declared.
std::pair<SparseMatrix, SymmetryTag> read_matrix_market(const std::string &path);

/// write in coordinate/real/general form at full precision
void write_matrix_market(const std::string &path, const SparseMatrix &a);

}  // namespace hilucsi
