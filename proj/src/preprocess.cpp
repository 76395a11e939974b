#include "hilucsi/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "hilucsi/equilibrate.hpp"
#include "hilucsi/errors.hpp"
#include "hilucsi/ordering.hpp"

namespace hilucsi {

std::vector<index_t> static_defer(const SparseMatrix &a_scaled, double kappa_d) {
  const index_t n = a_scaled.n_rows;
  const double thres = 1.0 / kappa_d;
  std::vector<index_t> deferred;
  for (index_t i = 0; i < n; ++i)
    if (std::abs(a_scaled.coeff(i, i)) < thres) deferred.push_back(i);
  return deferred;
}

PreprocessReport preprocess_level(const SparseMatrix &a, double kappa_d,
                                  int level, bool symmetric,
                                  bool allow_singular_fallback) {
  const index_t n = a.n_rows;
  PreprocessReport rep;
  rep.symmetric_mode = symmetric;

  std::vector<index_t> forced_defer;
  try {
    rep.perm_scale = equilibrate(a);
    if (symmetric) rep.perm_scale = symmetrize_equilibration(rep.perm_scale);
  } catch (const StructurallySingularError &e) {
    if (!allow_singular_fallback) throw;
    rep.perm_scale = PermScale::identity(n);
    forced_defer = e.unmatched_rows;
  }

  // deferral keys on the scaled permuted diagonal; avoid materializing here
  const std::vector<double> diag = scaled_permuted_diag(a, rep.perm_scale);
  const double thres = 1.0 / kappa_d;
  std::vector<char> defer(n, 0);
  for (index_t i = 0; i < n; ++i)
    if (std::abs(diag[i]) < thres) defer[i] = 1;
  for (const index_t i : forced_defer) defer[i] = 1;

  std::vector<index_t> kept;
  for (index_t i = 0; i < n; ++i)
    (defer[i] ? rep.statically_deferred : kept).push_back(i);

  if (kept.empty()) {
    rep.fill_order = Permutation::identity(0);
    return rep;
  }

  const SparseMatrix scaled = apply_perm_scale(a, rep.perm_scale);
  const SparseMatrix pat = symmetrized_pattern(extract_submatrix(scaled, kept));
  rep.fill_order = (symmetric && level == 1) ? rcm_order(pat) : amd_order(pat);
  return rep;
}

}  // namespace hilucsi
