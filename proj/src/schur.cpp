#include "hilucsi/schur.hpp"

#include <algorithm>
#include <vector>

#include "hilucsi/errors.hpp"

namespace hilucsi {

SchurResult compute_schur(const SparseMatrix &c_hat, const SparseMatrix &le,
                          std::span<const double> db, const SparseMatrix &uf) {
  const index_t ns = c_hat.n_rows;
  const index_t m = le.n_cols;
  if (c_hat.n_cols != ns || le.n_rows != ns || uf.n_rows != m ||
      uf.n_cols != ns || static_cast<index_t>(db.size()) != m)
    throw InputError("compute_schur dimension mismatch");

  SchurResult res;
  res.sc.n_rows = res.sc.n_cols = ns;
  res.sc.row_offsets.assign(ns + 1, 0);

  std::vector<double> acc(ns, 0.0);
  std::vector<index_t> mark(ns, -1);
  std::vector<index_t> touched;
  for (index_t i = 0; i < ns; ++i) {
    touched.clear();
    for (index_t t = c_hat.row_offsets[i]; t < c_hat.row_offsets[i + 1]; ++t) {
      const index_t j = c_hat.col_indices[t];
      mark[j] = i;
      acc[j] = c_hat.values[t];
      touched.push_back(j);
    }
    for (index_t t = le.row_offsets[i]; t < le.row_offsets[i + 1]; ++t) {
      const index_t k = le.col_indices[t];
      const double coef = le.values[t] * db[k];
      for (index_t s = uf.row_offsets[k]; s < uf.row_offsets[k + 1]; ++s) {
        const index_t j = uf.col_indices[s];
        const double prod = coef * uf.values[s];
        if (mark[j] != i) {
          mark[j] = i;
          acc[j] = -prod;
          touched.push_back(j);
        } else {
          acc[j] -= prod;
        }
        ++res.nnz_work;
      }
    }
    std::sort(touched.begin(), touched.end());
    for (const index_t j : touched) {
      if (acc[j] == 0.0) continue;  // exact cancellation only
      res.sc.col_indices.push_back(j);
      res.sc.values.push_back(acc[j]);
    }
    res.sc.row_offsets[i + 1] = static_cast<index_t>(res.sc.col_indices.size());
  }
  return res;
}

}  // namespace hilucsi
