#include "hilucsi/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hilucsi/errors.hpp"

namespace hilucsi {

double SparseMatrix::coeff(index_t i, index_t j) const {
  const auto cols = row_cols(i);
  const auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return 0.0;
  return values[row_offsets[i] + (it - cols.begin())];
}

bool SparseMatrix::valid() const {
  if (n_rows < 0 || n_cols < 0) return false;
  if (static_cast<index_t>(row_offsets.size()) != n_rows + 1) return false;
  if (row_offsets.front() != 0 || row_offsets.back() != nnz()) return false;
  if (values.size() != col_indices.size()) return false;
  for (index_t i = 0; i < n_rows; ++i) {
    if (row_offsets[i] > row_offsets[i + 1]) return false;
    for (index_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
      if (col_indices[k] < 0 || col_indices[k] >= n_cols) return false;
      if (k > row_offsets[i] && col_indices[k] <= col_indices[k - 1]) return false;
      if (!std::isfinite(values[k])) return false;
    }
  }
  return true;
}

Permutation Permutation::identity(index_t n) {
  Permutation p;
  p.forward.resize(n);
  std::iota(p.forward.begin(), p.forward.end(), index_t(0));
  p.inverse = p.forward;
  return p;
}

Permutation Permutation::from_forward(std::vector<index_t> fwd) {
  const index_t n = static_cast<index_t>(fwd.size());
  Permutation p;
  p.forward = std::move(fwd);
  p.inverse.assign(n, index_t(-1));
  for (index_t i = 0; i < n; ++i) {
    const index_t f = p.forward[i];
    if (f < 0 || f >= n || p.inverse[f] != -1)
      throw InputError("permutation vector is not a bijection");
    p.inverse[f] = i;
  }
  return p;
}

bool Permutation::valid() const {
  const index_t n = size();
  if (static_cast<index_t>(inverse.size()) != n) return false;
  for (index_t i = 0; i < n; ++i) {
    if (forward[i] < 0 || forward[i] >= n) return false;
    if (inverse[forward[i]] != i) return false;
  }
  return true;
}

Permutation compose(const Permutation &p, const Permutation &q) {
  const index_t n = p.size();
  std::vector<index_t> fwd(n);
  for (index_t i = 0; i < n; ++i) fwd[i] = p.forward[q.forward[i]];
  return Permutation::from_forward(std::move(fwd));
}

PermScale PermScale::identity(index_t n) {
  PermScale ps;
  ps.row_perm = Permutation::identity(n);
  ps.col_perm = Permutation::identity(n);
  ps.row_scale.assign(n, 1.0);
  ps.col_scale.assign(n, 1.0);
  return ps;
}

bool PermScale::valid() const {
  if (!row_perm.valid() || !col_perm.valid()) return false;
  const auto positive_finite = [](const std::vector<double> &s) {
    return std::all_of(s.begin(), s.end(),
                       [](double v) { return v > 0.0 && std::isfinite(v); });
  };
  return static_cast<index_t>(row_scale.size()) == row_perm.size() &&
         static_cast<index_t>(col_scale.size()) == col_perm.size() &&
         positive_finite(row_scale) && positive_finite(col_scale);
}

SparseMatrix build_from_triplets(
    std::span<const std::tuple<index_t, index_t, double>> entries,
    index_t n_rows, index_t n_cols) {
  for (const auto &[i, j, v] : entries) {
    if (i < 0 || i >= n_rows || j < 0 || j >= n_cols)
      throw InputError("triplet index out of range");
    if (!std::isfinite(v)) throw InputError("non-finite triplet value");
  }
  std::vector<std::size_t> order(entries.size());
  std::iota(order.begin(), order.end(), std::size_t(0));
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ka = std::pair(std::get<0>(entries[a]), std::get<1>(entries[a]));
    const auto kb = std::pair(std::get<0>(entries[b]), std::get<1>(entries[b]));
    return ka < kb;
  });

  SparseMatrix m;
  m.n_rows = n_rows;
  m.n_cols = n_cols;
  m.row_offsets.assign(n_rows + 1, 0);
  m.col_indices.reserve(entries.size());
  m.values.reserve(entries.size());

  std::size_t k = 0;
  for (index_t i = 0; i < n_rows; ++i) {
    while (k < order.size() && std::get<0>(entries[order[k]]) == i) {
      const index_t j = std::get<1>(entries[order[k]]);
      double sum = 0.0;
      while (k < order.size() && std::get<0>(entries[order[k]]) == i &&
             std::get<1>(entries[order[k]]) == j) {
        sum += std::get<2>(entries[order[k]]);
        ++k;
      }
      if (sum != 0.0) {
        m.col_indices.push_back(j);
        m.values.push_back(sum);
      }
    }
    m.row_offsets[i + 1] = static_cast<index_t>(m.col_indices.size());
  }
  return m;
}

SparseMatrix transpose(const SparseMatrix &a) {
  SparseMatrix t;
  t.n_rows = a.n_cols;
  t.n_cols = a.n_rows;
  t.row_offsets.assign(a.n_cols + 1, 0);
  for (const index_t j : a.col_indices) ++t.row_offsets[j + 1];
  std::partial_sum(t.row_offsets.begin(), t.row_offsets.end(), t.row_offsets.begin());
  t.col_indices.resize(a.col_indices.size());
  t.values.resize(a.values.size());
  std::vector<index_t> next(t.row_offsets.begin(), t.row_offsets.end() - 1);
  for (index_t i = 0; i < a.n_rows; ++i) {
    for (index_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      const index_t p = next[a.col_indices[k]]++;
      t.col_indices[p] = i;
      t.values[p] = a.values[k];
    }
  }
  return t;
}

SparseMatrix symmetrized_pattern(const SparseMatrix &a) {
  if (a.n_rows != a.n_cols) throw InputError("symmetrized_pattern needs a square matrix");
  const SparseMatrix at = transpose(a);
  SparseMatrix s;
  s.n_rows = a.n_rows;
  s.n_cols = a.n_cols;
  s.row_offsets.assign(a.n_rows + 1, 0);
  // merge the sorted rows of a and a^T
  for (index_t i = 0; i < a.n_rows; ++i) {
    const auto ra = a.row_cols(i);
    const auto rb = at.row_cols(i);
    std::size_t p = 0, q = 0;
    while (p < ra.size() || q < rb.size()) {
      index_t j;
      if (q == rb.size() || (p < ra.size() && ra[p] <= rb[q])) {
        j = ra[p];
        if (q < rb.size() && rb[q] == j) ++q;
        ++p;
      } else {
        j = rb[q++];
      }
      s.col_indices.push_back(j);
      s.values.push_back(1.0);
    }
    s.row_offsets[i + 1] = static_cast<index_t>(s.col_indices.size());
  }
  return s;
}

SparseMatrix apply_perm_scale(const SparseMatrix &a, const PermScale &ps) {
  if (ps.row_perm.size() != a.n_rows || ps.col_perm.size() != a.n_cols)
    throw InputError("apply_perm_scale dimension mismatch");
  SparseMatrix b;
  b.n_rows = a.n_rows;
  b.n_cols = a.n_cols;
  b.row_offsets.assign(a.n_rows + 1, 0);
  b.col_indices.reserve(a.col_indices.size());
  b.values.reserve(a.values.size());
  const auto &cinv = ps.col_perm.inverse;
  std::vector<std::pair<index_t, double>> row;
  for (index_t i = 0; i < a.n_rows; ++i) {
    const index_t src = ps.row_perm.forward[i];
    const double rs = ps.row_scale[src];
    row.clear();
    for (index_t k = a.row_offsets[src]; k < a.row_offsets[src + 1]; ++k) {
      const index_t jsrc = a.col_indices[k];
      row.emplace_back(cinv[jsrc], rs * a.values[k] * ps.col_scale[jsrc]);
    }
    std::sort(row.begin(), row.end());
    for (const auto &[j, v] : row) {
      b.col_indices.push_back(j);
      b.values.push_back(v);
    }
    b.row_offsets[i + 1] = static_cast<index_t>(b.col_indices.size());
  }
  return b;
}

std::vector<double> spmv(const SparseMatrix &a, std::span<const double> x) {
  if (static_cast<index_t>(x.size()) != a.n_cols)
    throw InputError("spmv dimension mismatch");
  std::vector<double> y(a.n_rows, 0.0);
  for (index_t i = 0; i < a.n_rows; ++i) {
    double acc = 0.0;
    for (index_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k)
      acc += a.values[k] * x[a.col_indices[k]];
    y[i] = acc;
  }
  return y;
}

std::vector<double> scaled_permuted_diag(const SparseMatrix &a, const PermScale &ps) {
  const index_t n = a.n_rows;
  std::vector<double> d(n, 0.0);
  for (index_t i = 0; i < n; ++i) {
    const index_t r = ps.row_perm.forward[i];
    const index_t c = ps.col_perm.forward[i];
    d[i] = ps.row_scale[r] * a.coeff(r, c) * ps.col_scale[c];
  }
  return d;
}

SparseMatrix extract_submatrix(const SparseMatrix &a, std::span<const index_t> sel) {
  std::vector<index_t> pos(a.n_cols, index_t(-1));
  for (std::size_t k = 0; k < sel.size(); ++k) pos[sel[k]] = static_cast<index_t>(k);
  SparseMatrix s;
  s.n_rows = s.n_cols = static_cast<index_t>(sel.size());
  s.row_offsets.assign(sel.size() + 1, 0);
  std::vector<std::pair<index_t, double>> row;
  for (std::size_t r = 0; r < sel.size(); ++r) {
    const index_t i = sel[r];
    row.clear();
    for (index_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      const index_t j = pos[a.col_indices[k]];
      if (j >= 0) row.emplace_back(j, a.values[k]);
    }
    std::sort(row.begin(), row.end());
    for (const auto &[j, v] : row) {
      s.col_indices.push_back(j);
      s.values.push_back(v);
    }
    s.row_offsets[r + 1] = static_cast<index_t>(s.col_indices.size());
  }
  return s;
}

SparseMatrix symmetric_permute(const SparseMatrix &a, const Permutation &p) {
  PermScale ps;
  ps.row_perm = p;
  ps.col_perm = p;
  ps.row_scale.assign(p.size(), 1.0);
  ps.col_scale.assign(p.size(), 1.0);
  return apply_perm_scale(a, ps);
}

}  // namespace hilucsi
