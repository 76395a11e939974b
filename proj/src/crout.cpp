#include "hilucsi/crout.hpp"

#include <algorithm>
#include <cmath>

#include "hilucsi/errors.hpp"

namespace hilucsi {

bool DropParams::valid() const {
  return std::isfinite(alpha) && std::isfinite(tau) && std::isfinite(kappa_d) &&
         std::isfinite(kappa_l) && std::isfinite(kappa_u) && alpha >= 1.0 &&
         tau >= 0.0 && kappa_d >= 1.0 && kappa_l >= 1.0 && kappa_u >= 1.0;
}

double InverseNormEstimator::commit(double dot) {
  // b_k = -sign(dot) maximizes |b_k - dot|
  const double xk = dot > 0.0 ? -1.0 - dot : 1.0 - dot;
  x_.push_back(xk);
  kappa_ = std::max(kappa_, std::abs(xk));
  return kappa_;
}

double InverseNormEstimator::update(std::span<const index_t> idx,
                                    std::span<const double> vals) {
  double dot = 0.0;
  for (std::size_t t = 0; t < idx.size(); ++t) dot += vals[t] * x_[idx[t]];
  return commit(dot);
}

index_t nnz_limit(double alpha, index_t nnz_ref, double mean_ref) {
  const double bound = alpha * std::max(static_cast<double>(nnz_ref), 0.85 * mean_ref);
  return std::max<index_t>(static_cast<index_t>(std::ceil(bound)), 1);
}

void drop_vector(SparseVec &v, index_t limit, double scale, double tau) {
  std::size_t w = 0;
  for (std::size_t r = 0; r < v.size(); ++r)
    if (scale * std::abs(v[r].second) > tau) v[w++] = v[r];
  v.resize(w);
  const auto bigger = [](const std::pair<index_t, double> &a,
                         const std::pair<index_t, double> &b) {
    const double ma = std::abs(a.second), mb = std::abs(b.second);
    return ma != mb ? ma > mb : a.first < b.first;
  };
  if (static_cast<index_t>(v.size()) > limit) {
    std::nth_element(v.begin(), v.begin() + limit, v.end(), bigger);
    v.resize(limit);
  }
  std::sort(v.begin(), v.end());
}

void CroutTriangle::link(index_t j) {
  if (pos_[j] < step_end(j)) {
    const index_t e = idx_[pos_[j]];
    next_[j] = head_[e];
    head_[e] = j;
  }
}

void CroutTriangle::push_step(const SparseVec &v) {
  const index_t j = nsteps();
  start_.push_back(static_cast<index_t>(idx_.size()));
  for (const auto &[i, x] : v) {
    idx_.push_back(i);
    val_.push_back(x);
  }
  pos_.push_back(start_[j]);
  next_.push_back(-1);
  link(j);
}

void CroutTriangle::consume(index_t e) {
  index_t j = head_[e];
  head_[e] = -1;
  while (j != -1) {
    const index_t nj = next_[j];
    ++pos_[j];
    link(j);
    j = nj;
  }
}

index_t CroutTriangle::relabel(index_t e, index_t tail) {
  index_t moved = 0;
  index_t j = head_[e];
  head_[e] = -1;
  while (j != -1) {
    const index_t nj = next_[j];
    const index_t p = pos_[j];
    const index_t end = step_end(j);
    const double v = val_[p];
    std::move(idx_.begin() + p + 1, idx_.begin() + end, idx_.begin() + p);
    std::move(val_.begin() + p + 1, val_.begin() + end, val_.begin() + p);
    idx_[end - 1] = tail;
    val_[end - 1] = v;
    ++moved;
    link(j);  // pos unchanged; now holds the shifted-in successor (or tail)
    j = nj;
  }
  return moved;
}

AugmentedCroutStore::AugmentedCroutStore(index_t n, index_t leading_size,
                                         bool symmetric)
    : n_(n), m0_(leading_size), symmetric_(symmetric) {
  const index_t cap = n + m0_;
  l.init(cap);
  if (!symmetric_) u.init(cap);
  pos_of_initial_.resize(n);
  for (index_t i = 0; i < n; ++i) pos_of_initial_[i] = i;
}

void AugmentedCroutStore::defer_step() {
  const index_t e = deferred_step();
  const index_t tail = n_ + defers_;
  relocations += l.relabel(e, tail);
  if (!symmetric_) relocations += u.relabel(e, tail);
  pos_of_initial_[e] = tail;
  dynamic_deferred_.push_back(e);
  ++defers_;
}

void AugmentedCroutStore::accept_step(const SparseVec &l_col,
                                      const SparseVec &u_row) {
  const index_t e = deferred_step();
  l.consume(e);
  l.push_step(l_col);
  if (!symmetric_) {
    u.consume(e);
    u.push_step(u_row);
  }
  accepted_.push_back(e);
  ++step_;
}

index_t AugmentedCroutStore::final_of_ext(index_t e) const {
  if (e >= n_) return step_ + (n_ - m0_) + (e - n_);  // dynamic tail
  if (e >= m0_) return step_ + (e - m0_);             // static tail
  // accepted candidate: its step index
  const auto it = std::lower_bound(accepted_.begin(), accepted_.end(), e);
  return static_cast<index_t>(it - accepted_.begin());
}

Permutation AugmentedCroutStore::pivot_perm() const {
  std::vector<index_t> fwd;
  fwd.reserve(n_);
  fwd.insert(fwd.end(), accepted_.begin(), accepted_.end());
  for (index_t e = m0_; e < n_; ++e) fwd.push_back(e);
  fwd.insert(fwd.end(), dynamic_deferred_.begin(), dynamic_deferred_.end());
  return Permutation::from_forward(std::move(fwd));
}

std::vector<index_t> AugmentedCroutStore::deferred_initial() const {
  std::vector<index_t> out;
  out.reserve(n_ - step_);
  for (index_t e = m0_; e < n_; ++e) out.push_back(e);
  out.insert(out.end(), dynamic_deferred_.begin(), dynamic_deferred_.end());
  return out;
}

namespace {

class SparseAccumulator {
 public:
  void init(index_t cap) {
    val_.assign(cap, 0.0);
    mark_.assign(cap, -1);
  }
  void begin() {
    ++stamp_;
    list_.clear();
  }
  void add(index_t i, double v) {
    if (mark_[i] != stamp_) {
      mark_[i] = stamp_;
      val_[i] = v;
      list_.push_back(i);
    } else {
      val_[i] += v;
    }
  }
  void extract_scaled(double inv_pivot, SparseVec &out) const {
    out.clear();
    out.reserve(list_.size());
    for (const index_t i : list_) out.emplace_back(i, val_[i] * inv_pivot);
  }

 private:
  std::vector<double> val_;
  std::vector<index_t> mark_;
  std::vector<index_t> list_;
  index_t stamp_ = 0;
};

// split the column-major step data of `tri` into the leading block and the
// trailing rows, remapping extended indices to final positions
void split_l_side(const CroutTriangle &tri, const AugmentedCroutStore &store,
                  index_t m, index_t n, SparseMatrix &block,
                  std::vector<SparseVec> &tail_rows) {
  block.n_rows = m;
  block.n_cols = m;
  tail_rows.assign(n - m, {});
  std::vector<SparseVec> rows(m);
  for (index_t k = 0; k < m; ++k) {
    const index_t b = tri.step_begin(k), e = tri.step_end(k);
    for (index_t t = b; t < e; ++t) {
      const index_t f = store.final_of_ext(tri.indices()[t]);
      if (f < m)
        rows[f].emplace_back(k, tri.values()[t]);
      else
        tail_rows[f - m].emplace_back(k, tri.values()[t]);
    }
  }
  block.row_offsets.assign(m + 1, 0);
  for (index_t i = 0; i < m; ++i) {
    for (const auto &[j, v] : rows[i]) {
      block.col_indices.push_back(j);
      block.values.push_back(v);
    }
    block.row_offsets[i + 1] = static_cast<index_t>(block.col_indices.size());
  }
}

SparseMatrix assemble_rows(std::vector<SparseVec> &&rows, index_t n_cols) {
  SparseMatrix m;
  m.n_rows = static_cast<index_t>(rows.size());
  m.n_cols = n_cols;
  m.row_offsets.assign(rows.size() + 1, 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::sort(rows[i].begin(), rows[i].end());
    for (const auto &[j, v] : rows[i]) {
      m.col_indices.push_back(j);
      m.values.push_back(v);
    }
    m.row_offsets[i + 1] = static_cast<index_t>(m.col_indices.size());
  }
  return m;
}

}  // namespace

LevelFactor factorize_level(const SparseMatrix &a, const DropParams &params,
                            std::span<const index_t> nnz_ref_row,
                            std::span<const index_t> nnz_ref_col,
                            double mean_nnz_ref, index_t leading_size,
                            bool symmetric) {
  if (a.n_rows != a.n_cols) throw InputError("factorize_level needs a square matrix");
  if (!params.valid()) throw InputError("invalid drop parameters");
  const index_t n = a.n_rows;
  const index_t m0 = leading_size;
  const SparseMatrix at = transpose(a);  // column access
  const double pivot_thres = 1.0 / params.kappa_d;

  AugmentedCroutStore store(n, m0, symmetric);
  InverseNormEstimator est_l, est_u;
  SparseAccumulator acc;
  acc.init(n + m0);

  // running diagonal of the unfactorized candidates (extended indexing)
  std::vector<double> diag(n, 0.0);
  for (index_t i = 0; i < n; ++i) diag[i] = a.coeff(i, i);

  std::vector<double> pivots;
  std::uint64_t work = 0;
  SparseVec lvec, uvec;
  LevelFactor out;

  while (!store.exhausted()) {
    const index_t e = store.deferred_step();

    double dot_l = 0.0;
    store.l.visit(e, [&](index_t j, double v) {
      dot_l += v * est_l.solution()[j];
      ++work;
    });
    double dot_u = dot_l;
    if (!symmetric) {
      dot_u = 0.0;
      store.u.visit(e, [&](index_t j, double v) {
        dot_u += v * est_u.solution()[j];
        ++work;
      });
    }
    const bool bad_pivot = std::abs(diag[e]) < pivot_thres;
    const bool bad_cond =
        InverseNormEstimator::candidate_from_dot(dot_l) > params.kappa_l ||
        InverseNormEstimator::candidate_from_dot(dot_u) > params.kappa_u;
    if (bad_pivot || bad_cond) {
      store.defer_step();
      continue;
    }

    const double dk = diag[e];
    const double kap_l = est_l.commit(dot_l);
    const double kap_u = symmetric ? est_u.commit(dot_l) : est_u.commit(dot_u);
    out.kappa_l_steps.push_back(kap_l);
    out.kappa_u_steps.push_back(kap_u);

    // l_k = (a(:, e) - sum_j L(:, j) d_j U(j, e)) / d_k over positions > e
    acc.begin();
    {
      const auto rows = at.row_cols(e);
      const auto vals = at.row_vals(e);
      for (std::size_t t = 0; t < rows.size(); ++t) {
        const index_t ext = store.ext_of_initial(rows[t]);
        if (ext > e) acc.add(ext, vals[t]);
      }
    }
    const CroutTriangle &uside = symmetric ? store.l : store.u;
    uside.visit(e, [&](index_t j, double uje) {
      const double coef = pivots[j] * uje;
      index_t t = store.l.live_pos(j);
      const index_t end = store.l.step_end(j);
      if (t < end && store.l.indices()[t] == e) ++t;
      for (; t < end; ++t) {
        acc.add(store.l.indices()[t], -coef * store.l.values()[t]);
        ++work;
      }
    });
    acc.extract_scaled(1.0 / dk, lvec);
    drop_vector(lvec, nnz_limit(params.alpha, nnz_ref_col[e], mean_nnz_ref),
                params.kappa_d * kap_l, params.tau);

    // u_k^T mirrors l_k in symmetric mode
    if (!symmetric) {
      acc.begin();
      const auto cols = a.row_cols(e);
      const auto vals = a.row_vals(e);
      for (std::size_t t = 0; t < cols.size(); ++t) {
        const index_t ext = store.ext_of_initial(cols[t]);
        if (ext > e) acc.add(ext, vals[t]);
      }
      store.l.visit(e, [&](index_t j, double lej) {
        const double coef = pivots[j] * lej;
        index_t t = store.u.live_pos(j);
        const index_t end = store.u.step_end(j);
        if (t < end && store.u.indices()[t] == e) ++t;
        for (; t < end; ++t) {
          acc.add(store.u.indices()[t], -coef * store.u.values()[t]);
          ++work;
        }
      });
      acc.extract_scaled(1.0 / dk, uvec);
      drop_vector(uvec, nnz_limit(params.alpha, nnz_ref_row[e], mean_nnz_ref),
                  params.kappa_d * kap_u, params.tau);
    }
    const SparseVec &urow = symmetric ? lvec : uvec;

    // diagonal updates of future candidates from the stored vectors
    {
      std::size_t p = 0, q = 0;
      while (p < lvec.size() && q < urow.size()) {
        const index_t il = lvec[p].first, iu = urow[q].first;
        if (il >= m0 || iu >= m0) break;  // only candidates carry a diagonal
        if (il == iu) {
          diag[il] -= lvec[p].second * dk * urow[q].second;
          ++work;
          ++p;
          ++q;
        } else if (il < iu) {
          ++p;
        } else {
          ++q;
        }
      }
    }

    pivots.push_back(dk);
    store.accept_step(lvec, urow);
  }

  const index_t m = store.step();
  out.n = n;
  out.m = m;
  out.m0 = m0;
  out.symmetric = symmetric;
  out.db = std::move(pivots);
  out.crout_work = work + store.relocations;
  out.pivot_perm = store.pivot_perm();
  out.deferred = store.deferred_initial();

  // split factors and apply the trailing-block fill limits
  std::vector<SparseVec> le_rows;
  split_l_side(store.l, store, m, n, out.lb, le_rows);
  for (index_t r = 0; r < n - m; ++r) {
    const index_t i0 = out.pivot_perm.forward[m + r];
    drop_vector(le_rows[r], nnz_limit(params.alpha, nnz_ref_row[i0], mean_nnz_ref),
                1.0, 0.0);
  }
  out.le = assemble_rows(std::move(le_rows), m);

  if (symmetric) {
    out.ub = transpose(out.lb);
    out.uf = transpose(out.le);
  } else {
    SparseMatrix ub_t;  // columns of U = rows of U^T
    std::vector<SparseVec> uf_cols;
    split_l_side(store.u, store, m, n, ub_t, uf_cols);
    for (index_t c = 0; c < n - m; ++c) {
      const index_t i0 = out.pivot_perm.forward[m + c];
      drop_vector(uf_cols[c], nnz_limit(params.alpha, nnz_ref_col[i0], mean_nnz_ref),
                  1.0, 0.0);
    }
    out.ub = transpose(ub_t);
    out.uf = transpose(assemble_rows(std::move(uf_cols), m));
  }
  return out;
}

}  // namespace hilucsi
