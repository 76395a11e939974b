#include "hilucsi/equilibrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "hilucsi/errors.hpp"

namespace hilucsi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// column-oriented view of the assignment costs c_ij = log(colmax_j) - log|a_ij|
struct CostGraph {
  std::vector<index_t> col_ptr;
  std::vector<index_t> row_ind;
  std::vector<double> cost;
  std::vector<double> log_cmax;  // log of per-column max magnitude
};

CostGraph build_costs(const SparseMatrix &a) {
  const SparseMatrix at = transpose(a);
  const index_t n = a.n_rows;
  CostGraph g;
  g.col_ptr.assign(n + 1, 0);
  g.row_ind.reserve(at.col_indices.size());
  g.cost.reserve(at.col_indices.size());
  g.log_cmax.assign(n, -kInf);
  for (index_t j = 0; j < n; ++j) {
    double cmax = 0.0;
    for (const double v : at.row_vals(j)) cmax = std::max(cmax, std::abs(v));
    const double lmax = cmax > 0.0 ? std::log(cmax) : -kInf;
    g.log_cmax[j] = lmax;
    const auto rows = at.row_cols(j);
    const auto vals = at.row_vals(j);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (vals[k] == 0.0) continue;
      g.row_ind.push_back(rows[k]);
      g.cost.push_back(lmax - std::log(std::abs(vals[k])));
    }
    g.col_ptr[j + 1] = static_cast<index_t>(g.row_ind.size());
  }
  return g;
}

}  // namespace

PermScale equilibrate(const SparseMatrix &a) {
  if (a.n_rows != a.n_cols) throw InputError("equilibrate needs a square matrix");
  const index_t n = a.n_rows;
  const CostGraph g = build_costs(a);

  std::vector<double> u(n, 0.0), v(n, 0.0);  // row / column duals
  std::vector<index_t> match_row(n, -1), match_col(n, -1);

  // cheap pass: match zero-reduced-cost entries with both endpoints free
  for (index_t j = 0; j < n; ++j) {
    for (index_t k = g.col_ptr[j]; k < g.col_ptr[j + 1]; ++k) {
      const index_t i = g.row_ind[k];
      if (match_row[i] == -1 && g.cost[k] == 0.0) {
        match_row[i] = j;
        match_col[j] = i;
        break;
      }
    }
  }

  // shortest augmenting paths with dual potentials for the rest
  std::vector<double> dist(n, kInf);
  std::vector<index_t> parent_col(n, -1);
  std::vector<char> finalized(n, 0);
  std::vector<index_t> touched;
  std::vector<std::pair<index_t, double>> final_rows;  // (row, dist at pop)
  std::vector<std::pair<index_t, double>> tree_cols;   // (col, dist at entry)
  using QItem = std::pair<double, index_t>;
  std::priority_queue<QItem, std::vector<QItem>, std::greater<>> pq;
  bool singular = false;

  for (index_t j0 = 0; j0 < n; ++j0) {
    if (match_col[j0] != -1) continue;
    final_rows.clear();
    tree_cols.clear();
    tree_cols.emplace_back(j0, 0.0);
    for (index_t k = g.col_ptr[j0]; k < g.col_ptr[j0 + 1]; ++k) {
      const index_t i = g.row_ind[k];
      const double nd = g.cost[k] - u[i] - v[j0];
      if (nd < dist[i]) {
        if (dist[i] == kInf) touched.push_back(i);
        dist[i] = nd;
        parent_col[i] = j0;
        pq.emplace(nd, i);
      }
    }

    index_t i_star = -1;
    double path_len = kInf;
    while (!pq.empty()) {
      const auto [d, i] = pq.top();
      pq.pop();
      if (finalized[i] || d > dist[i]) continue;
      finalized[i] = 1;
      final_rows.emplace_back(i, d);
      if (match_row[i] == -1) {
        i_star = i;
        path_len = d;
        break;
      }
      const index_t j = match_row[i];
      tree_cols.emplace_back(j, d);
      for (index_t k = g.col_ptr[j]; k < g.col_ptr[j + 1]; ++k) {
        const index_t i2 = g.row_ind[k];
        if (finalized[i2]) continue;
        const double nd = d + (g.cost[k] - u[i2] - v[j]);
        if (nd < dist[i2]) {
          if (dist[i2] == kInf) touched.push_back(i2);
          dist[i2] = nd;
          parent_col[i2] = j;
          pq.emplace(nd, i2);
        }
      }
    }

    if (i_star != -1) {
      // restore dual feasibility and tightness along the new matching
      for (const auto &[i, d] : final_rows) u[i] -= path_len - d;
      for (const auto &[j, d] : tree_cols) v[j] += path_len - d;
      index_t i = i_star;
      for (;;) {
        const index_t j = parent_col[i];
        const index_t prev = match_col[j];
        match_col[j] = i;
        match_row[i] = j;
        if (j == j0) break;
        i = prev;
      }
    } else {
      singular = true;
    }

    for (const index_t i : touched) {
      dist[i] = kInf;
      parent_col[i] = -1;
      finalized[i] = 0;
    }
    touched.clear();
    while (!pq.empty()) pq.pop();
  }

  if (singular) {
    std::vector<index_t> unmatched;
    for (index_t i = 0; i < n; ++i)
      if (match_row[i] == -1) unmatched.push_back(i);
    throw StructurallySingularError(
        "structurally singular matrix: " + std::to_string(unmatched.size()) +
            " rows cannot be matched",
        std::move(unmatched));
  }

  PermScale ps;
  std::vector<index_t> fwd(n);
  for (index_t j = 0; j < n; ++j) fwd[j] = match_col[j];
  ps.row_perm = Permutation::from_forward(std::move(fwd));
  ps.col_perm = Permutation::identity(n);
  ps.row_scale.resize(n);
  ps.col_scale.resize(n);
  for (index_t i = 0; i < n; ++i) ps.row_scale[i] = std::exp(u[i]);
  for (index_t j = 0; j < n; ++j) ps.col_scale[j] = std::exp(v[j] - g.log_cmax[j]);
  if (!ps.valid()) throw InputError("equilibration produced non-finite scaling");
  return ps;
}

PermScale symmetrize_equilibration(const PermScale &ps) {
  PermScale out;
  out.row_perm = ps.row_perm;
  out.col_perm = ps.row_perm;
  const index_t n = ps.row_perm.size();
  out.row_scale.resize(n);
  for (index_t i = 0; i < n; ++i)
    out.row_scale[i] = std::sqrt(ps.row_scale[i] * ps.col_scale[i]);
  out.col_scale = out.row_scale;
  return out;
}

}  // namespace hilucsi
