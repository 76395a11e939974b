#include "hilucsi/ordering.hpp"

#include <algorithm>
#include <vector>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>

#include "hilucsi/errors.hpp"

namespace hilucsi {

namespace {

// neighbor list without self loops
struct Graph {
  std::vector<index_t> ptr, adj, deg;
};

Graph build_graph(const SparseMatrix &p) {
  Graph g;
  const index_t n = p.n_rows;
  g.ptr.assign(n + 1, 0);
  g.adj.reserve(p.col_indices.size());
  for (index_t i = 0; i < n; ++i) {
    for (const index_t j : p.row_cols(i))
      if (j != i) g.adj.push_back(j);
    g.ptr[i + 1] = static_cast<index_t>(g.adj.size());
  }
  g.deg.resize(n);
  for (index_t i = 0; i < n; ++i) g.deg[i] = g.ptr[i + 1] - g.ptr[i];
  return g;
}

// BFS level structure rooted at r over the unvisited part of one component;
// returns nodes in visit order and fills level-of-node, using degree-ascending
// neighbor order with lowest-index tie break
std::vector<index_t> bfs_levels(const Graph &g, index_t r,
                                std::vector<index_t> &level,
                                index_t &eccentricity) {
  std::vector<index_t> order;
  order.push_back(r);
  level[r] = 0;
  eccentricity = 0;
  std::vector<index_t> nbrs;
  for (std::size_t h = 0; h < order.size(); ++h) {
    const index_t v = order[h];
    nbrs.clear();
    for (index_t k = g.ptr[v]; k < g.ptr[v + 1]; ++k)
      if (level[g.adj[k]] == -1) {
        nbrs.push_back(g.adj[k]);
        level[g.adj[k]] = -2;  // claimed, avoids duplicates from multi-edges
      }
    std::sort(nbrs.begin(), nbrs.end(), [&](index_t a, index_t b) {
      return std::pair(g.deg[a], a) < std::pair(g.deg[b], b);
    });
    for (const index_t w : nbrs) {
      level[w] = level[v] + 1;
      eccentricity = std::max(eccentricity, level[w]);
      order.push_back(w);
    }
  }
  return order;
}

// George-Liu alternating BFS; `level` must be -1 on the component
index_t pseudo_peripheral(const Graph &g, index_t seed, std::vector<index_t> &level) {
  index_t r = seed;
  index_t ecc = -1;
  for (;;) {
    index_t new_ecc = 0;
    const auto order = bfs_levels(g, r, level, new_ecc);
    index_t best = -1;
    for (const index_t v : order) {
      if (level[v] != new_ecc) continue;
      if (best == -1 || std::pair(g.deg[v], v) < std::pair(g.deg[best], best))
        best = v;
    }
    for (const index_t v : order) level[v] = -1;
    if (new_ecc <= ecc) return r;
    ecc = new_ecc;
    r = best;
  }
}

}  // namespace

Permutation rcm_order(const SparseMatrix &pattern) {
  if (pattern.n_rows != pattern.n_cols)
    throw InputError("rcm_order needs a square pattern");
  const index_t n = pattern.n_rows;
  const Graph g = build_graph(pattern);
  std::vector<index_t> level(n, -1);
  std::vector<index_t> order;
  order.reserve(n);
  for (index_t seed = 0; seed < n; ++seed) {
    if (level[seed] != -1) continue;
    const index_t r = pseudo_peripheral(g, seed, level);
    index_t ecc = 0;
    const auto comp = bfs_levels(g, r, level, ecc);
    order.insert(order.end(), comp.begin(), comp.end());
  }
  std::reverse(order.begin(), order.end());
  return Permutation::from_forward(std::move(order));
}

Permutation amd_order(const SparseMatrix &pattern) {
  if (pattern.n_rows != pattern.n_cols)
    throw InputError("amd_order needs a square pattern");
  const index_t n = pattern.n_rows;
  if (n == 0) return Permutation::identity(0);
  using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, long long>;
  std::vector<Eigen::Triplet<double, long long>> trips;
  trips.reserve(pattern.col_indices.size());
  for (index_t i = 0; i < n; ++i)
    for (const index_t j : pattern.row_cols(i)) trips.emplace_back(i, j, 1.0);
  SpMat m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  Eigen::AMDOrdering<long long> amd;
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, long long> perm;
  amd(m, perm);
  std::vector<index_t> fwd(n);
  for (index_t k = 0; k < n; ++k) fwd[k] = perm.indices()(k);
  return Permutation::from_forward(std::move(fwd));
}

}  // namespace hilucsi
