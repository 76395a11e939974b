#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hilucsi/sparse.hpp"

namespace hilucsi {

/// sparse vector as (index, value) pairs
using SparseVec = std::vector<std::pair<index_t, double>>;

/// \brief dropping and deferring thresholds for one level
struct DropParams {
  double alpha = 10.0;    // nnz factor
  double tau = 1e-4;      // drop tolerance
  double kappa_d = 3.0;   // bound on 1/|pivot|
  double kappa_l = 3.0;   // bound on estimated ||L^-1||_inf
  double kappa_u = 3.0;   // bound on estimated ||U^-1||_1

  bool valid() const;
};

/// \brief incremental lower-bound estimator for triangular inverse norms
///
/// Maintains the solution x of T x = b for a unit triangle T grown one
/// row/column per step, with each b_k in {+1,-1} chosen to maximize |x_k|.
/// The running max of |x_k| never exceeds the true inverse norm (infinity
/// norm for L, 1-norm for U).
class InverseNormEstimator {
 public:
  /// |x_k| that a step with this row-dot-solution value would contribute
  static double candidate_from_dot(double dot) { return 1.0 + std::abs(dot); }

  /// append the step, returns the updated bound
  double commit(double dot);

  /// spec-shaped update: the new row/column given sparsely over prior steps
  double update(std::span<const index_t> idx, std::span<const double> vals);

  double kappa() const { return kappa_; }
  std::span<const double> solution() const { return x_; }

 private:
  std::vector<double> x_;
  double kappa_ = 0.0;
};

/// \brief remove small entries, then keep the `limit` largest magnitudes
///
/// An entry v is removed when scale*|v| <= tau. Survivor selection breaks
/// magnitude ties toward the lower index; the result is index-sorted.
void drop_vector(SparseVec &v, index_t limit, double scale, double tau);

/// Eq.-style fill limit: max(ceil(alpha * max(nnz_ref, 0.85*mean_ref)), 1)
index_t nnz_limit(double alpha, index_t nnz_ref, double mean_ref);

/// \brief one factor side (columns of L or rows of U) with linked traversal
///
/// Step data is appended contiguously; `pos` tracks the first entry of each
/// step not yet passed by the pivot sweep, and steps are chained per extended
/// index so the sweep can visit all live entries at the pivot position.
class CroutTriangle {
 public:
  void init(index_t ext_cap) { head_.assign(ext_cap, -1); }

  index_t nsteps() const { return static_cast<index_t>(start_.size()); }

  /// append the step's entries (sorted by extended index, all > pivot)
  void push_step(const SparseVec &v);

  /// f(step j, value) for every live entry at extended position e
  template <class F>
  void visit(index_t e, F &&f) const {
    for (index_t j = head_[e]; j != -1; j = next_[j]) f(j, val_[pos_[j]]);
  }

  /// advance the chain members at e past it (pivot accepted)
  void consume(index_t e);

  /// move the live entries at e to index `tail` (pivot deferred); returns the
  /// number of entries relocated
  index_t relabel(index_t e, index_t tail);

  // raw access for the update sweeps and finalization
  index_t step_begin(index_t j) const { return start_[j]; }
  index_t step_end(index_t j) const {
    return j + 1 < nsteps() ? start_[j + 1] : static_cast<index_t>(idx_.size());
  }
  index_t live_pos(index_t j) const { return pos_[j]; }
  std::span<const index_t> indices() const { return idx_; }
  std::span<const double> values() const { return val_; }

 private:
  std::vector<index_t> idx_;
  std::vector<double> val_;
  std::vector<index_t> start_;  // per step: begin offset into idx_/val_
  std::vector<index_t> head_;   // per ext position: first step of the chain
  std::vector<index_t> next_;   // per step: next step in its chain
  std::vector<index_t> pos_;    // per step: offset of the live entry

  void link(index_t j);
};

/// \brief bi-index storage of both factors with deferral gaps
///
/// Extended indices run over [0, n + defers): position n + g is the g-th
/// deferred row/column pair. The gap is eliminated by finalize(), which fixes
/// the kept-first ordering.
class AugmentedCroutStore {
 public:
  AugmentedCroutStore(index_t n, index_t leading_size, bool symmetric);

  index_t n() const { return n_; }
  index_t m0() const { return m0_; }
  index_t step() const { return step_; }
  index_t defers() const { return defers_; }
  bool symmetric() const { return symmetric_; }
  index_t deferred_step() const { return step_ + defers_; }
  bool exhausted() const { return deferred_step() >= m0_; }

  /// current extended position of an initial level index
  index_t ext_of_initial(index_t i0) const { return pos_of_initial_[i0]; }

  /// defer the current pivot pair to the tail gap position
  void defer_step();

  /// accept the current pivot; u is ignored in symmetric mode
  void accept_step(const SparseVec &l_col, const SparseVec &u_row);

  /// kept-first index of an extended position (call after the sweep is done)
  index_t final_of_ext(index_t e) const;

  /// final -> initial level positions
  Permutation pivot_perm() const;

  /// initial positions of all deferred indices in final order: the static
  /// tail first, then dynamic deferrals in defer order
  std::vector<index_t> deferred_initial() const;

  CroutTriangle l;  // columns of L
  CroutTriangle u;  // rows of U (untouched in symmetric mode)

  std::uint64_t relocations = 0;  // entries moved by deferring

 private:
  index_t n_, m0_;
  bool symmetric_;
  index_t step_ = 0;
  index_t defers_ = 0;
  std::vector<index_t> pos_of_initial_;
  std::vector<index_t> accepted_;          // initial positions in step order
  std::vector<index_t> dynamic_deferred_;  // initial positions in defer order
};

/// \brief one level's factors plus bookkeeping
struct LevelFactor {
  index_t n = 0;   // level size
  index_t m = 0;   // accepted leading block size
  index_t m0 = 0;  // leading size before dynamic deferring
  bool symmetric = false;
  SparseMatrix lb;         // m x m strictly lower part, unit diagonal implicit
  std::vector<double> db;  // m pivots
  SparseMatrix ub;         // m x m strictly upper part, unit diagonal implicit
  SparseMatrix le;         // (n-m) x m
  SparseMatrix uf;         // m x (n-m)
  std::vector<index_t> deferred;  // initial level positions in final order
  Permutation pivot_perm;         // final -> initial within the level
  PermScale perm_scale;           // composed by the driver for application

  std::vector<double> kappa_l_steps;  // running bound after each accepted step
  std::vector<double> kappa_u_steps;
  std::uint64_t crout_work = 0;  // multiply-add count of the level

  index_t factor_nnz() const {
    return lb.nnz() + static_cast<index_t>(db.size()) + ub.nnz() + le.nnz() +
           uf.nnz();
  }
};

/// \brief Crout incomplete LDU of the leading block with dynamic deferring
///
/// `a` must already be equilibrated, statically deferred, and reordered, with
/// the `leading_size` candidate rows first. `nnz_ref_row`/`nnz_ref_col` carry
/// the per-row/column nonzero counts of the original user matrix permuted to
/// level positions, and `mean_nnz_ref` its global average. A result with
/// m == 0 signals that the level collapsed.
LevelFactor factorize_level(const SparseMatrix &a, const DropParams &params,
                            std::span<const index_t> nnz_ref_row,
                            std::span<const index_t> nnz_ref_col,
                            double mean_nnz_ref, index_t leading_size,
                            bool symmetric);

}  // namespace hilucsi
