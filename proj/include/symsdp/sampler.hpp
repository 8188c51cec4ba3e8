#pragma once

// Moment-matrix evaluation and rank-saturated basis construction.
//
// One moment sample is Gamma_{jk} = Re Tr[ s_j(X)K )^dag ( s_k(X)K ) ] for a
// generic realization X, K. Basis construction follows the batched sampling
// loop: draw B samples, append, test the numerical rank of the vectorized
// set, stop once the sample count exceeds the rank. The first r samples form
// the basis; the next one is kept for the consistency check.
//
// Samples are vectorized through a BlockStructure using the isometric
// "svec" convention (off-diagonal entries scaled by sqrt(2)), so Euclidean
// norms of vectors equal Frobenius norms of the block matrices.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "symsdp/monomial.hpp"
#include "symsdp/scenario.hpp"

namespace symsdp {

// Monomial values contracted with the Kraus operator and flattened to
// columns: column j is vec(s_j(X)) for the tracial family, or s_j(X)|psi>
// for the pure-state family. The moment matrix is the real Gram matrix.
inline Eigen::MatrixXcd hatted_monomials(const Scenario& sc,
                                         const Realization& r,
                                         const MonomialSet& mset) {
  const int td = sc.total_dim();
  const bool pure = sc.kraus == KrausFamily::PureState;
  Eigen::MatrixXcd s(pure ? td : td * td, mset.size());
  for (int j = 0; j < mset.size(); ++j) {
    Eigen::MatrixXcd m = evaluate_monomial(mset[j], r, td);
    if (pure)
      s.col(j) = m * r.psi;
    else
      s.col(j) = m.reshaped();
  }
  return s;
}

inline Eigen::MatrixXd moment_matrix(const Scenario& sc, const Realization& r,
                                     const MonomialSet& mset) {
  Eigen::MatrixXcd s = hatted_monomials(sc, r, mset);
  Eigen::MatrixXd g = (s.adjoint() * s).real();
  return ((g + g.transpose()) / 2.0).eval();
}

// ---------------------------------------------------------------------------
// Block structure and isometric vectorization

struct BlockStructure {
  std::vector<int> dims;

  static BlockStructure single(int n) { return BlockStructure{{n}}; }

  int vec_dim() const {
    int v = 0;
    for (int d : dims) v += d * (d + 1) / 2;
    return v;
  }
  int total_matrix_dim() const {
    int t = 0;
    for (int d : dims) t += d;
    return t;
  }
};

inline void svec_block(const Eigen::MatrixXd& m, double* out) {
  const double s2 = std::sqrt(2.0);
  int k = 0;
  for (int j = 0; j < m.cols(); ++j) {
    for (int i = 0; i <= j; ++i) out[k++] = (i == j) ? m(i, j) : s2 * m(i, j);
  }
}

inline Eigen::MatrixXd unsvec_block(const double* in, int d) {
  const double inv = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXd m(d, d);
  int k = 0;
  for (int j = 0; j < d; ++j)
    for (int i = 0; i <= j; ++i) {
      const double v = (i == j) ? in[k] : in[k] * inv;
      m(i, j) = v;
      m(j, i) = v;
      ++k;
    }
  return m;
}

inline Eigen::VectorXd svec_blocks(const std::vector<Eigen::MatrixXd>& blocks,
                                   const BlockStructure& bs) {
  Eigen::VectorXd v(bs.vec_dim());
  int off = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    svec_block(blocks[b], v.data() + off);
    off += bs.dims[b] * (bs.dims[b] + 1) / 2;
  }
  return v;
}

inline std::vector<Eigen::MatrixXd> unsvec_blocks(const Eigen::VectorXd& v,
                                                  const BlockStructure& bs) {
  std::vector<Eigen::MatrixXd> blocks;
  int off = 0;
  for (int d : bs.dims) {
    blocks.push_back(unsvec_block(v.data() + off, d));
    off += d * (d + 1) / 2;
  }
  return blocks;
}

// ---------------------------------------------------------------------------
// Basis construction (rank-saturated affine basis)

struct RankSaturationError : std::runtime_error {
  explicit RankSaturationError(const std::string& w) : std::runtime_error(w) {}
};

// One vectorized (possibly symmetrized / block-compressed) moment sample
// with its objective value.
struct SampleVector {
  Eigen::VectorXd v;
  double objective;
};

using SampleProducer = std::function<SampleVector(std::uint64_t index)>;

struct SampleBasis {
  Eigen::MatrixXd rows;            // (rank+1) x vec_dim, last row = check sample
  std::vector<double> objectives;  // rank+1 values
  int rank = 0;
  int samples_drawn = 0;
  BlockStructure blocks;

  Eigen::VectorXd basis_row(int i) const { return rows.row(i); }
};

namespace detail {

// Incremental row-space tracker. Rows are r_i = t_i Q with Q orthonormal
// (classical Gram-Schmidt with one reorthogonalization pass), so the
// singular values of the sample set equal those of the small coefficient
// matrix T.
class RowSpace {
 public:
  explicit RowSpace(int n) : n_(n) {}

  void add(const Eigen::VectorXd& row) {
    const int r = q_rows_;
    const int k = t_rows_;
    grow_t(k + 1);
    t_.row(k).setZero();
    Eigen::VectorXd res = row;
    for (int pass = 0; pass < 2; ++pass) {
      if (r == 0) break;
      Eigen::VectorXd c = q_.topRows(r) * res;
      res.noalias() -= q_.topRows(r).transpose() * c;
      t_.row(k).head(r) += c.transpose();
    }
    const double rn = res.norm();
    if (rn > 1e-13 * std::max(1.0, row.norm())) {
      grow_q(r + 1);
      q_.row(r) = res / rn;
      t_(k, r) = rn;
    }
    ++t_rows_;
  }

  // Numerical rank with the relative threshold
  // sigma > max(#rows, n) * sigma_max * 2^-40.
  int rank() const { return rank_of_first(t_rows_); }

  int rank_of_first(int count) const {
    const int k = std::min(count, t_rows_);
    if (k == 0 || q_rows_ == 0) return 0;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(t_.topLeftCorner(k, q_rows_));
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    const double thresh = std::max(k, n_) * sv(0) * std::pow(2.0, -40.0);
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > thresh) ++r;
    return r;
  }

 private:
  void grow_q(int rows) {
    if (rows > q_.rows()) {
      Eigen::MatrixXd bigger(std::max<int>(2 * rows, 32), n_);
      if (q_rows_ > 0) bigger.topRows(q_rows_) = q_.topRows(q_rows_);
      q_ = std::move(bigger);
    }
    q_rows_ = rows;
  }
  void grow_t(int rows) {
    if (rows > t_.rows() || q_rows_ + 1 > t_.cols()) {
      Eigen::MatrixXd bigger = Eigen::MatrixXd::Zero(
          std::max<int>(2 * rows, 64), std::max<int>(2 * (q_rows_ + 1), 64));
      if (t_rows_ > 0 && t_.cols() > 0)
        bigger.topLeftCorner(t_rows_, t_.cols()) = t_.topRows(t_rows_);
      t_ = std::move(bigger);
    }
  }

  int n_;
  Eigen::MatrixXd q_;  // orthonormal rows (q_rows_ x n_)
  Eigen::MatrixXd t_;  // coefficients (t_rows_ x q_rows_)
  int q_rows_ = 0;
  int t_rows_ = 0;
};

}  // namespace detail

// Batched sampling loop ("until the sample count exceeds the rank").
inline SampleBasis build_basis(const SampleProducer& producer, int vec_dim,
                               const BlockStructure& blocks, int batch = 100,
                               int max_batches = 200) {
  if (batch < 1) throw std::invalid_argument("build_basis: batch must be >= 1");
  detail::RowSpace space(vec_dim);
  std::vector<Eigen::VectorXd> raw;
  std::vector<double> objectives;
  int rank = 0;
  bool saturated = false;
  for (int b = 0; b < max_batches && !saturated; ++b) {
    for (int i = 0; i < batch; ++i) {
      SampleVector s = producer(raw.size());
      if (s.v.size() != vec_dim)
        throw std::invalid_argument("build_basis: producer dimension mismatch");
      space.add(s.v);
      raw.push_back(std::move(s.v));
      objectives.push_back(s.objective);
    }
    rank = space.rank();
    saturated = static_cast<int>(raw.size()) > rank;
  }
  if (!saturated)
    throw RankSaturationError(
        "build_basis: rank did not saturate within the iteration cap "
        "(numerically unstable scenario)");
  if (space.rank_of_first(rank) != rank)
    throw RankSaturationError(
        "build_basis: leading samples unexpectedly dependent");

  SampleBasis out;
  out.rank = rank;
  out.samples_drawn = static_cast<int>(raw.size());
  out.blocks = blocks;
  out.rows.resize(rank + 1, vec_dim);
  out.objectives.assign(objectives.begin(), objectives.begin() + rank + 1);
  for (int i = 0; i <= rank; ++i) out.rows.row(i) = raw[i];
  return out;
}

// ---------------------------------------------------------------------------
// Consistency check

struct ConsistencyReport {
  bool pass = false;
  double matrix_residual = 0.0;     // relative
  double objective_residual = 0.0;  // relative
  Eigen::VectorXd coefficients;
};

// Least-squares fit of the held-out sample on the basis; both the matrix
// residual and the objective prediction must come out below eps. Failure
// means the degree bound L is insufficient for the objective, or precision
// was lost.
inline ConsistencyReport consistency_check(const SampleBasis& basis,
                                           double eps = 1e-6) {
  const int r = basis.rank;
  ConsistencyReport rep;
  Eigen::MatrixXd a = basis.rows.topRows(r).transpose();  // vec_dim x r
  Eigen::VectorXd g = basis.rows.row(r);
  rep.coefficients = a.householderQr().solve(g);
  const double mres = (a * rep.coefficients - g).norm();
  rep.matrix_residual = mres / std::max(1.0, g.norm());
  double pfit = 0.0;
  for (int i = 0; i < r; ++i) pfit += rep.coefficients(i) * basis.objectives[i];
  rep.objective_residual = std::abs(pfit - basis.objectives[r]) /
                           std::max(1.0, std::abs(basis.objectives[r]));
  rep.pass = rep.matrix_residual < eps && rep.objective_residual < eps;
  return rep;
}

}  // namespace symsdp
