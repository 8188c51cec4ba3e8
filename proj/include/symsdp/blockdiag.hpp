#pragma once

// Numerical isotypic and irreducible decomposition of the group
// representation acting on the moment-matrix column space.
//
// Both stages work from generic invariant matrices: a GOE sample pushed
// through the Reynolds operator. Eigenspaces of one invariant sample sit
// inside single isotypic components; a second sample connects eigenspace
// clusters belonging to the same component. Inside a component, eigenvalue
// multiplicities of a restricted sample reveal the irrep dimension d_r, and
// the correction factors read off a second restricted sample align all m_r
// copies so invariant blocks take the form L^r (x) 1_{d_r}.
//
// Components of non-real type (the L (x) 1 verification fails) are kept at
// isotypic granularity; downstream code treats such blocks whole.

#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "symsdp/reynolds.hpp"
#include "symsdp/sampler.hpp"

namespace symsdp {

struct DecompositionError : std::runtime_error {
  explicit DecompositionError(const std::string& w) : std::runtime_error(w) {}
};

// R(G) for G drawn from the Gaussian Orthogonal Ensemble.
inline Eigen::MatrixXd sample_invariant(const Symmetrizer& sym, int n,
                                        Rng& rng) {
  return sym.apply(goe_matrix(rng, n));
}

// ---------------------------------------------------------------------------
// Isotypic decomposition

struct IsotypicBasis {
  Eigen::MatrixXd u;                            // orthogonal n x n
  std::vector<std::pair<int, int>> components;  // (offset, dim)

  std::vector<int> component_dims() const {
    std::vector<int> d;
    for (const auto& c : components) d.push_back(c.second);
    return d;
  }
};

namespace detail {

// Splits sorted eigenvalues into clusters at relative gaps above `gap_tol`
// of the spectral spread.
inline std::vector<std::pair<int, int>> cluster_eigenvalues(
    const Eigen::VectorXd& evals, double gap_tol = 1e-6) {
  const int n = static_cast<int>(evals.size());
  const double spread = std::max(evals(n - 1) - evals(0), 1e-300);
  std::vector<std::pair<int, int>> clusters;
  int start = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || evals(i) - evals(i - 1) > gap_tol * spread) {
      clusters.emplace_back(start, i - start);
      start = i;
    }
  }
  return clusters;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace detail

// Eigendecompose one invariant sample, then merge eigenvalue clusters that a
// second invariant sample connects; connected clusters span one isotypic
// component. Validated against a third sample (off-component leakage below
// `leak_tol` of its norm), with resampling retries.
inline IsotypicBasis isotypic(const Symmetrizer& sym, int n, Rng& rng,
                              int max_retries = 4, double leak_tol = 1e-8) {
  for (int attempt = 0;; ++attempt) {
    Rng r = rng.child(0x150 + attempt);
    Eigen::MatrixXd lambda1 = sample_invariant(sym, n, r);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lambda1);
    const Eigen::MatrixXd& t = eig.eigenvectors();
    auto clusters = detail::cluster_eigenvalues(eig.eigenvalues());

    Eigen::MatrixXd lambda2 = sample_invariant(sym, n, r);
    Eigen::MatrixXd b = t.transpose() * lambda2 * t;
    const double tau = 1e-8 * b.cwiseAbs().maxCoeff();

    const int nc = static_cast<int>(clusters.size());
    detail::UnionFind uf(nc);
    for (int c1 = 0; c1 < nc; ++c1)
      for (int c2 = c1 + 1; c2 < nc; ++c2) {
        const auto [o1, d1] = clusters[c1];
        const auto [o2, d2] = clusters[c2];
        if (b.block(o1, o2, d1, d2).cwiseAbs().maxCoeff() > tau)
          uf.unite(c1, c2);
      }

    // contiguous components, ordered by first cluster
    std::vector<std::vector<int>> groups(nc);
    for (int c = 0; c < nc; ++c) groups[uf.find(c)].push_back(c);
    IsotypicBasis out;
    out.u.resize(n, n);
    int col = 0;
    for (int root = 0; root < nc; ++root) {
      if (groups[root].empty()) continue;
      const int offset = col;
      for (int c : groups[root]) {
        const auto [o, d] = clusters[c];
        out.u.middleCols(col, d) = t.middleCols(o, d);
        col += d;
      }
      out.components.emplace_back(offset, col - offset);
    }

    // validation on a fresh sample
    Eigen::MatrixXd lambda3 = sample_invariant(sym, n, r);
    Eigen::MatrixXd v = out.u.transpose() * lambda3 * out.u;
    for (const auto& [o, d] : out.components) v.block(o, o, d, d).setZero();
    const bool ok = v.norm() <= leak_tol * lambda3.norm();
    if (ok) return out;
    if (attempt + 1 >= max_retries)
      throw DecompositionError(
          "isotypic: spectrum did not separate after retries");
  }
}

// ---------------------------------------------------------------------------
// Irreducible decomposition

struct IrrepComponent {
  int offset;        // column offset in u
  int dim;           // isotypic component dimension D
  int irrep_dim;     // d_r (equals dim when multiplicity is 1)
  int multiplicity;  // m_r
  bool real_type;    // false: left at isotypic granularity
};

struct IrrepBasis {
  Eigen::MatrixXd u;  // orthogonal n x n
  std::vector<IrrepComponent> components;

  // One block per component: m_r x m_r when the L (x) 1 structure holds,
  // the full component block otherwise.
  BlockStructure block_structure() const {
    BlockStructure bs;
    for (const auto& c : components)
      bs.dims.push_back(c.real_type ? c.multiplicity : c.dim);
    return bs;
  }
  int num_fallback_components() const {
    int k = 0;
    for (const auto& c : components) k += c.real_type ? 0 : 1;
    return k;
  }
};

namespace detail {

// Orthogonal polar factor (projection onto the orthogonal group).
inline Eigen::MatrixXd polar_orthogonal(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

// Average of the d x d diagonal sub-blocks: L_ij = (1/d) sum_k B[(i,k),(j,k)].
inline Eigen::MatrixXd kron_compress(const Eigen::MatrixXd& b, int m, int d) {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double s = 0;
      for (int k = 0; k < d; ++k) s += b(i * d + k, j * d + k);
      l(i, j) = s / d;
    }
  return (l + l.transpose()) / 2.0;
}

inline Eigen::MatrixXd kron_with_identity(const Eigen::MatrixXd& l, int d) {
  const int m = static_cast<int>(l.rows());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m * d, m * d);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < d; ++k) out(i * d + k, j * d + k) = l(i, j);
  return out;
}

}  // namespace detail

// Refines an isotypic basis into an irrep-adapted one. Per component:
// eigenvalue multiplicities of one restricted invariant sample give d_r; the
// first block row of a second sample in that eigenbasis gives the correction
// factors (re-orthonormalized through their polar factor); a third sample
// verifies the L (x) 1 form. Components failing verification are reported as
// isotypic-only.
inline IrrepBasis irreps(const Symmetrizer& sym, const IsotypicBasis& iso,
                         Rng& rng, int max_retries = 3,
                         double verify_tol = 1e-7) {
  const int n = static_cast<int>(iso.u.rows());
  IrrepBasis out;
  out.u = iso.u;
  for (const auto& [offset, dim] : iso.components) {
    const auto cols = out.u.middleCols(offset, dim);
    IrrepComponent comp{offset, dim, dim, 1, true};
    bool done = false;
    for (int attempt = 0; attempt < max_retries && !done; ++attempt) {
      Rng r = rng.child(0x177 * (offset + 1) + attempt);
      Eigen::MatrixXd a = cols.transpose() * sample_invariant(sym, n, r) * cols;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
      auto clusters = detail::cluster_eigenvalues(eig.eigenvalues());
      const int m = static_cast<int>(clusters.size());
      const int d = clusters[0].second;
      bool uniform = (m * d == dim);
      for (const auto& c : clusters) uniform = uniform && (c.second == d);
      if (!uniform) continue;  // unluckily split spectrum; resample

      if (m == 1) {
        comp.irrep_dim = dim;
        comp.multiplicity = 1;
        comp.real_type = true;
        done = true;
        break;
      }

      const Eigen::MatrixXd& p = eig.eigenvectors();
      Eigen::MatrixXd hat = p.transpose() *
                            (cols.transpose() * sample_invariant(sym, n, r) * cols) *
                            p;

      // correction factors from a reference block row
      Eigen::MatrixXd ucomp(dim, dim);
      bool built = false;
      for (int ref = 0; ref < m && !built; ++ref) {
        Eigen::MatrixXd cand(dim, dim);
        cand.setZero();
        bool ok = true;
        for (int j = 0; j < m && ok; ++j) {
          if (j == ref) {
            cand.block(j * d, j * d, d, d).setIdentity();
            continue;
          }
          Eigen::MatrixXd blk = hat.block(ref * d, j * d, d, d).transpose();
          Eigen::JacobiSVD<Eigen::MatrixXd> svd(
              blk, Eigen::ComputeFullU | Eigen::ComputeFullV);
          const auto& sv = svd.singularValues();
          // scalar times orthogonal: singular values must be equal and
          // clearly nonzero
          if (sv(0) < 1e-6 || sv(d - 1) < 0.5 * sv(0)) {
            ok = false;
            break;
          }
          cand.block(j * d, j * d, d, d) =
              svd.matrixU() * svd.matrixV().transpose();
        }
        if (ok) {
          ucomp = p * cand;
          built = true;
        }
      }
      if (!built) continue;  // resample

      // verify the L (x) 1 structure on a third sample
      Eigen::MatrixXd check =
          ucomp.transpose() *
          (cols.transpose() * sample_invariant(sym, n, r) * cols) * ucomp;
      Eigen::MatrixXd l = detail::kron_compress(check, m, d);
      const double res =
          (check - detail::kron_with_identity(l, d)).norm() / check.norm();
      if (res < verify_tol) {
        out.u.middleCols(offset, dim) = cols * ucomp;
        comp.irrep_dim = d;
        comp.multiplicity = m;
        comp.real_type = true;
        done = true;
      } else if (attempt + 1 == max_retries) {
        break;  // leave as fallback
      }
    }
    if (!done) {
      // non-real representation type (or undetected structure):
      // keep the component at isotypic granularity
      comp.irrep_dim = dim;
      comp.multiplicity = 1;
      comp.real_type = false;
    }
    out.components.push_back(comp);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Block extraction

struct BlockVector {
  std::vector<Eigen::MatrixXd> blocks;
};

// Blocks of a symmetrized moment matrix in the irrep basis. For real-type
// components the d_r copies are averaged down to an m_r x m_r block; the
// reported residual is the distance to the exact L (x) 1 structure relative
// to the component norm.
inline BlockVector extract_blocks(const IrrepBasis& basis,
                                  const Eigen::MatrixXd& gamma_sym,
                                  double* max_residual = nullptr) {
  BlockVector out;
  double worst = 0.0;
  Eigen::MatrixXd gu = gamma_sym.selfadjointView<Eigen::Lower>() * basis.u;
  for (const auto& c : basis.components) {
    Eigen::MatrixXd blk = basis.u.middleCols(c.offset, c.dim).transpose() *
                          gu.middleCols(c.offset, c.dim);
    blk = ((blk + blk.transpose()) / 2.0).eval();
    if (!c.real_type) {
      out.blocks.push_back(std::move(blk));
      continue;
    }
    Eigen::MatrixXd l = detail::kron_compress(blk, c.multiplicity, c.irrep_dim);
    const double bn = blk.norm();
    if (bn > 0)
      worst = std::max(
          worst,
          (blk - detail::kron_with_identity(l, c.irrep_dim)).norm() / bn);
    out.blocks.push_back(std::move(l));
  }
  if (max_residual) *max_residual = worst;
  return out;
}

// ---------------------------------------------------------------------------
// Direct block sampling

// Computes the blocks of the symmetrized moment matrix straight from the
// precomputed hatted monomials, without forming the n x n moment matrix or
// applying the explicit Reynolds operator. For real-type components the fast
// projection needs only sum_r m_r(m_r+1)/2 * d_r inner products; non-real
// components are formed whole and averaged with dense restricted
// representations of the transversal elements.
class DirectBlockSampler {
 public:
  DirectBlockSampler(const Scenario& sc, const MonomialSet& mset,
                     const IrrepBasis& basis, const Symmetrizer& sym)
      : sc_(sc), mset_(mset), basis_(basis) {
    for (const auto& c : basis_.components) {
      if (c.real_type) continue;
      fallback_reps_.push_back(restricted_reps(sym, c));
      fallback_comp_.push_back(c);
    }
  }

  BlockVector sample(const Realization& r) const {
    Eigen::MatrixXcd s = hatted_monomials(sc_, r, mset_);
    Eigen::MatrixXcd omega = s * basis_.u;
    BlockVector out;
    int fb = 0;
    for (const auto& c : basis_.components) {
      if (c.real_type) {
        const int m = c.multiplicity, d = c.irrep_dim;
        Eigen::MatrixXd l(m, m);
        for (int i = 0; i < m; ++i)
          for (int j = i; j < m; ++j) {
            double acc = 0;
            for (int k = 0; k < d; ++k) {
              acc += (omega.col(c.offset + i * d + k).adjoint() *
                      omega.col(c.offset + j * d + k))
                         .real()(0);
              ++inner_products_;
            }
            l(i, j) = l(j, i) = acc / d;
          }
        out.blocks.push_back(std::move(l));
      } else {
        Eigen::MatrixXcd oc = omega.middleCols(c.offset, c.dim);
        Eigen::MatrixXd blk = (oc.adjoint() * oc).real();
        blk = ((blk + blk.transpose()) / 2.0).eval();
        inner_products_ += static_cast<std::size_t>(c.dim) * (c.dim + 1) / 2;
        out.blocks.push_back(average_fallback(fb, blk));
        ++fb;
      }
    }
    return out;
  }

  std::size_t inner_products() const { return inner_products_; }

 private:
  // U_c^T M_u U_c for every transversal element u (chained layout), or for
  // every group element when the symmetrizer is naive.
  std::vector<std::vector<Eigen::MatrixXd>> restricted_reps(
      const Symmetrizer& sym, const IrrepComponent& c) const {
    std::vector<std::vector<Eigen::MatrixXd>> reps;
    auto restrict_one = [&](const SignedPerm& phi) {
      const auto cols = basis_.u.middleCols(c.offset, c.dim);
      Eigen::MatrixXd moved(basis_.u.rows(), c.dim);
      // rows of M_phi U: (M U)_{j,.} = sign * U_{phi^-1(j),.}
      for (int j = 0; j < basis_.u.rows(); ++j)
        moved.row(j) =
            static_cast<double>(phi.inv_sign[j]) * cols.row(phi.inv_image[j]);
      return Eigen::MatrixXd(cols.transpose() * moved);
    };
    for (const auto& level : sym.transversal_actions()) {
      std::vector<Eigen::MatrixXd> lvl;
      for (const auto& phi : level) lvl.push_back(restrict_one(phi));
      reps.push_back(std::move(lvl));
    }
    if (reps.empty()) {
      std::vector<Eigen::MatrixXd> lvl;
      for (const auto& phi : sym.element_actions()) lvl.push_back(restrict_one(phi));
      reps.push_back(std::move(lvl));
    }
    return reps;
  }

  Eigen::MatrixXd average_fallback(int fb, const Eigen::MatrixXd& blk) const {
    Eigen::MatrixXd acc = blk;
    for (auto it = fallback_reps_[fb].rbegin(); it != fallback_reps_[fb].rend();
         ++it) {
      Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(acc.rows(), acc.cols());
      for (const auto& rep : *it) sum += rep * acc * rep.transpose();
      acc = sum / static_cast<double>(it->size());
    }
    return ((acc + acc.transpose()) / 2.0).eval();
  }

  const Scenario& sc_;
  const MonomialSet& mset_;
  const IrrepBasis& basis_;
  std::vector<std::vector<std::vector<Eigen::MatrixXd>>> fallback_reps_;
  std::vector<IrrepComponent> fallback_comp_;
  mutable std::size_t inner_products_ = 0;
};

}  // namespace symsdp
