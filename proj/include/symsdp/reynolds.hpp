#pragma once

// Group averaging of moment matrices (Reynolds operator).
//
// The action of a group element on a moment matrix is a signed permutation
// of rows and columns, implemented as an index gather, never as a dense
// matrix product. Two strategies:
//   naive    - sum over all group elements (pairwise/tree summation)
//   chained  - nested sums over the transversals of a product
//              decomposition; gather passes = sum of transversal sizes

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "symsdp/monomial.hpp"
#include "symsdp/perm_group.hpp"

namespace symsdp {

// out_{jk} = s_j s_k Gamma_{phi^-1(j), phi^-1(k)}
inline Eigen::MatrixXd permute_moment(const Eigen::MatrixXd& gamma,
                                      const SignedPerm& phi) {
  const int n = static_cast<int>(gamma.rows());
  Eigen::MatrixXd tmp(n, n);
  for (int j = 0; j < n; ++j)
    tmp.row(j) = static_cast<double>(phi.inv_sign[j]) * gamma.row(phi.inv_image[j]);
  Eigen::MatrixXd out(n, n);
  for (int k = 0; k < n; ++k)
    out.col(k) = static_cast<double>(phi.inv_sign[k]) * tmp.col(phi.inv_image[k]);
  return out;
}

namespace detail {

inline Eigen::MatrixXd pairwise_average(const std::vector<SignedPerm>& perms,
                                        std::size_t lo, std::size_t hi,
                                        const Eigen::MatrixXd& gamma) {
  if (hi - lo == 1) return permute_moment(gamma, perms[lo]);
  const std::size_t mid = lo + (hi - lo) / 2;
  Eigen::MatrixXd left = pairwise_average(perms, lo, mid, gamma);
  left += pairwise_average(perms, mid, hi, gamma);
  return left;
}

}  // namespace detail

enum class ReynoldsStrategy { Naive, Chained };

class Symmetrizer {
 public:
  // Naive strategy over the full element action list.
  static Symmetrizer naive(std::vector<SignedPerm> element_actions) {
    Symmetrizer s;
    s.strategy_ = ReynoldsStrategy::Naive;
    s.elements_ = std::move(element_actions);
    s.order_ = static_cast<double>(s.elements_.size());
    s.n_ = s.elements_.empty() ? 0 : s.elements_[0].size();
    return s;
  }

  // Chained strategy over transversal actions U_1, ..., U_C.
  static Symmetrizer chained(std::vector<std::vector<SignedPerm>> transversal_actions) {
    Symmetrizer s;
    s.strategy_ = ReynoldsStrategy::Chained;
    s.transversals_ = std::move(transversal_actions);
    s.order_ = 1.0;
    for (const auto& u : s.transversals_) {
      s.order_ *= static_cast<double>(u.size());
      if (!u.empty()) s.n_ = u[0].size();
    }
    return s;
  }

  ReynoldsStrategy strategy() const { return strategy_; }
  double group_order() const { return order_; }
  int dim() const { return n_; }
  const std::vector<SignedPerm>& element_actions() const { return elements_; }
  const std::vector<std::vector<SignedPerm>>& transversal_actions() const {
    return transversals_;
  }

  std::size_t gather_passes_per_apply() const {
    if (strategy_ == ReynoldsStrategy::Naive) return elements_.size();
    std::size_t s = 0;
    for (const auto& u : transversals_) s += u.size();
    return s;
  }

  Eigen::MatrixXd apply(const Eigen::MatrixXd& gamma) const {
    if (strategy_ == ReynoldsStrategy::Naive) {
      if (elements_.empty()) return gamma;
      Eigen::MatrixXd sum =
          detail::pairwise_average(elements_, 0, elements_.size(), gamma);
      return sum / static_cast<double>(elements_.size());
    }
    Eigen::MatrixXd acc = gamma;
    for (auto it = transversals_.rbegin(); it != transversals_.rend(); ++it) {
      Eigen::MatrixXd level =
          detail::pairwise_average(*it, 0, it->size(), acc);
      acc = level / static_cast<double>(it->size());
    }
    return acc;
  }

 private:
  ReynoldsStrategy strategy_ = ReynoldsStrategy::Naive;
  std::vector<SignedPerm> elements_;
  std::vector<std::vector<SignedPerm>> transversals_;
  double order_ = 1.0;
  int n_ = 0;
};

// Builds the monomial-index action of a group and wraps it in a Symmetrizer.
// Prefers the chained strategy when a product decomposition is present;
// falls back to the element list. When both representations are available
// the two averages of a random matrix are compared at construction
// (Frobenius distance < 1e-10) so a broken chain cannot reach the hot path.
inline Symmetrizer make_symmetrizer(const PermGroup& group,
                                    const MonomialSet& mset, int nops,
                                    Rng& rng,
                                    ReynoldsStrategy prefer = ReynoldsStrategy::Chained) {
  std::optional<Symmetrizer> naive, chained;
  if (group.elements) {
    std::vector<SignedPerm> acts;
    acts.reserve(group.elements->size());
    for (const auto& g : *group.elements)
      acts.push_back(monomial_action(g, mset, nops));
    naive = Symmetrizer::naive(std::move(acts));
  }
  if (group.chain) {
    std::vector<std::vector<SignedPerm>> tr;
    for (const auto& u : group.chain->transversals) {
      std::vector<SignedPerm> acts;
      acts.reserve(u.size());
      for (const auto& g : u) acts.push_back(monomial_action(g, mset, nops));
      tr.push_back(std::move(acts));
    }
    chained = Symmetrizer::chained(std::move(tr));
  }
  if (naive && chained) {
    Eigen::MatrixXd probe = goe_matrix(rng, mset.size());
    const double dist = (naive->apply(probe) - chained->apply(probe)).norm();
    if (dist > 1e-10 * std::max(1.0, probe.norm()))
      throw std::runtime_error(
          "make_symmetrizer: naive and chained strategies disagree");
  }
  if (prefer == ReynoldsStrategy::Chained && chained) return *chained;
  if (naive) return *naive;
  if (chained) return *chained;
  throw std::invalid_argument(
      "make_symmetrizer: group carries neither elements nor a chain");
}

}  // namespace symsdp
