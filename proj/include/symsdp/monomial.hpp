#pragma once

// Monomials in the operator variables and the duplicate-free monomial
// generating set indexing the moment matrix.
//
// Deduplication is purely numerical: candidates are evaluated on two
// independent generic realizations and merged when their operator values
// coincide on both (Frobenius distance below 1e-8 of the matrix scale).
// Monomials that evaluate to zero (e.g. products of orthogonal projectors,
// or rank-zero measurement elements) are dropped entirely. Each surviving
// class keeps its (degree, lexicographically) smallest member as the
// representative; the identity monomial is always index 0.

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "symsdp/scenario.hpp"

namespace symsdp {

struct Factor {
  int op;
  bool dag = false;

  friend bool operator==(const Factor& a, const Factor& b) {
    return a.op == b.op && a.dag == b.dag;
  }
};

struct Monomial {
  std::vector<Factor> factors;  // empty = identity

  int degree() const { return static_cast<int>(factors.size()); }

  static Monomial identity() { return {}; }
  static Monomial of(std::initializer_list<int> ops) {
    Monomial m;
    for (int o : ops) m.factors.push_back({o, false});
    return m;
  }

  // encoding used for hashing and lexicographic comparison: op*2 + dag
  std::vector<int> key() const {
    std::vector<int> k;
    k.reserve(factors.size());
    for (const auto& f : factors) k.push_back(f.op * 2 + (f.dag ? 1 : 0));
    return k;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.factors == b.factors;
  }
};

inline Eigen::MatrixXcd evaluate_monomial(const Monomial& m,
                                          const Realization& r, int total_dim) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(total_dim, total_dim);
  for (const auto& f : m.factors)
    out = f.dag ? Eigen::MatrixXcd(out * r.X[f.op].adjoint())
                : Eigen::MatrixXcd(out * r.X[f.op]);
  return out;
}

struct ClosureError : std::runtime_error {
  explicit ClosureError(const std::string& w) : std::runtime_error(w) {}
};

class MonomialSet {
 public:
  const std::vector<Monomial>& monomials() const { return monomials_; }
  int size() const { return static_cast<int>(monomials_.size()); }
  const Monomial& operator[](int j) const { return monomials_[j]; }

  // Representative index of an arbitrary candidate sequence; -1 when the
  // sequence was not among the deduplicated candidates (or was a zero).
  int index_of(const Monomial& m) const {
    auto it = index_.find(m.key());
    return it == index_.end() ? -1 : it->second;
  }

  static MonomialSet build(const Scenario& sc,
                           const std::vector<Monomial>& candidates,
                           const Realization& sample1,
                           const Realization& sample2, double tol = 1e-8) {
    const int td = sc.total_dim();

    // unique raw sequences in (degree, lex) order
    std::vector<Monomial> cands;
    {
      std::unordered_map<std::vector<int>, int, detail::ImageHash> seen;
      for (const auto& m : candidates)
        if (seen.emplace(m.key(), 1).second) cands.push_back(m);
    }
    std::sort(cands.begin(), cands.end(), [](const Monomial& a, const Monomial& b) {
      if (a.degree() != b.degree()) return a.degree() < b.degree();
      return a.key() < b.key();
    });

    const int nc = static_cast<int>(cands.size());
    std::vector<Eigen::VectorXcd> v1(nc), v2(nc);
    double scale = 1.0;
    for (int i = 0; i < nc; ++i) {
      v1[i] = evaluate_monomial(cands[i], sample1, td).reshaped();
      v2[i] = evaluate_monomial(cands[i], sample2, td).reshaped();
      scale = std::max({scale, v1[i].norm(), v2[i].norm()});
    }

    MonomialSet out;
    std::vector<int> reps;  // candidate index of each class representative
    for (int i = 0; i < nc; ++i) {
      const double n1 = v1[i].norm(), n2 = v2[i].norm();
      if (n1 < 1e-10 * scale && n2 < 1e-10 * scale) continue;  // drop zeros
      int rep = -1;
      for (std::size_t c = 0; c < reps.size(); ++c) {
        const int j = reps[c];
        if ((v1[i] - v1[j]).norm() <= tol * std::max(n1, v1[j].norm()) &&
            (v2[i] - v2[j]).norm() <= tol * std::max(n2, v2[j].norm())) {
          rep = static_cast<int>(c);
          break;
        }
      }
      if (rep < 0) {
        rep = static_cast<int>(reps.size());
        reps.push_back(i);
        out.monomials_.push_back(cands[i]);
      }
      out.index_.emplace(cands[i].key(), rep);
    }
    if (out.monomials_.empty() || out.monomials_[0].degree() != 0)
      throw std::invalid_argument(
          "MonomialSet: candidates must contain the identity monomial");
    return out;
  }

 private:
  std::vector<Monomial> monomials_;
  std::unordered_map<std::vector<int>, int, detail::ImageHash> index_;
};

// All products of at most L operators (no daggers), identity included.
inline std::vector<Monomial> all_words_up_to_degree(const Scenario& sc, int L) {
  std::vector<Monomial> out{Monomial::identity()};
  std::size_t level_begin = 0;
  for (int deg = 1; deg <= L; ++deg) {
    const std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (int op = 0; op < sc.num_ops(); ++op) {
        Monomial m = out[i];
        m.factors.push_back({op, false});
        out.push_back(std::move(m));
      }
    }
    level_begin = level_end;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Induced action on monomial indices

// Signed permutation phi(pi) of the monomial index set: image[j] is the
// representative index of pi(s_j) and sign[j] the accumulated sign.
struct SignedPerm {
  std::vector<int> image;
  std::vector<signed char> sign;
  std::vector<int> inv_image;
  std::vector<signed char> inv_sign;

  int size() const { return static_cast<int>(image.size()); }

  void finalize() {
    const int n = size();
    inv_image.assign(n, -1);
    inv_sign.assign(n, 1);
    for (int j = 0; j < n; ++j) {
      if (image[j] < 0 || image[j] >= n || inv_image[image[j]] != -1)
        throw ClosureError("SignedPerm: action is not a bijection");
      inv_image[image[j]] = j;
      inv_sign[image[j]] = sign[j];
    }
  }

  static SignedPerm identity(int n) {
    SignedPerm p;
    p.image.resize(n);
    p.sign.assign(n, 1);
    for (int j = 0; j < n; ++j) p.image[j] = j;
    p.finalize();
    return p;
  }

  bool is_identity() const {
    for (int j = 0; j < size(); ++j)
      if (image[j] != j || sign[j] != 1) return false;
    return true;
  }

  // (a o b)(j) = a(b(j)) with multiplied signs
  friend SignedPerm operator*(const SignedPerm& a, const SignedPerm& b) {
    SignedPerm c;
    c.image.resize(a.size());
    c.sign.resize(a.size());
    for (int j = 0; j < a.size(); ++j) {
      c.image[j] = a.image[b.image[j]];
      c.sign[j] = static_cast<signed char>(a.sign[b.image[j]] * b.sign[j]);
    }
    c.finalize();
    return c;
  }

  friend bool operator==(const SignedPerm& a, const SignedPerm& b) {
    return a.image == b.image && a.sign == b.sign;
  }
};

// phi(pi) for a doubled-domain operator permutation: apply pi to each factor,
// then resolve the image sequence through the duplicate map.
inline SignedPerm monomial_action(const Permutation& doubled_perm,
                                  const MonomialSet& mset, int nops) {
  SignedPerm out;
  out.image.resize(mset.size());
  out.sign.resize(mset.size());
  for (int j = 0; j < mset.size(); ++j) {
    Monomial img;
    int s = 1;
    img.factors.reserve(mset[j].factors.size());
    for (const auto& f : mset[j].factors) {
      const auto [op, fs] = signed_image(doubled_perm, f.op, nops);
      s *= fs;
      img.factors.push_back({op, f.dag});
    }
    const int idx = mset.index_of(img);
    if (idx < 0)
      throw ClosureError(
          "monomial_action: permuted monomial leaves the set (wrong group or "
          "insufficient extra monomials)");
    out.image[j] = idx;
    out.sign[j] = static_cast<signed char>(s);
  }
  out.finalize();
  return out;
}

// Adds group images of all candidates until the list is closed under the
// generators (used to close extra monomials under the symmetry group).
inline std::vector<Monomial> close_candidates_under_group(
    std::vector<Monomial> candidates, const std::vector<Permutation>& gens,
    int nops) {
  std::unordered_map<std::vector<int>, int, detail::ImageHash> seen;
  for (const auto& m : candidates) seen.emplace(m.key(), 1);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (const auto& g : gens) {
      Monomial img;
      img.factors.reserve(candidates[i].factors.size());
      for (const auto& f : candidates[i].factors)
        img.factors.push_back({signed_image(g, f.op, nops).index, f.dag});
      if (seen.emplace(img.key(), 1).second) candidates.push_back(std::move(img));
    }
  }
  return candidates;
}

}  // namespace symsdp
