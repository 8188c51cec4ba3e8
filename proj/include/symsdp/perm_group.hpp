#pragma once

// Finite permutation groups given by generators.
//
// Three services back the rest of the engine:
//   * enumerate_group   - explicit closure, deterministic lexicographic order
//   * orbit             - orbit of a point under the generated group
//   * stabilizer_chain  - product decomposition U_1 ... U_C from a
//                         base-and-strong-generating-set (Schreier-Sims),
//                         used for fast group averaging
//
// The chain is built with a randomised sifting pass first, then a
// deterministic Schreier-generator verification pass that repairs any gap,
// so the returned decomposition is always exact.

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "symsdp/perm.hpp"
#include "symsdp/rng.hpp"

namespace symsdp {

struct OrderCapExceeded : std::runtime_error {
  explicit OrderCapExceeded(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {
struct ImageHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ v.size();
    for (int x : v) h = splitmix64(h ^ static_cast<std::uint64_t>(x));
    return static_cast<std::size_t>(h);
  }
};
}  // namespace detail

// Closure of the generators under composition, sorted lexicographically on
// image sequences. Throws OrderCapExceeded beyond `cap` elements.
inline std::vector<Permutation> enumerate_group(
    const std::vector<Permutation>& generators, std::uint64_t cap = 10000000) {
  if (generators.empty())
    throw std::invalid_argument("enumerate_group: no generators");
  const int n = generators[0].size();
  for (const auto& g : generators)
    if (g.size() != n)
      throw std::invalid_argument("enumerate_group: mixed domain sizes");

  std::unordered_set<std::vector<int>, detail::ImageHash> seen;
  std::vector<Permutation> frontier{Permutation::identity(n)};
  seen.insert(frontier[0].images());
  std::vector<Permutation> all = frontier;
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const auto& e : frontier) {
      for (const auto& g : generators) {
        Permutation p = g * e;
        if (seen.insert(p.images()).second) {
          if (seen.size() > cap)
            throw OrderCapExceeded("enumerate_group: order cap exceeded");
          all.push_back(p);
          next.push_back(std::move(p));
        }
      }
    }
    frontier = std::move(next);
  }
  std::sort(all.begin(), all.end());
  return all;
}

inline std::vector<int> orbit(const std::vector<Permutation>& generators,
                              int point) {
  if (!generators.empty() && (point < 0 || point >= generators[0].size()))
    throw std::invalid_argument("orbit: point outside domain");
  std::vector<int> out{point};
  std::unordered_set<int> seen{point};
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const auto& g : generators) {
      int q = g(out[i]);
      if (seen.insert(q).second) out.push_back(q);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Sets U_1, ..., U_C of permutations such that every group element is a
// unique product u_1 u_2 ... u_C.
struct ProductDecomposition {
  std::vector<std::vector<Permutation>> transversals;

  double order_double() const {
    double o = 1.0;
    for (const auto& u : transversals) o *= static_cast<double>(u.size());
    return o;
  }
  std::optional<std::uint64_t> order_exact() const {
    std::uint64_t o = 1;
    for (const auto& u : transversals) {
      const std::uint64_t s = u.size();
      if (s == 0) return std::nullopt;
      if (o > std::numeric_limits<std::uint64_t>::max() / s) return std::nullopt;
      o *= s;
    }
    return o;
  }
  std::size_t sum_of_transversal_sizes() const {
    std::size_t s = 0;
    for (const auto& u : transversals) s += u.size();
    return s;
  }
};

namespace detail {

// Base and strong generating set with per-level Schreier orbits.
// sgens_[i] holds the strong generators fixing base_[0..i-1]; the sets are
// kept nested (a generator installed at level j is installed at every level
// above it as well), which the Sims verification in complete() relies on.
class Bsgs {
 public:
  explicit Bsgs(int degree) : degree_(degree) {}

  int levels() const { return static_cast<int>(base_.size()); }

  std::pair<Permutation, int> sift(Permutation g, int start = 0) const {
    for (int i = start; i < levels(); ++i) {
      const int gamma = g(base_[i]);
      const int p = pos_[i][gamma];
      if (p < 0) return {std::move(g), i};
      g = transversals_[i][p].inverse() * g;
    }
    return {std::move(g), levels()};
  }

  // Installs a residue that stuck at `level`; it fixes base_[0..level-1], so
  // it is a valid strong generator for every level up to `level`. Adds a new
  // base point first when the residue ran off the end of the chain.
  void add_strong_generator(const Permutation& g, int level) {
    if (g.is_identity()) return;
    if (level == levels()) {
      int moved = -1;
      for (int i = 0; i < degree_; ++i)
        if (g(i) != i) { moved = i; break; }
      add_level(moved);
    }
    for (int l = 0; l <= level && l < levels(); ++l) {
      sgens_[l].push_back(g);
      rebuild_orbit(l);
    }
  }

  // Sims verification: every Schreier generator of every level must sift to
  // the identity through the rest of the chain. Repairs the chain where the
  // test fails, so on return the BSGS is complete.
  void complete() {
    int i = levels() - 1;
    while (i >= 0) {
      bool clean = true;
      for (std::size_t oi = 0; oi < orbits_[i].size() && clean; ++oi) {
        const auto& u_gamma = transversals_[i][oi];
        for (const auto& s : sgens_[i]) {
          const int delta = s(orbits_[i][oi]);
          const auto& u_delta = transversals_[i][pos_[i][delta]];
          Permutation schreier = u_delta.inverse() * (s * u_gamma);
          auto [res, j] = sift(std::move(schreier), i + 1);
          if (!res.is_identity()) {
            add_strong_generator(res, j);
            i = std::min(j, levels() - 1);
            clean = false;
            break;
          }
        }
      }
      if (clean) --i;
    }
  }

  ProductDecomposition decomposition() const {
    ProductDecomposition d;
    for (int i = 0; i < levels(); ++i)
      if (transversals_[i].size() > 1) d.transversals.push_back(transversals_[i]);
    return d;
  }

  void seed_from(const std::vector<Permutation>& generators) {
    for (const auto& g : generators) {
      auto [res, level] = sift(g);
      add_strong_generator(res, level);
    }
  }

 private:
  void add_level(int point) {
    base_.push_back(point);
    sgens_.emplace_back();
    orbits_.emplace_back();
    transversals_.emplace_back();
    pos_.emplace_back();
    rebuild_orbit(levels() - 1);
  }

  // BFS over the orbit keeps transversal representatives deterministic.
  void rebuild_orbit(int level) {
    auto& orb = orbits_[level];
    auto& tra = transversals_[level];
    orb.assign(1, base_[level]);
    tra.assign(1, Permutation::identity(degree_));
    pos_[level].assign(degree_, -1);
    pos_[level][base_[level]] = 0;
    for (std::size_t i = 0; i < orb.size(); ++i) {
      for (const auto& g : sgens_[level]) {
        int q = g(orb[i]);
        if (pos_[level][q] < 0) {
          pos_[level][q] = static_cast<int>(orb.size());
          orb.push_back(q);
          tra.push_back(g * tra[i]);
        }
      }
    }
  }

  int degree_;
  std::vector<int> base_;
  std::vector<std::vector<Permutation>> sgens_;
  std::vector<std::vector<int>> orbits_;
  std::vector<std::vector<Permutation>> transversals_;
  std::vector<std::vector<int>> pos_;
};

}  // namespace detail

// Product decomposition from a stabilizer chain: randomised Schreier-Sims
// followed by the deterministic verification/repair pass.
inline ProductDecomposition stabilizer_chain(
    const std::vector<Permutation>& generators, std::uint64_t seed = 1) {
  if (generators.empty())
    throw std::invalid_argument("stabilizer_chain: no generators");
  const int n = generators[0].size();
  for (const auto& g : generators)
    if (g.size() != n)
      throw std::invalid_argument("stabilizer_chain: mixed domain sizes");

  bool all_trivial = true;
  for (const auto& g : generators) all_trivial = all_trivial && g.is_identity();
  if (all_trivial) return ProductDecomposition{};

  detail::Bsgs bsgs(n);
  bsgs.seed_from(generators);

  Rng rng(seed ^ 0x5343484153ULL);
  int clean_streak = 0;
  Permutation w = Permutation::identity(n);
  while (clean_streak < 16) {
    w = generators[rng.uniform_index(generators.size())] * w;
    if (rng.uniform() < 0.3)
      w = w * generators[rng.uniform_index(generators.size())];
    auto [res, level] = bsgs.sift(w);
    if (res.is_identity()) {
      ++clean_streak;
    } else {
      clean_streak = 0;
      bsgs.add_strong_generator(res, level);
    }
  }

  bsgs.complete();
  return bsgs.decomposition();
}

// Elements of a product decomposition, multiplied out. Intended for
// verification on small groups.
inline std::vector<Permutation> expand_decomposition(
    const ProductDecomposition& d, int degree, std::uint64_t cap = 2000000) {
  std::vector<Permutation> out{Permutation::identity(degree)};
  for (auto it = d.transversals.rbegin(); it != d.transversals.rend(); ++it) {
    if (out.size() * it->size() > cap)
      throw OrderCapExceeded("expand_decomposition: cap exceeded");
    std::vector<Permutation> next;
    next.reserve(out.size() * it->size());
    for (const auto& u : *it)
      for (const auto& tail : out) next.push_back(u * tail);
    out = std::move(next);
  }
  return out;
}

// Group defined by generators, with optional explicit element list and
// optional product decomposition. Fill the optional parts at construction
// time; the object is immutable afterwards.
struct PermGroup {
  std::vector<Permutation> generators;
  std::optional<std::vector<Permutation>> elements;
  std::optional<ProductDecomposition> chain;

  int degree() const { return generators.empty() ? 0 : generators[0].size(); }

  static PermGroup from_generators(std::vector<Permutation> gens) {
    PermGroup g;
    g.generators = std::move(gens);
    return g;
  }

  PermGroup& with_elements(std::uint64_t cap = 10000000) {
    if (!elements) elements = enumerate_group(generators, cap);
    return *this;
  }

  PermGroup& with_chain(std::uint64_t seed = 1) {
    if (!chain) {
      chain = stabilizer_chain(generators, seed);
      if (elements &&
          chain->order_exact().value_or(0) != elements->size()) {
        // A wrong chain would corrupt every group average; fall back to the
        // one decomposition that is trivially correct.
        chain = ProductDecomposition{{*elements}};
      }
    }
    return *this;
  }

  double order_double() const {
    if (elements) return static_cast<double>(elements->size());
    if (chain) return chain->order_double();
    throw std::logic_error("PermGroup: order unknown (no elements, no chain)");
  }

  std::optional<std::uint64_t> order_exact() const {
    if (elements) return elements->size();
    if (chain) return chain->order_exact();
    return std::nullopt;
  }
};

}  // namespace symsdp
