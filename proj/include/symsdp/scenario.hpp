#pragma once

// Operator-variable index spaces for prepare-and-measure and Bell scenarios.
//
// A scenario lists the operator variables (states, projective measurement
// elements, dichotomic observables, unitaries), how to sample a generic
// feasible realization of them, and which expectation convention the moment
// matrix uses (tracial: <S> = Tr S, or pure-state: <S> = <psi|S|psi>).
//
// Symmetries act on operator variables as signed permutations: a variable
// may be mapped to another variable or to minus one (needed by dichotomic
// observables). A signed permutation on n variables is stored as a plain
// Permutation on 2n points, where point i+n stands for -X_i; this lets the
// perm_group machinery (enumeration, stabilizer chains) apply unchanged.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "symsdp/perm.hpp"
#include "symsdp/perm_group.hpp"
#include "symsdp/rng.hpp"

namespace symsdp {

enum class OpKind { State, MeasElement, Observable, Unitary };
enum class KrausFamily { Tracial, PureState };
enum class ScenarioVariant { PrepareMeasure, Bell, Custom };

// Kind plus a small label tuple; label semantics are fixed per scenario
// (e.g. MeasElement: {setting, outcome, party}).
struct OperatorInfo {
  OpKind kind;
  std::array<int, 3> labels{0, 0, 0};
  std::string name;
};

struct StateVar {
  int id;
  bool pure;
};

// Projective measurement: one element per outcome, ranks summing to the
// local dimension. Elements with rank 0 are identically zero matrices.
struct MeasSetting {
  std::vector<int> element_ids;
  std::vector<int> ranks;
  int factor = -1;  // tensor factor for Bell embedding; -1 = whole space
};

// Dichotomic +-1 observable realized as 2P - 1 with P of rank `rank_plus`.
struct ObservableVar {
  int id;
  int rank_plus;
  int factor = -1;
};

struct UnitaryVar {
  int id;
  int factor = -1;
};

struct Scenario {
  ScenarioVariant variant = ScenarioVariant::Custom;
  KrausFamily kraus = KrausFamily::Tracial;
  int dim = 1;                          // local Hilbert-space dimension d
  std::vector<int> factor_dims = {1};   // {d}, or {d, d} for two-party Bell
  std::vector<OperatorInfo> ops;
  std::vector<StateVar> states;
  std::vector<MeasSetting> settings;
  std::vector<ObservableVar> observables;
  std::vector<UnitaryVar> unitaries;

  int num_ops() const { return static_cast<int>(ops.size()); }
  int doubled_degree() const { return 2 * num_ops(); }
  int total_dim() const {
    int t = 1;
    for (int f : factor_dims) t *= f;
    return t;
  }

  void validate() const {
    if (dim < 1) throw std::invalid_argument("Scenario: dim must be >= 1");
    for (const auto& s : settings) {
      if (s.element_ids.size() != s.ranks.size())
        throw std::invalid_argument("Scenario: ranks/elements mismatch");
      int sum = 0;
      for (int r : s.ranks) {
        if (r < 0) throw std::invalid_argument("Scenario: negative rank");
        sum += r;
      }
      int local = s.factor < 0 ? dim : factor_dims[s.factor];
      if (sum != local)
        throw std::invalid_argument(
            "Scenario: setting ranks must sum to the local dimension");
    }
    for (const auto& o : observables)
      if (o.rank_plus < 0 || o.rank_plus > dim)
        throw std::invalid_argument("Scenario: observable rank out of range");
  }
};

// ---------------------------------------------------------------------------
// Signed permutations on the doubled domain

struct SignedImage {
  int index;
  int sign;  // +1 or -1
};

inline SignedImage signed_image(const Permutation& p, int op, int nops) {
  int j = p(op);
  return (j < nops) ? SignedImage{j, +1} : SignedImage{j - nops, -1};
}

// Builds the doubled-domain permutation from per-variable signed images.
inline Permutation make_signed_perm(const std::vector<SignedImage>& images) {
  const int n = static_cast<int>(images.size());
  std::vector<int> img(2 * n);
  for (int i = 0; i < n; ++i) {
    const auto [j, s] = images[i];
    img[i] = (s > 0) ? j : j + n;
    img[i + n] = (s > 0) ? j + n : j;
  }
  return Permutation(std::move(img));
}

// Sign-free relabelling lifted to the doubled domain.
inline Permutation lift_plain_perm(const Permutation& p) {
  const int n = p.size();
  std::vector<SignedImage> img(n);
  for (int i = 0; i < n; ++i) img[i] = {p(i), +1};
  return make_signed_perm(img);
}

inline bool preserves_doubling(const Permutation& p) {
  const int n = p.size() / 2;
  if (p.size() != 2 * n) return false;
  for (int i = 0; i < n; ++i) {
    const int j = p(i);
    const int flip = (j < n) ? j + n : j - n;
    if (p(i + n) != flip) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Ambient groups (wreath-product structure)

namespace detail {

inline Permutation op_perm_from_map(
    int nops, const std::function<SignedImage(int)>& map) {
  std::vector<SignedImage> img(nops);
  for (int i = 0; i < nops; ++i) img[i] = map(i);
  return make_signed_perm(img);
}

inline void append_symmetric_group_gens(
    std::vector<Permutation>& out, int nops, int count,
    const std::function<int(int)>& slot,  // k in [0,count) -> op id
    const std::function<SignedImage(int)>& fixed) {
  // transposition (0 1) and full cycle on the listed slots
  if (count < 2) return;
  std::vector<int> ids(count);
  for (int k = 0; k < count; ++k) ids[k] = slot(k);
  auto build = [&](const std::function<int(int)>& tau) {
    return op_perm_from_map(nops, [&](int i) -> SignedImage {
      for (int k = 0; k < count; ++k)
        if (ids[k] == i) return {ids[tau(k)], +1};
      return fixed(i);
    });
  };
  out.push_back(build([&](int k) { return k < 2 ? 1 - k : k; }));
  if (count > 2) out.push_back(build([&](int k) { return (k + 1) % count; }));
}

}  // namespace detail

// Generators of the ambient group: every operator-index permutation that
// preserves the scenario structure (state block, per-setting outcome blocks,
// party blocks). Orders: X! Y! (B!)^Y for prepare-and-measure,
// 2 (m!)^2 (d!)^(2m) for two-party Bell.
inline PermGroup ambient_group(const Scenario& sc) {
  if (sc.variant == ScenarioVariant::Custom)
    throw std::invalid_argument(
        "ambient_group: custom scenario, supply generators directly");
  const int n = sc.num_ops();
  auto ident = [](int i) { return SignedImage{i, +1}; };
  std::vector<Permutation> gens;

  // state permutations
  detail::append_symmetric_group_gens(
      gens, n, static_cast<int>(sc.states.size()),
      [&](int k) { return sc.states[k].id; }, ident);

  // setting permutations within groups of same outcome count and same party
  const int ns = static_cast<int>(sc.settings.size());
  std::vector<char> grouped(ns, 0);
  for (int a = 0; a < ns; ++a) {
    if (grouped[a]) continue;
    std::vector<int> block{a};
    grouped[a] = 1;
    for (int b = a + 1; b < ns; ++b) {
      if (!grouped[b] &&
          sc.settings[b].element_ids.size() == sc.settings[a].element_ids.size() &&
          sc.settings[b].factor == sc.settings[a].factor) {
        block.push_back(b);
        grouped[b] = 1;
      }
    }
    if (block.size() < 2) continue;
    const int outs = static_cast<int>(sc.settings[a].element_ids.size());
    auto build = [&](const std::function<int(int)>& tau) {
      return detail::op_perm_from_map(n, [&](int i) -> SignedImage {
        for (std::size_t k = 0; k < block.size(); ++k) {
          const auto& ids = sc.settings[block[k]].element_ids;
          for (int b = 0; b < outs; ++b)
            if (ids[b] == i)
              return {sc.settings[block[tau(static_cast<int>(k))]].element_ids[b], +1};
        }
        return {i, +1};
      });
    };
    const int cnt = static_cast<int>(block.size());
    gens.push_back(build([&](int k) { return k < 2 ? 1 - k : k; }));
    if (cnt > 2) gens.push_back(build([&](int k) { return (k + 1) % cnt; }));
  }

  // outcome permutations on each setting (conjugation by setting perms does
  // not reach settings in different blocks, so emit one pair per setting)
  for (const auto& st : sc.settings) {
    detail::append_symmetric_group_gens(
        gens, n, static_cast<int>(st.element_ids.size()),
        [&](int k) { return st.element_ids[k]; }, ident);
  }

  // party swap for two-party Bell: measurement k of Alice <-> of Bob
  if (sc.variant == ScenarioVariant::Bell) {
    std::vector<int> a_ids, b_ids;
    for (const auto& st : sc.settings)
      for (int id : st.element_ids)
        (st.factor == 0 ? a_ids : b_ids).push_back(id);
    if (a_ids.size() == b_ids.size() && !a_ids.empty()) {
      gens.push_back(detail::op_perm_from_map(n, [&](int i) -> SignedImage {
        for (std::size_t k = 0; k < a_ids.size(); ++k) {
          if (a_ids[k] == i) return {b_ids[k], +1};
          if (b_ids[k] == i) return {a_ids[k], +1};
        }
        return {i, +1};
      }));
    }
  }

  if (gens.empty()) gens.push_back(Permutation::identity(2 * n));
  return PermGroup::from_generators(std::move(gens));
}

// ---------------------------------------------------------------------------
// Scenario builders

// Prepare-and-measure: X states, Y settings with B outcomes each, local
// dimension d. `ranks` gives the per-outcome ranks of one setting (shared by
// all settings) and must sum to d.
inline Scenario make_prepare_measure_scenario(int X, int Y, int B, int d,
                                              std::vector<int> ranks,
                                              bool pure_states = true) {
  Scenario sc;
  sc.variant = ScenarioVariant::PrepareMeasure;
  sc.kraus = KrausFamily::Tracial;
  sc.dim = d;
  sc.factor_dims = {d};
  for (int x = 0; x < X; ++x) {
    int id = static_cast<int>(sc.ops.size());
    sc.ops.push_back({OpKind::State, {x, 0, 0}, "rho_" + std::to_string(x)});
    sc.states.push_back({id, pure_states});
  }
  for (int y = 0; y < Y; ++y) {
    MeasSetting st;
    st.ranks = ranks;
    for (int b = 0; b < B; ++b) {
      int id = static_cast<int>(sc.ops.size());
      sc.ops.push_back({OpKind::MeasElement,
                        {y, b, 0},
                        "M_" + std::to_string(y) + "^" + std::to_string(b)});
      st.element_ids.push_back(id);
    }
    sc.settings.push_back(std::move(st));
  }
  sc.validate();
  return sc;
}

// Two-party Bell scenario in projector form: m settings with d outcomes per
// party, rank-one outcome projectors by default.
inline Scenario make_bell_scenario(int m, int d, std::vector<int> ranks = {}) {
  if (ranks.empty()) ranks.assign(d, 1);
  Scenario sc;
  sc.variant = ScenarioVariant::Bell;
  sc.kraus = KrausFamily::PureState;
  sc.dim = d;
  sc.factor_dims = {d, d};
  const char* party_name[2] = {"A", "B"};
  for (int party = 0; party < 2; ++party) {
    for (int x = 0; x < m; ++x) {
      MeasSetting st;
      st.ranks = ranks;
      st.factor = party;
      for (int a = 0; a < d; ++a) {
        int id = static_cast<int>(sc.ops.size());
        sc.ops.push_back({OpKind::MeasElement,
                          {x, a, party},
                          std::string(party_name[party]) + "_" +
                              std::to_string(a) + "|" + std::to_string(x)});
        st.element_ids.push_back(id);
      }
      sc.settings.push_back(std::move(st));
    }
  }
  sc.validate();
  return sc;
}

// ---------------------------------------------------------------------------
// Realizations

struct Realization {
  std::vector<Eigen::MatrixXcd> X;  // indexed by operator id
  Eigen::VectorXcd psi;             // pure-state Kraus (empty for tracial)
};

namespace detail {

inline Eigen::MatrixXcd embed_factor(const Eigen::MatrixXcd& local, int factor,
                                     const std::vector<int>& dims) {
  if (factor < 0 || dims.size() == 1) return local;
  Eigen::MatrixXcd left =
      (factor == 0)
          ? local
          : Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(dims[0], dims[0]));
  Eigen::MatrixXcd right =
      (factor == 1)
          ? local
          : Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(dims[1], dims[1]));
  Eigen::MatrixXcd out(dims[0] * dims[1], dims[0] * dims[1]);
  for (int i = 0; i < dims[0]; ++i)
    for (int j = 0; j < dims[0]; ++j)
      out.block(i * dims[1], j * dims[1], dims[1], dims[1]) =
          left(i, j) * right;
  return out;
}

}  // namespace detail

// Generic feasible realization: Haar-random pure states (or full-rank
// densities), projective measurements from Haar-unitary column spans with the
// prescribed ranks, Haar unitaries. Deterministic given the rng state.
inline Realization sample_realization(const Scenario& sc, Rng& rng) {
  Realization r;
  r.X.resize(sc.num_ops());
  const int td = sc.total_dim();
  for (const auto& sv : sc.states) {
    const int local = sc.dim;
    Eigen::MatrixXcd rho;
    if (sv.pure) {
      Eigen::VectorXcd v = haar_pure_state(rng, local);
      rho = v * v.adjoint();
    } else {
      rho = random_density(rng, local);
    }
    r.X[sv.id] = detail::embed_factor(rho, -1, sc.factor_dims);
  }
  for (const auto& st : sc.settings) {
    const int local = st.factor < 0 ? sc.dim : sc.factor_dims[st.factor];
    Eigen::MatrixXcd u = haar_unitary(rng, local);
    int col = 0;
    for (std::size_t b = 0; b < st.element_ids.size(); ++b) {
      const int rk = st.ranks[b];
      Eigen::MatrixXcd p;
      if (rk == 0) {
        p = Eigen::MatrixXcd::Zero(local, local);
      } else {
        Eigen::MatrixXcd v = u.middleCols(col, rk);
        p = v * v.adjoint();
        col += rk;
      }
      r.X[st.element_ids[b]] = detail::embed_factor(p, st.factor, sc.factor_dims);
    }
  }
  for (const auto& ob : sc.observables) {
    const int local = ob.factor < 0 ? sc.dim : sc.factor_dims[ob.factor];
    Eigen::MatrixXcd p = random_projector(rng, local, ob.rank_plus);
    Eigen::MatrixXcd a = 2.0 * p - Eigen::MatrixXcd::Identity(local, local);
    r.X[ob.id] = detail::embed_factor(a, ob.factor, sc.factor_dims);
  }
  for (const auto& uv : sc.unitaries) {
    const int local = uv.factor < 0 ? sc.dim : sc.factor_dims[uv.factor];
    r.X[uv.id] = detail::embed_factor(haar_unitary(rng, local), uv.factor,
                                      sc.factor_dims);
  }
  if (sc.kraus == KrausFamily::PureState) r.psi = haar_pure_state(rng, td);
  return r;
}

// Realization with relabelled (and possibly sign-flipped) variables:
// pi(X)_i = s * X_{pi^-1(i)}.
inline Realization permute_realization(const Realization& r,
                                       const Permutation& doubled_perm,
                                       int nops) {
  Permutation inv = doubled_perm.inverse();
  Realization out;
  out.psi = r.psi;
  out.X.resize(nops);
  for (int i = 0; i < nops; ++i) {
    const auto [src, sign] = signed_image(inv, i, nops);
    out.X[i] = (sign > 0) ? r.X[src] : Eigen::MatrixXcd(-r.X[src]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rank profiles and their orbits

// Per-operator rank assignment; -1 for variables without a rank degree of
// freedom. The group action permutes slots and maps r -> d - r under sign
// flips (negating a dichotomic observable exchanges its eigenspaces).
inline std::vector<int> rank_profile_of(const Scenario& sc) {
  std::vector<int> prof(sc.num_ops(), -1);
  for (const auto& st : sc.settings)
    for (std::size_t b = 0; b < st.element_ids.size(); ++b)
      prof[st.element_ids[b]] = st.ranks[b];
  for (const auto& ob : sc.observables) prof[ob.id] = ob.rank_plus;
  return prof;
}

inline Scenario with_rank_profile(const Scenario& sc,
                                  const std::vector<int>& prof) {
  Scenario out = sc;
  for (auto& st : out.settings)
    for (std::size_t b = 0; b < st.element_ids.size(); ++b)
      st.ranks[b] = prof[st.element_ids[b]];
  for (auto& ob : out.observables) ob.rank_plus = prof[ob.id];
  return out;
}

inline std::vector<int> permute_rank_profile(const std::vector<int>& prof,
                                             const Permutation& doubled_perm,
                                             int nops, int dim) {
  std::vector<int> out(prof.size(), -1);
  for (int i = 0; i < nops; ++i) {
    if (prof[i] < 0) continue;
    const auto [j, sign] = signed_image(doubled_perm, i, nops);
    out[j] = (sign > 0) ? prof[i] : dim - prof[i];
  }
  return out;
}

// All distinct profiles in the orbit of sc's profile under the group
// elements, sorted; the first entry is the canonical representative.
inline std::vector<std::vector<int>> rank_profile_orbit(
    const Scenario& sc, const std::vector<Permutation>& elements) {
  std::vector<std::vector<int>> orb;
  auto base = rank_profile_of(sc);
  for (const auto& g : elements)
    orb.push_back(permute_rank_profile(base, g, sc.num_ops(), sc.dim));
  std::sort(orb.begin(), orb.end());
  orb.erase(std::unique(orb.begin(), orb.end()), orb.end());
  return orb;
}

// ---------------------------------------------------------------------------
// Symmetry discovery

using ObjectiveFn = std::function<double(const Realization&)>;

struct DiscoveryError : std::runtime_error {
  explicit DiscoveryError(const std::string& w) : std::runtime_error(w) {}
};

// Filters the ambient group down to the elements that preserve the objective
// on one generic sample, re-validates on an independent second sample, and
// returns the subgroup with a reduced generating set.
inline PermGroup discover_symmetries(const PermGroup& ambient,
                                     const ObjectiveFn& objective,
                                     const Scenario& sc, Rng& rng,
                                     std::uint64_t cap = 10000000,
                                     double tol = 1e-9) {
  std::vector<Permutation> elements =
      ambient.elements ? *ambient.elements : enumerate_group(ambient.generators, cap);

  auto filter = [&](const Realization& sample) {
    const double f0 = objective(sample);
    const double scale = std::max(1.0, std::abs(f0));
    std::vector<Permutation> kept;
    for (const auto& g : elements) {
      Realization pr = permute_realization(sample, g, sc.num_ops());
      if (std::abs(objective(pr) - f0) <= tol * scale) kept.push_back(g);
    }
    return kept;
  };

  Rng r1 = rng.child(0xd15c1);
  Rng r2 = rng.child(0xd15c2);
  auto kept1 = filter(sample_realization(sc, r1));
  auto kept2 = filter(sample_realization(sc, r2));
  if (kept1.size() != kept2.size())
    throw DiscoveryError(
        "discover_symmetries: samples disagree (numerically degenerate "
        "sample); resample");
  for (std::size_t i = 0; i < kept1.size(); ++i)
    if (!(kept1[i] == kept2[i]))
      throw DiscoveryError("discover_symmetries: samples disagree; resample");

  // reduce to a generating set
  std::unordered_set<std::vector<int>, detail::ImageHash> target;
  for (const auto& g : kept1) target.insert(g.images());
  std::vector<Permutation> gens;
  std::unordered_set<std::vector<int>, detail::ImageHash> closure;
  closure.insert(Permutation::identity(kept1[0].size()).images());
  for (const auto& g : kept1) {
    if (closure.count(g.images())) continue;
    gens.push_back(g);
    for (const auto& e : enumerate_group(gens, target.size()))
      closure.insert(e.images());
    if (closure.size() == target.size()) break;
  }
  if (gens.empty()) gens.push_back(Permutation::identity(kept1[0].size()));

  PermGroup out = PermGroup::from_generators(std::move(gens));
  out.elements = std::move(kept1);
  return out;
}

}  // namespace symsdp
