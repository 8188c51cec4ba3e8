#pragma once

// Modified I3322 Bell inequality with dichotomic observables A_x, B_y
// (eigenvalues +-1) on C^d x C^d and a pure state |psi>:
//   I_3322(c) = c (<A1B3> + <A3B1> - <A2B3> - <A3B2>)
//             + <A1> + <A2> + <B1> + <B2> - <(A1+A2)(B1+B2)>.
//
// The symmetry group has order 8: party swap p, and the correlated
// relabelling r with r(A1)=A2, r(A2)=A1, r(B3)=-B3. Sign flips are carried
// on the doubled operator domain. Rank sequences list the +1-eigenspace
// dimensions of the six observables; the group maps rank r to d - r under a
// sign flip, so sampling runs over the orbit of the requested sequence.

#include "symsdp/problems/problem.hpp"

namespace symsdp::problems {

struct I3322Spec {
  double c = 1.0;
  int d = 2;
  std::vector<int> ranks;  // six entries (A1,A2,A3,B1,B2,B3); default floor(d/2)
};

enum class I3322Level { Level4, Level2PlusAAABBB };

inline Problem make_i3322(const I3322Spec& spec,
                          I3322Level level = I3322Level::Level4) {
  const int d = spec.d;
  if (d < 2) throw std::invalid_argument("i3322: need d >= 2");
  std::vector<int> ranks = spec.ranks;
  if (ranks.empty()) ranks.assign(6, d / 2);
  if (ranks.size() != 6) throw std::invalid_argument("i3322: need six ranks");

  Problem p;
  p.name = "i3322";
  Scenario& sc = p.scenario;
  sc.variant = ScenarioVariant::Custom;
  sc.kraus = KrausFamily::PureState;
  sc.dim = d;
  sc.factor_dims = {d, d};
  const char* names[6] = {"A1", "A2", "A3", "B1", "B2", "B3"};
  for (int i = 0; i < 6; ++i) {
    sc.ops.push_back({OpKind::Observable, {i % 3, 0, i / 3}, names[i]});
    sc.observables.push_back({i, ranks[i], i / 3});
  }
  sc.validate();
  const int a1 = 0, a2 = 1, a3 = 2, b1 = 3, b2 = 4, b3 = 5;

  if (level == I3322Level::Level4) {
    p.level_candidates = all_words_up_to_degree(sc, 4);
  } else {
    p.level_candidates = all_words_up_to_degree(sc, 2);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          p.level_candidates.push_back(Monomial::of({i, j, k}));
          p.level_candidates.push_back(Monomial::of({3 + i, 3 + j, 3 + k}));
        }
  }

  const double c = spec.c;
  p.objective = [=](const Realization& r) {
    auto ev = [&](const Eigen::MatrixXcd& s) {
      return (r.psi.adjoint() * s * r.psi).real()(0);
    };
    const auto& X = r.X;
    double acc = c * (ev(X[a1] * X[b3]) + ev(X[a3] * X[b1]) -
                      ev(X[a2] * X[b3]) - ev(X[a3] * X[b2]));
    acc += ev(X[a1]) + ev(X[a2]) + ev(X[b1]) + ev(X[b2]);
    acc -= ev((X[a1] + X[a2]) * (X[b1] + X[b2]));
    return acc;
  };

  // p: A_z <-> B_z
  p.symmetry_generators.push_back(make_signed_perm(
      {{b1, +1}, {b2, +1}, {b3, +1}, {a1, +1}, {a2, +1}, {a3, +1}}));
  // r: A1 <-> A2, B3 -> -B3
  p.symmetry_generators.push_back(make_signed_perm(
      {{a2, +1}, {a1, +1}, {a3, +1}, {b1, +1}, {b2, +1}, {b3, -1}}));

  // Ambient group of the observable picture: party swap, setting
  // permutations per party, per-observable sign flips. Order 2 (3!)^2 2^6.
  {
    std::vector<Permutation> amb;
    amb.push_back(p.symmetry_generators[0]);  // party swap
    amb.push_back(make_signed_perm(
        {{a2, +1}, {a1, +1}, {a3, +1}, {b1, +1}, {b2, +1}, {b3, +1}}));
    amb.push_back(make_signed_perm(
        {{a2, +1}, {a3, +1}, {a1, +1}, {b1, +1}, {b2, +1}, {b3, +1}}));
    amb.push_back(make_signed_perm(
        {{a1, -1}, {a2, +1}, {a3, +1}, {b1, +1}, {b2, +1}, {b3, +1}}));
    p.custom_ambient = std::move(amb);
  }

  p.rank_profiles = [d]() {
    std::vector<std::vector<int>> out;
    std::vector<int> r(6, 0);
    while (true) {
      out.push_back(r);
      int i = 5;
      while (i >= 0 && r[i] == d) r[i--] = 0;
      if (i < 0) break;
      ++r[i];
    }
    return out;
  };

  return p;
}

}  // namespace symsdp::problems
