#pragma once

// Non-projectivity witness built around SIC-POVM self-testing. Alice sends
// rho_x, x in [N] with N = d^2. Bob has binary settings (y,y'), y < y', and
// one N-outcome setting "povm". Witness
//   W_d = sum_{x<x'} [ P(0|x,(x,x')) + P(1|x',(x,x')) ]
//         + sum_x P(o=x | x, povm).
//
// Bounding W under projective measurements forces at most d nonzero povm
// elements (rank-one); by convention these are the first d outcomes. The
// symmetry group is induced by the permutations of [N] preserving the split
// {first d} / {last N-d}, acting jointly on x, o, the pair labels (with a
// b-flip when a pair swaps) -- order d! (N-d)!.

#include <cmath>

#include "symsdp/problems/problem.hpp"

namespace symsdp::problems {

struct SicWitnessSpec {
  int d;
  int num_inputs() const { return d * d; }
};

// Closed-form maximal quantum value of the witness,
// W^Q_d = 1/2 sqrt(d^5 (d-1)^2 (d+1)) + C(d^2, 2) + d.
inline double sic_quantum_value(int d) {
  const double dd = d;
  return 0.5 * std::sqrt(std::pow(dd, 5) * (dd - 1) * (dd - 1) * (dd + 1)) +
         0.5 * dd * dd * (dd * dd - 1) + dd;
}

inline Problem make_sic_witness(const SicWitnessSpec& spec,
                                bool pure_states = true) {
  const int d = spec.d;
  if (d < 2) throw std::invalid_argument("sic: need d >= 2");
  const int nn = d * d;
  const int num_pairs = nn * (nn - 1) / 2;

  Problem p;
  p.name = "sic";
  Scenario& sc = p.scenario;
  sc.variant = ScenarioVariant::PrepareMeasure;
  sc.kraus = KrausFamily::Tracial;
  sc.dim = d;
  sc.factor_dims = {d};
  for (int x = 0; x < nn; ++x) {
    sc.ops.push_back({OpKind::State, {x, 0, 0}, "rho_" + std::to_string(x)});
    sc.states.push_back({x, pure_states});
  }
  auto pair_index = std::make_shared<std::vector<std::vector<int>>>(
      nn, std::vector<int>(nn, -1));
  {
    int s = 0;
    for (int y = 0; y < nn; ++y)
      for (int y2 = y + 1; y2 < nn; ++y2) (*pair_index)[y][y2] = s++;
  }
  auto pair_elem = [pair_index, nn](int y, int y2, int b) {
    return nn + (*pair_index)[y][y2] * 2 + b;
  };
  for (int y = 0; y < nn; ++y)
    for (int y2 = y + 1; y2 < nn; ++y2) {
      MeasSetting st;
      st.ranks = {1, d - 1};
      for (int b = 0; b < 2; ++b) {
        sc.ops.push_back({OpKind::MeasElement,
                          {(*pair_index)[y][y2], b, 0},
                          "M_(" + std::to_string(y) + "," + std::to_string(y2) +
                              ")^" + std::to_string(b)});
        st.element_ids.push_back(pair_elem(y, y2, b));
      }
      sc.settings.push_back(std::move(st));
    }
  const int povm_off = nn + 2 * num_pairs;
  {
    MeasSetting st;
    for (int o = 0; o < nn; ++o) {
      sc.ops.push_back(
          {OpKind::MeasElement, {num_pairs, o, 0}, "P^" + std::to_string(o)});
      st.element_ids.push_back(povm_off + o);
      st.ranks.push_back(o < d ? 1 : 0);
    }
    sc.settings.push_back(std::move(st));
  }
  sc.validate();
  const int nops = sc.num_ops();

  // level {1, rho, M, M_povm, rho rho} plus the witness monomials
  // rho_x M_(x,x')^b; the latter set is closed under the symmetry group.
  p.level_candidates.push_back(Monomial::identity());
  for (int x = 0; x < nops; ++x) p.level_candidates.push_back(Monomial::of({x}));
  for (int x = 0; x < nn; ++x)
    for (int x2 = 0; x2 < nn; ++x2)
      p.level_candidates.push_back(Monomial::of({x, x2}));
  for (int y = 0; y < nn; ++y)
    for (int y2 = y + 1; y2 < nn; ++y2) {
      p.level_candidates.push_back(Monomial::of({y, pair_elem(y, y2, 0)}));
      p.level_candidates.push_back(Monomial::of({y2, pair_elem(y, y2, 1)}));
    }

  p.objective = [=](const Realization& r) {
    double acc = 0;
    for (int y = 0; y < nn; ++y)
      for (int y2 = y + 1; y2 < nn; ++y2)
        acc += trace_product(r.X[y], r.X[pair_elem(y, y2, 0)]) +
               trace_product(r.X[y2], r.X[pair_elem(y, y2, 1)]);
    for (int x = 0; x < nn; ++x)
      acc += trace_product(r.X[x], r.X[povm_off + x]);
    return acc;
  };

  // omega in S_N^d acting on x, o and pair labels
  auto from_omega = [&](const std::vector<int>& omega) {
    std::vector<SignedImage> img(nops);
    for (int x = 0; x < nn; ++x) img[x] = {omega[x], +1};
    for (int o = 0; o < nn; ++o) img[povm_off + o] = {povm_off + omega[o], +1};
    for (int y = 0; y < nn; ++y)
      for (int y2 = y + 1; y2 < nn; ++y2)
        for (int b = 0; b < 2; ++b) {
          int wy = omega[y], wy2 = omega[y2], wb = b;
          if (wy > wy2) {
            std::swap(wy, wy2);
            wb = 1 - b;
          }
          img[pair_elem(y, y2, b)] = {pair_elem(wy, wy2, wb), +1};
        }
    return make_signed_perm(img);
  };

  auto add_block_gens = [&](int lo, int hi) {
    if (hi - lo < 2) return;
    std::vector<int> omega(nn);
    for (int i = 0; i < nn; ++i) omega[i] = i;
    std::swap(omega[lo], omega[lo + 1]);
    p.symmetry_generators.push_back(from_omega(omega));
    if (hi - lo > 2) {
      for (int i = 0; i < nn; ++i) omega[i] = i;
      for (int i = lo; i < hi; ++i) omega[i] = lo + (i - lo + 1) % (hi - lo);
      p.symmetry_generators.push_back(from_omega(omega));
    }
  };
  add_block_gens(0, d);
  add_block_gens(d, nn);

  return p;
}

}  // namespace symsdp::problems
