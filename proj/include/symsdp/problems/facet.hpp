#pragma once

// Distributed computation based on facet Bell inequalities: Alice holds
// x in {0,1} and x0 in [d], sends a d-dimensional state rho_{x,x0}; Bob
// holds y in {0,1} and measures {M_y^b}, b in [d]. Objective
//   (1/(4d)) sum_{k=0}^{floor(d/2)-1} c_k sum_{x0,x,y}
//            Tr[rho_{x,x0} (M_y^{f_0} - M_y^{f_1})]
// with c_k = 1 - 2k/(d-1), f_j = x0 - x y - (-1)^{x+y+j} (k+j) mod d.
//
// Besides the obvious cyclic shift of (x0, b) the symmetry group contains
// two further involutions and has order 4d.

#include "symsdp/problems/problem.hpp"

namespace symsdp::problems {

struct FacetSpec {
  int d;
};

inline Problem make_facet(const FacetSpec& spec, bool pure_states = true) {
  const int d = spec.d;
  if (d < 3) throw std::invalid_argument("facet: need d >= 3");
  const int num_states = 2 * d;

  Problem p;
  p.name = "facet";
  p.scenario = make_prepare_measure_scenario(num_states, 2, d, d,
                                             std::vector<int>(d, 1), pure_states);
  const int nops = p.scenario.num_ops();
  auto state_id = [=](int x, int x0) { return x * d + x0; };
  auto meas_id = [=](int y, int b) { return num_states + y * d + b; };
  auto md = [=](int v) { return ((v % d) + d) % d; };

  // level {1, rho, M, rho M, M M}
  p.level_candidates.push_back(Monomial::identity());
  for (int i = 0; i < num_states; ++i)
    p.level_candidates.push_back(Monomial::of({i}));
  for (int y = 0; y < 2; ++y)
    for (int b = 0; b < d; ++b)
      p.level_candidates.push_back(Monomial::of({meas_id(y, b)}));
  for (int i = 0; i < num_states; ++i)
    for (int y = 0; y < 2; ++y)
      for (int b = 0; b < d; ++b)
        p.level_candidates.push_back(Monomial::of({i, meas_id(y, b)}));
  for (int y = 0; y < 2; ++y)
    for (int b = 0; b < d; ++b)
      for (int y2 = 0; y2 < 2; ++y2)
        for (int b2 = 0; b2 < d; ++b2)
          p.level_candidates.push_back(
              Monomial::of({meas_id(y, b), meas_id(y2, b2)}));

  p.objective = [=](const Realization& r) {
    double acc = 0;
    for (int k = 0; 2 * k <= d - 2; ++k) {
      const double ck = 1.0 - 2.0 * k / (d - 1.0);
      for (int x0 = 0; x0 < d; ++x0)
        for (int x = 0; x < 2; ++x)
          for (int y = 0; y < 2; ++y) {
            const int sgn = ((x + y) % 2 == 0) ? 1 : -1;
            const int f0 = md(x0 - x * y - sgn * k);
            const int f1 = md(x0 - x * y + sgn * (k + 1));
            acc += ck * (trace_product(r.X[state_id(x, x0)], r.X[meas_id(y, f0)]) -
                         trace_product(r.X[state_id(x, x0)], r.X[meas_id(y, f1)]));
          }
    }
    return acc / (4.0 * d);
  };

  auto op_perm = [&](auto&& state_map, auto&& meas_map) {
    std::vector<SignedImage> img(nops);
    for (int x = 0; x < 2; ++x)
      for (int x0 = 0; x0 < d; ++x0) {
        auto [nx, nx0] = state_map(x, x0);
        img[state_id(x, x0)] = {state_id(nx, md(nx0)), +1};
      }
    for (int y = 0; y < 2; ++y)
      for (int b = 0; b < d; ++b) {
        auto [ny, nb] = meas_map(y, b);
        img[meas_id(y, b)] = {meas_id(ny, md(nb)), +1};
      }
    return make_signed_perm(img);
  };

  // pi^1: joint shift of x0 and b
  p.symmetry_generators.push_back(op_perm(
      [&](int x, int x0) { return std::pair{x, x0 + 1}; },
      [&](int y, int b) { return std::pair{y, b + 1}; }));
  // phi
  p.symmetry_generators.push_back(op_perm(
      [&](int x, int x0) { return std::pair{1 - x, d - 1 - x0}; },
      [&](int y, int b) { return std::pair{y, d - 1 - y - b}; }));
  // varphi
  p.symmetry_generators.push_back(op_perm(
      [&](int x, int x0) { return std::pair{x, d - (1 - x) - x0}; },
      [&](int y, int b) { return std::pair{1 - y, d - 1 - b}; }));

  return p;
}

}  // namespace symsdp::problems
