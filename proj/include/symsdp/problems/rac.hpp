#pragma once

// Random access codes: Alice receives x = x_1...x_n in [d]^n, encodes into a
// d-dimensional state rho_x; Bob receives y in [n], measures {M_y^b} and
// guesses x_y. Average success probability
//   (1 / (n d^n)) sum_{x,y} Tr(rho_x M_y^{x_y}).

#include "symsdp/problems/problem.hpp"

namespace symsdp::problems {

struct RacSpec {
  int n;
  int d;
};

namespace detail {

inline std::vector<int> digits_of(int flat, int n, int d) {
  std::vector<int> out(n);
  for (int k = n - 1; k >= 0; --k) {
    out[k] = flat % d;
    flat /= d;
  }
  return out;
}

inline int flat_of(const std::vector<int>& digits, int d) {
  int f = 0;
  for (int v : digits) f = f * d + v;
  return f;
}

}  // namespace detail

inline Problem make_rac(const RacSpec& spec, bool pure_states = true) {
  const int n = spec.n, d = spec.d;
  if (n < 2 || d < 2) throw std::invalid_argument("rac: need n >= 2, d >= 2");
  int num_states = 1;
  for (int k = 0; k < n; ++k) num_states *= d;

  Problem p;
  p.name = "rac";
  p.scenario = make_prepare_measure_scenario(num_states, n, d, d,
                                             std::vector<int>(d, 1), pure_states);
  const int nops = p.scenario.num_ops();
  auto state_id = [=](int flat) { return flat; };
  auto meas_id = [=](int y, int b) { return num_states + y * d + b; };

  // level {1, rho, M, rho M}
  p.level_candidates.push_back(Monomial::identity());
  for (int x = 0; x < num_states; ++x)
    p.level_candidates.push_back(Monomial::of({state_id(x)}));
  for (int y = 0; y < n; ++y)
    for (int b = 0; b < d; ++b)
      p.level_candidates.push_back(Monomial::of({meas_id(y, b)}));
  for (int x = 0; x < num_states; ++x)
    for (int y = 0; y < n; ++y)
      for (int b = 0; b < d; ++b)
        p.level_candidates.push_back(Monomial::of({state_id(x), meas_id(y, b)}));

  p.objective = [=](const Realization& r) {
    double acc = 0;
    for (int x = 0; x < num_states; ++x) {
      auto dig = detail::digits_of(x, n, d);
      for (int y = 0; y < n; ++y)
        acc += trace_product(r.X[state_id(x)], r.X[meas_id(y, dig[y])]);
    }
    return acc / (static_cast<double>(n) * num_states);
  };

  // Generators: input-position permutations xi in S_n (with the matching
  // relabelling of y), and alphabet permutations pi_k in S_d on digit k with
  // the matching relabelling of b for setting k.
  auto position_perm = [&](const std::vector<int>& xi) {
    // state x -> x o xi, setting y -> xi^-1(y)
    std::vector<int> xi_inv(n);
    for (int k = 0; k < n; ++k) xi_inv[xi[k]] = k;
    std::vector<SignedImage> img(nops);
    for (int x = 0; x < num_states; ++x) {
      auto dig = detail::digits_of(x, n, d);
      std::vector<int> permuted(n);
      for (int k = 0; k < n; ++k) permuted[k] = dig[xi[k]];
      img[state_id(x)] = {state_id(detail::flat_of(permuted, d)), +1};
    }
    for (int y = 0; y < n; ++y)
      for (int b = 0; b < d; ++b)
        img[meas_id(y, b)] = {meas_id(xi_inv[y], b), +1};
    return make_signed_perm(img);
  };
  auto alphabet_perm = [&](int k, const std::vector<int>& tau) {
    std::vector<SignedImage> img(nops);
    for (int x = 0; x < num_states; ++x) {
      auto dig = detail::digits_of(x, n, d);
      dig[k] = tau[dig[k]];
      img[state_id(x)] = {state_id(detail::flat_of(dig, d)), +1};
    }
    for (int y = 0; y < n; ++y)
      for (int b = 0; b < d; ++b)
        img[meas_id(y, b)] = {meas_id(y, y == k ? tau[b] : b), +1};
    return make_signed_perm(img);
  };

  std::vector<int> transpo(n);
  for (int k = 0; k < n; ++k) transpo[k] = k;
  std::swap(transpo[0], transpo[1]);
  p.symmetry_generators.push_back(position_perm(transpo));
  if (n > 2) {
    std::vector<int> cyc(n);
    for (int k = 0; k < n; ++k) cyc[k] = (k + 1) % n;
    p.symmetry_generators.push_back(position_perm(cyc));
  }
  for (int k = 0; k < n; ++k) {
    std::vector<int> swap01(d);
    for (int v = 0; v < d; ++v) swap01[v] = v;
    std::swap(swap01[0], swap01[1]);
    p.symmetry_generators.push_back(alphabet_perm(k, swap01));
    if (d > 2) {
      std::vector<int> cyc(d);
      for (int v = 0; v < d; ++v) cyc[v] = (v + 1) % d;
      p.symmetry_generators.push_back(alphabet_perm(k, cyc));
    }
  }
  return p;
}

}  // namespace symsdp::problems
