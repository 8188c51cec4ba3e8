#pragma once

// Sequential multiparty distributed computation: party A_0 encodes
// (x_0, x_1) in [d]^2 into rho_{x0,x1}; parties A_1..A_n apply unitaries
// U_{k,y_k}; the last party measures {M_{z,t}^a} (rank-one projective) and
// wins when a = x_z + t . y mod d. Average success probability
//   (1 / (d^{n+2} 2^{n+1})) sum Tr( rho^y_{x0,x1} M_{z,t}^{x_z + t.y} )
// with rho^y = (U_{n,y_n} ... U_{1,y_1}) rho (U_{n,y_n} ... U_{1,y_1})^dag.

#include "symsdp/problems/problem.hpp"

namespace symsdp::problems {

struct MultipartySpec {
  int n;  // intermediate parties
  int d;
};

inline Problem make_multiparty(const MultipartySpec& spec,
                               bool pure_states = true) {
  const int n = spec.n, d = spec.d;
  if (n < 1 || d < 2) throw std::invalid_argument("multiparty: need n >= 1, d >= 2");
  const int num_states = d * d;
  const int num_unitaries = n * d;
  const int num_t = 1 << n;
  const int num_settings = 2 * num_t;

  Problem p;
  p.name = "multiparty";
  Scenario& sc = p.scenario;
  sc.variant = ScenarioVariant::Custom;
  sc.kraus = KrausFamily::Tracial;
  sc.dim = d;
  sc.factor_dims = {d};

  auto state_id = [=](int x0, int x1) { return x0 * d + x1; };
  auto unitary_id = [=](int k, int y) {  // k = 1..n
    return num_states + (k - 1) * d + y;
  };
  auto meas_id = [=](int z, int t, int a) {
    return num_states + num_unitaries + (z * num_t + t) * d + a;
  };

  for (int x0 = 0; x0 < d; ++x0)
    for (int x1 = 0; x1 < d; ++x1) {
      sc.ops.push_back({OpKind::State,
                        {x0, x1, 0},
                        "rho_" + std::to_string(x0) + std::to_string(x1)});
      sc.states.push_back({state_id(x0, x1), pure_states});
    }
  for (int k = 1; k <= n; ++k)
    for (int y = 0; y < d; ++y) {
      sc.ops.push_back({OpKind::Unitary,
                        {k, y, 0},
                        "U_" + std::to_string(k) + "," + std::to_string(y)});
      sc.unitaries.push_back({unitary_id(k, y), -1});
    }
  for (int z = 0; z < 2; ++z)
    for (int t = 0; t < num_t; ++t) {
      MeasSetting st;
      st.ranks.assign(d, 1);
      for (int a = 0; a < d; ++a) {
        sc.ops.push_back({OpKind::MeasElement,
                          {z, t, a},
                          "M_" + std::to_string(z) + "," + std::to_string(t) +
                              "^" + std::to_string(a)});
        st.element_ids.push_back(meas_id(z, t, a));
      }
      sc.settings.push_back(std::move(st));
    }
  sc.validate();
  const int nops = sc.num_ops();

  // level {1, rho, U...U rho U^dag...U^dag (all chain depths), M}
  p.level_candidates.push_back(Monomial::identity());
  for (int s = 0; s < num_states; ++s)
    p.level_candidates.push_back(Monomial::of({s}));
  {
    // chains by depth: for each y-prefix (y_1..y_j) and each state
    std::vector<std::vector<int>> prefixes{{}};
    for (int depth = 1; depth <= n; ++depth) {
      std::vector<std::vector<int>> next;
      for (const auto& pre : prefixes)
        for (int y = 0; y < d; ++y) {
          auto ext = pre;
          ext.push_back(y);
          next.push_back(ext);
        }
      for (const auto& ys : next)
        for (int s = 0; s < num_states; ++s) {
          Monomial m;
          for (int k = depth; k >= 1; --k)
            m.factors.push_back({unitary_id(k, ys[k - 1]), false});
          m.factors.push_back({s, false});
          for (int k = 1; k <= depth; ++k)
            m.factors.push_back({unitary_id(k, ys[k - 1]), true});
          p.level_candidates.push_back(std::move(m));
        }
      prefixes = std::move(next);
    }
  }
  for (int z = 0; z < 2; ++z)
    for (int t = 0; t < num_t; ++t)
      for (int a = 0; a < d; ++a)
        p.level_candidates.push_back(Monomial::of({meas_id(z, t, a)}));

  p.objective = [=](const Realization& r) {
    // V_y = U_{n,y_n} ... U_{1,y_1} for every y in [d]^n
    int num_y = 1;
    for (int k = 0; k < n; ++k) num_y *= d;
    std::vector<Eigen::MatrixXcd> v(num_y);
    std::vector<std::vector<int>> ydig(num_y, std::vector<int>(n));
    for (int y = 0; y < num_y; ++y) {
      int f = y;
      for (int k = n - 1; k >= 0; --k) {
        ydig[y][k] = f % d;
        f /= d;
      }
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(d, d);
      for (int k = 1; k <= n; ++k) m = r.X[unitary_id(k, ydig[y][k - 1])] * m;
      v[y] = m;
    }
    double acc = 0;
    for (int x0 = 0; x0 < d; ++x0)
      for (int x1 = 0; x1 < d; ++x1)
        for (int y = 0; y < num_y; ++y) {
          Eigen::MatrixXcd rho_y =
              v[y] * r.X[state_id(x0, x1)] * v[y].adjoint();
          for (int z = 0; z < 2; ++z)
            for (int t = 0; t < num_t; ++t) {
              int tdoty = 0;
              for (int k = 0; k < n; ++k)
                if (t & (1 << k)) tdoty += ydig[y][k];
              const int a = ((z == 0 ? x0 : x1) + tdoty) % d;
              acc += trace_product(rho_y, r.X[meas_id(z, t, a)]);
            }
        }
    const double norm =
        std::pow(static_cast<double>(d), n + 2) * std::pow(2.0, n + 1);
    return acc / norm;
  };

  // xi: swap x0 <-> x1 and z
  {
    std::vector<SignedImage> img(nops);
    for (int i = 0; i < nops; ++i) img[i] = {i, +1};
    for (int x0 = 0; x0 < d; ++x0)
      for (int x1 = 0; x1 < d; ++x1)
        img[state_id(x0, x1)] = {state_id(x1, x0), +1};
    for (int z = 0; z < 2; ++z)
      for (int t = 0; t < num_t; ++t)
        for (int a = 0; a < d; ++a)
          img[meas_id(z, t, a)] = {meas_id(1 - z, t, a), +1};
    p.symmetry_generators.push_back(make_signed_perm(img));
  }
  // pi_k: cyclic shift of y_k, compensated on a when t_k = 1
  for (int k = 1; k <= n; ++k) {
    std::vector<SignedImage> img(nops);
    for (int i = 0; i < nops; ++i) img[i] = {i, +1};
    for (int y = 0; y < d; ++y)
      img[unitary_id(k, y)] = {unitary_id(k, (y + 1) % d), +1};
    for (int z = 0; z < 2; ++z)
      for (int t = 0; t < num_t; ++t) {
        if (!(t & (1 << (k - 1)))) continue;
        for (int a = 0; a < d; ++a)
          img[meas_id(z, t, a)] = {meas_id(z, t, (a + 1) % d), +1};
      }
    p.symmetry_generators.push_back(make_signed_perm(img));
  }
  // pi^0 / pi^1: cyclic shift of x_z, compensated on a when z matches
  for (int which = 0; which < 2; ++which) {
    std::vector<SignedImage> img(nops);
    for (int i = 0; i < nops; ++i) img[i] = {i, +1};
    for (int x0 = 0; x0 < d; ++x0)
      for (int x1 = 0; x1 < d; ++x1) {
        const int nx0 = which == 0 ? (x0 + 1) % d : x0;
        const int nx1 = which == 1 ? (x1 + 1) % d : x1;
        img[state_id(x0, x1)] = {state_id(nx0, nx1), +1};
      }
    for (int t = 0; t < num_t; ++t)
      for (int a = 0; a < d; ++a)
        img[meas_id(which, t, a)] = {meas_id(which, t, (a + 1) % d), +1};
    p.symmetry_generators.push_back(make_signed_perm(img));
  }

  return p;
}

}  // namespace symsdp::problems
