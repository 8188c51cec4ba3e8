#include <gtest/gtest.h>

#include "symsdp/problems.hpp"

using namespace symsdp;
using namespace symsdp::problems;

namespace {

MonomialSet build_mset(const Problem& p, std::uint64_t seed = 21) {
  Rng r1(seed), r2(seed + 1);
  auto s1 = sample_realization(p.scenario, r1);
  auto s2 = sample_realization(p.scenario, r2);
  return MonomialSet::build(p.scenario, p.level_candidates, s1, s2);
}

void expect_generators_preserve_objective(const Problem& p, int trials = 5) {
  for (int t = 0; t < trials; ++t) {
    Rng rng(1000 + 17 * t);
    auto r = sample_realization(p.scenario, rng);
    const double f0 = p.objective(r);
    const double tol = 1e-9 * std::max(1.0, std::abs(f0));
    for (std::size_t g = 0; g < p.symmetry_generators.size(); ++g) {
      auto pr = permute_realization(r, p.symmetry_generators[g],
                                    p.scenario.num_ops());
      EXPECT_NEAR(p.objective(pr), f0, tol)
          << p.name << " generator " << g << " trial " << t;
    }
  }
}

}  // namespace

TEST(Rac, GroupOrders) {
  auto p23 = make_rac({2, 3});
  auto g23 = PermGroup::from_generators(p23.symmetry_generators).with_elements();
  EXPECT_EQ(g23.order_exact().value(), 72u);  // n! (d!)^n = 2 * 36

  auto p22 = make_rac({2, 2});
  auto g22 = PermGroup::from_generators(p22.symmetry_generators).with_elements();
  EXPECT_EQ(g22.order_exact().value(), 8u);
}

TEST(Rac, ChainAgreesWithEnumerate) {
  auto p = make_rac({2, 3});
  auto g = PermGroup::from_generators(p.symmetry_generators)
               .with_elements()
               .with_chain(5);
  EXPECT_EQ(g.chain->order_exact().value(), 72u);
}

TEST(Rac, ObjectiveInvariantUnderGenerators) {
  expect_generators_preserve_objective(make_rac({2, 3}));
  expect_generators_preserve_objective(make_rac({3, 2}));
}

TEST(Rac, MonomialSetSize70) {
  auto p = make_rac({2, 3});
  auto mset = build_mset(p);
  EXPECT_EQ(mset.size(), 70);
}

TEST(Rac, StateOrbitIsSingleOrbit) {
  auto p = make_rac({2, 2});
  auto orb = orbit(p.symmetry_generators, 0);
  std::vector<int> states;
  for (int i : orb)
    if (i < 4) states.push_back(i);
  EXPECT_EQ(states, (std::vector<int>{0, 1, 2, 3}));
}

TEST(Rac, ClassicalDeterministicStrategyScoresThreeQuarters) {
  // n=2, d=2: encode x_1 into a basis state, measurement 0 reads it out,
  // measurement 1 guesses 0. Success (1/8) sum = 3/4.
  auto p = make_rac({2, 2});
  Realization r;
  r.X.resize(p.scenario.num_ops());
  Eigen::MatrixXcd e0 = Eigen::MatrixXcd::Zero(2, 2);
  e0(0, 0) = 1;
  Eigen::MatrixXcd e1 = Eigen::MatrixXcd::Zero(2, 2);
  e1(1, 1) = 1;
  // states rho_{x1 x2} = |x1><x1|
  r.X[0] = e0;  // 00
  r.X[1] = e0;  // 01
  r.X[2] = e1;  // 10
  r.X[3] = e1;  // 11
  // measurement y=0: M^b = |b><b|; y=1: M^0 = 1, M^1 = 0
  r.X[4] = e0;
  r.X[5] = e1;
  r.X[6] = Eigen::MatrixXcd::Identity(2, 2);
  r.X[7] = Eigen::MatrixXcd::Zero(2, 2);
  EXPECT_NEAR(p.objective(r), 0.75, 1e-12);
}

TEST(Facet, GroupOrderIs4d) {
  auto p3 = make_facet({3});
  auto g3 = PermGroup::from_generators(p3.symmetry_generators).with_elements();
  EXPECT_EQ(g3.order_exact().value(), 12u);

  auto p5 = make_facet({5});
  auto g5 = PermGroup::from_generators(p5.symmetry_generators).with_elements();
  EXPECT_EQ(g5.order_exact().value(), 20u);
}

TEST(Facet, ObjectiveInvariantUnderGenerators) {
  expect_generators_preserve_objective(make_facet({3}));
  expect_generators_preserve_objective(make_facet({4}));
}

TEST(Facet, DiscoveryReproducesShippedGroup) {
  auto p = make_facet({3});
  auto amb = ambient_group(p.scenario);
  Rng rng(3);
  auto found = discover_symmetries(amb, p.objective, p.scenario, rng, 60000);
  EXPECT_EQ(found.elements->size(), 12u);
  auto shipped =
      PermGroup::from_generators(p.symmetry_generators).with_elements();
  EXPECT_EQ(*found.elements, *shipped.elements);
}

TEST(I3322, GroupOrderEight) {
  I3322Spec spec;
  auto p = make_i3322(spec);
  auto g = PermGroup::from_generators(p.symmetry_generators).with_elements();
  EXPECT_EQ(g.order_exact().value(), 8u);
}

TEST(I3322, AmbientOrder4608AndDiscovery) {
  I3322Spec spec;
  spec.c = 1.0;
  spec.d = 2;
  spec.ranks = {1, 1, 1, 1, 1, 1};
  auto p = make_i3322(spec);
  auto amb = PermGroup::from_generators(*p.custom_ambient).with_elements();
  EXPECT_EQ(amb.order_exact().value(), 4608u);  // 2 (3!)^2 (2!)^6

  Rng rng(4);
  auto found = discover_symmetries(amb, p.objective, p.scenario, rng);
  EXPECT_EQ(found.elements->size(), 8u);
  auto shipped =
      PermGroup::from_generators(p.symmetry_generators).with_elements();
  EXPECT_EQ(*found.elements, *shipped.elements);
}

TEST(I3322, ObjectiveInvariantUnderGenerators) {
  I3322Spec s1;
  s1.c = 1.0;
  s1.d = 2;
  s1.ranks = {1, 1, 1, 1, 1, 1};
  expect_generators_preserve_objective(make_i3322(s1));
  I3322Spec s2;
  s2.c = 2.0;
  s2.d = 3;
  s2.ranks = {1, 2, 1, 1, 1, 2};
  expect_generators_preserve_objective(make_i3322(s2));
}

TEST(I3322, IdentityObservablesGiveZero) {
  I3322Spec spec;
  spec.c = 1.7;
  spec.d = 2;
  auto p = make_i3322(spec);
  Realization r;
  r.X.assign(6, Eigen::MatrixXcd::Identity(4, 4));
  r.psi = Eigen::VectorXcd::Zero(4);
  r.psi(2) = 1;
  EXPECT_NEAR(p.objective(r), 0.0, 1e-12);
}

TEST(I3322, MonomialSetSizes) {
  I3322Spec spec;
  spec.d = 2;
  spec.ranks = {1, 1, 1, 1, 1, 1};
  auto p24 = make_i3322(spec, I3322Level::Level2PlusAAABBB);
  EXPECT_EQ(build_mset(p24).size(), 52);

  auto p4 = make_i3322(spec, I3322Level::Level4);
  EXPECT_EQ(build_mset(p4).size(), 244);
}

TEST(SicWitness, QuantumValueClosedForm) {
  EXPECT_NEAR(sic_quantum_value(2), 0.5 * std::sqrt(96.0) + 6 + 2, 1e-12);
  EXPECT_NEAR(sic_quantum_value(2), 12.8990, 5e-5);
  EXPECT_NEAR(sic_quantum_value(3), 70.1769, 5e-5);  // table value, 4 d.p.
}

TEST(SicWitness, MonomialSetSizeMatchesClosedForm) {
  // 1 + d - 2 d^2 + 3 d^4
  auto p2 = make_sic_witness({2});
  EXPECT_EQ(build_mset(p2).size(), 43);
  auto p3 = make_sic_witness({3});
  EXPECT_EQ(build_mset(p3).size(), 229);
}

TEST(SicWitness, GroupOrderAndInvariance) {
  auto p = make_sic_witness({2});
  auto g = PermGroup::from_generators(p.symmetry_generators).with_elements();
  EXPECT_EQ(g.order_exact().value(), 4u);  // 2! * 2!
  expect_generators_preserve_objective(p);

  auto p3 = make_sic_witness({3});
  auto g3 = PermGroup::from_generators(p3.symmetry_generators).with_elements();
  EXPECT_EQ(g3.order_exact().value(), 4320u);  // 3! * 6!
  expect_generators_preserve_objective(p3, 2);
}

TEST(Multiparty, ObjectiveInvariantUnderGenerators) {
  expect_generators_preserve_objective(make_multiparty({1, 2}));
  expect_generators_preserve_objective(make_multiparty({3, 2}), 3);
  expect_generators_preserve_objective(make_multiparty({1, 3}), 3);
}

TEST(Multiparty, GroupClosesAndActsOnMonomials) {
  auto p = make_multiparty({1, 2});
  auto g = PermGroup::from_generators(p.symmetry_generators).with_elements();
  EXPECT_GE(g.order_exact().value(), 8u);
  auto mset = build_mset(p);
  for (const auto& gen : p.symmetry_generators)
    EXPECT_NO_THROW(monomial_action(gen, mset, p.scenario.num_ops()));
}
