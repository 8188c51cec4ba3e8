#include <gtest/gtest.h>

#include "symsdp/problems.hpp"
#include "symsdp/reynolds.hpp"
#include "symsdp/sampler.hpp"

using namespace symsdp;

namespace {

struct Fixture {
  problems::Problem p;
  MonomialSet mset;
  PermGroup group;
  std::vector<SignedPerm> gen_actions;

  explicit Fixture(problems::Problem prob) : p(std::move(prob)) {
    Rng r1(61), r2(62);
    auto s1 = sample_realization(p.scenario, r1);
    auto s2 = sample_realization(p.scenario, r2);
    mset = MonomialSet::build(p.scenario, p.level_candidates, s1, s2);
    group = PermGroup::from_generators(p.symmetry_generators);
    group.with_elements().with_chain(3);
    for (const auto& g : p.symmetry_generators)
      gen_actions.push_back(monomial_action(g, mset, p.scenario.num_ops()));
  }

  Symmetrizer sym(ReynoldsStrategy s) {
    Rng rng(63);
    return make_symmetrizer(group, mset, p.scenario.num_ops(), rng, s);
  }
};

double invariance_defect(const Eigen::MatrixXd& g,
                         const std::vector<SignedPerm>& actions) {
  double worst = 0;
  for (const auto& phi : actions)
    worst = std::max(worst, (permute_moment(g, phi) - g).norm());
  return worst;
}

}  // namespace

TEST(Reynolds, TrivialGroupIsIdentityMap) {
  auto sym = Symmetrizer::naive({SignedPerm::identity(6)});
  Rng rng(1);
  Eigen::MatrixXd g = goe_matrix(rng, 6);
  EXPECT_LT((sym.apply(g) - g).norm(), 1e-15);
}

TEST(Reynolds, IdempotentProjection) {
  Fixture f(problems::make_rac({2, 2}));
  auto sym = f.sym(ReynoldsStrategy::Naive);
  Rng rng(2);
  Eigen::MatrixXd g = goe_matrix(rng, f.mset.size());
  auto once = sym.apply(g);
  auto twice = sym.apply(once);
  EXPECT_LT((twice - once).norm(), 1e-12 * std::max(1.0, once.norm()));
}

TEST(Reynolds, OutputInvariantUnderEveryGenerator) {
  Fixture f(problems::make_rac({2, 3}));
  auto sym = f.sym(ReynoldsStrategy::Naive);
  Rng rng(3);
  Eigen::MatrixXd g = goe_matrix(rng, f.mset.size());
  auto avg = sym.apply(g);
  EXPECT_LT(invariance_defect(avg, f.gen_actions), 1e-12 * avg.norm());
}

TEST(Reynolds, ChainedMatchesNaiveOnRac23) {
  // order-72 group acting on the 70x70 moment space
  Fixture f(problems::make_rac({2, 3}));
  auto naive = f.sym(ReynoldsStrategy::Naive);
  auto chained = f.sym(ReynoldsStrategy::Chained);
  ASSERT_EQ(chained.strategy(), ReynoldsStrategy::Chained);
  Rng rng(4);
  for (int t = 0; t < 3; ++t) {
    Eigen::MatrixXd g = goe_matrix(rng, f.mset.size());
    EXPECT_LT((naive.apply(g) - chained.apply(g)).norm(), 1e-10);
  }
}

TEST(Reynolds, ChainedGatherCountBelowGroupOrder) {
  Fixture f(problems::make_rac({2, 3}));
  auto chained = f.sym(ReynoldsStrategy::Chained);
  EXPECT_LE(chained.gather_passes_per_apply(), 72u);
  EXPECT_LT(chained.gather_passes_per_apply(), 72u);  // strict for S_2 x S_3^2
  EXPECT_DOUBLE_EQ(chained.group_order(), 72.0);
}

TEST(Reynolds, PreservesSymmetryAndTrace) {
  Fixture f(problems::make_rac({2, 2}));
  auto sym = f.sym(ReynoldsStrategy::Naive);
  Rng rng(5);
  Eigen::MatrixXd g = goe_matrix(rng, f.mset.size());
  auto avg = sym.apply(g);
  EXPECT_LT((avg - avg.transpose()).norm(), 1e-13);
  EXPECT_NEAR(avg.trace(), g.trace(), 1e-10 * std::abs(g.trace()));
}

TEST(Reynolds, SignedActionAveragesI3322) {
  problems::I3322Spec spec;
  spec.d = 2;
  spec.ranks = {1, 1, 1, 1, 1, 1};
  Fixture f(problems::make_i3322(spec, problems::I3322Level::Level2PlusAAABBB));
  auto sym = f.sym(ReynoldsStrategy::Naive);
  Rng rng(6);
  Eigen::MatrixXd g = goe_matrix(rng, f.mset.size());
  auto avg = sym.apply(g);
  EXPECT_LT(invariance_defect(avg, f.gen_actions), 1e-12 * avg.norm());
  // the sign-flipped fixed point B3 must average its moment row with 1 to 0
  const int jb3 = f.mset.index_of(Monomial::of({5}));
  ASSERT_GE(jb3, 0);
  EXPECT_NEAR(avg(0, jb3), 0.0, 1e-12);
}

TEST(Reynolds, SymmetrizedMomentStaysPsd) {
  Fixture f(problems::make_rac({2, 2}));
  auto sym = f.sym(ReynoldsStrategy::Naive);
  Rng rng(7);
  auto real = sample_realization(f.p.scenario, rng);
  auto g = sym.apply(moment_matrix(f.p.scenario, real, f.mset));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
  EXPECT_GT(eig.eigenvalues().minCoeff(), -1e-10);
}
