#include <gtest/gtest.h>

#include "symsdp/monomial.hpp"
#include "symsdp/problems.hpp"

using namespace symsdp;

namespace {

struct RacFixture {
  problems::Problem p;
  MonomialSet mset;
  PermGroup group;

  explicit RacFixture(int n, int d)
      : p(problems::make_rac({n, d})), mset(make_mset()), group(make_group()) {}

  MonomialSet make_mset() {
    Rng r1(31), r2(32);
    auto s1 = sample_realization(p.scenario, r1);
    auto s2 = sample_realization(p.scenario, r2);
    return MonomialSet::build(p.scenario, p.level_candidates, s1, s2);
  }
  PermGroup make_group() {
    return PermGroup::from_generators(p.symmetry_generators).with_elements();
  }
};

}  // namespace

TEST(MonomialSet, IdentityIsIndexZero) {
  RacFixture f(2, 2);
  EXPECT_EQ(f.mset[0].degree(), 0);
  EXPECT_EQ(f.mset.index_of(Monomial::identity()), 0);
}

TEST(MonomialSet, KeepsAllOutcomeElementsDistinct) {
  // prepare-measure X=2, Y=1, B=2: {1, rho_0, rho_1, M_0^0, M_0^1}; both
  // projector elements are distinct matrices under a generic sample.
  auto sc = make_prepare_measure_scenario(2, 1, 2, 2, {1, 1});
  std::vector<Monomial> cands{Monomial::identity()};
  for (int i = 0; i < sc.num_ops(); ++i) cands.push_back(Monomial::of({i}));
  Rng r1(1), r2(2);
  auto s1 = sample_realization(sc, r1);
  auto s2 = sample_realization(sc, r2);
  auto mset = MonomialSet::build(sc, cands, s1, s2);
  EXPECT_EQ(mset.size(), 5);
}

TEST(MonomialSet, MergesDuplicatesAndDropsZeros) {
  // rank (2,0) in d=2: M^0 = identity (duplicate of 1), M^1 = 0 (dropped)
  auto sc = make_prepare_measure_scenario(1, 1, 2, 2, {2, 0});
  std::vector<Monomial> cands{Monomial::identity()};
  for (int i = 0; i < sc.num_ops(); ++i) cands.push_back(Monomial::of({i}));
  Rng r1(1), r2(2);
  auto s1 = sample_realization(sc, r1);
  auto s2 = sample_realization(sc, r2);
  auto mset = MonomialSet::build(sc, cands, s1, s2);
  EXPECT_EQ(mset.size(), 2);  // {1, rho_0}
  EXPECT_EQ(mset.index_of(Monomial::of({sc.settings[0].element_ids[0]})), 0);
  EXPECT_EQ(mset.index_of(Monomial::of({sc.settings[0].element_ids[1]})), -1);
}

TEST(MonomialSet, StableAcrossIndependentSamplePairs) {
  auto p = problems::make_sic_witness({2});
  Rng a1(11), a2(12), b1(13), b2(14);
  auto sa1 = sample_realization(p.scenario, a1);
  auto sa2 = sample_realization(p.scenario, a2);
  auto sb1 = sample_realization(p.scenario, b1);
  auto sb2 = sample_realization(p.scenario, b2);
  auto ma = MonomialSet::build(p.scenario, p.level_candidates, sa1, sa2);
  auto mb = MonomialSet::build(p.scenario, p.level_candidates, sb1, sb2);
  ASSERT_EQ(ma.size(), mb.size());
  for (int j = 0; j < ma.size(); ++j) EXPECT_EQ(ma[j], mb[j]);
}

TEST(MonomialAction, IdentityActsTrivially) {
  RacFixture f(2, 2);
  auto phi = monomial_action(Permutation::identity(f.p.scenario.doubled_degree()),
                             f.mset, f.p.scenario.num_ops());
  EXPECT_TRUE(phi.is_identity());
}

TEST(MonomialAction, PositionSwapFixesIdentityMonomial) {
  RacFixture f(2, 2);
  auto phi = monomial_action(f.p.symmetry_generators[0], f.mset,
                             f.p.scenario.num_ops());
  EXPECT_EQ(phi.image[0], 0);
  EXPECT_EQ(phi.sign[0], 1);
}

TEST(MonomialAction, HomomorphismOnRandomPairs) {
  RacFixture f(2, 3);
  const auto& elems = *f.group.elements;
  std::vector<SignedPerm> phis;
  for (const auto& g : elems)
    phis.push_back(monomial_action(g, f.mset, f.p.scenario.num_ops()));
  Rng rng(77);
  for (int t = 0; t < 100; ++t) {
    const std::size_t i = rng.uniform_index(elems.size());
    const std::size_t j = rng.uniform_index(elems.size());
    auto prod = monomial_action(elems[i] * elems[j], f.mset,
                                f.p.scenario.num_ops());
    EXPECT_TRUE(prod == phis[i] * phis[j]) << "pair " << i << "," << j;
  }
}

TEST(MonomialAction, BijectionForEveryGenerator) {
  RacFixture f(2, 3);
  for (const auto& g : f.p.symmetry_generators) {
    auto phi = monomial_action(g, f.mset, f.p.scenario.num_ops());
    std::vector<char> hit(f.mset.size(), 0);
    for (int j = 0; j < phi.size(); ++j) {
      EXPECT_FALSE(hit[phi.image[j]]);
      hit[phi.image[j]] = 1;
    }
  }
}

TEST(MonomialAction, SignChannelCarriesObservableFlip) {
  problems::I3322Spec spec;
  spec.d = 2;
  spec.ranks = {1, 1, 1, 1, 1, 1};
  auto p = problems::make_i3322(spec, problems::I3322Level::Level2PlusAAABBB);
  Rng r1(3), r2(4);
  auto s1 = sample_realization(p.scenario, r1);
  auto s2 = sample_realization(p.scenario, r2);
  auto mset = MonomialSet::build(p.scenario, p.level_candidates, s1, s2);
  // generator r maps the monomial B3 to -B3
  auto phi = monomial_action(p.symmetry_generators[1], mset,
                             p.scenario.num_ops());
  const int jb3 = mset.index_of(Monomial::of({5}));
  ASSERT_GE(jb3, 0);
  EXPECT_EQ(phi.image[jb3], jb3);
  EXPECT_EQ(phi.sign[jb3], -1);
  // ... and the even word B3 B1 B3 keeps its sign
  const int jodd = mset.index_of(Monomial::of({5, 3, 5}));
  if (jodd >= 0) EXPECT_EQ(phi.sign[jodd], 1);
}

TEST(MonomialAction, ClosureViolationThrows) {
  // candidates missing the image of rho_0 under the state swap
  auto sc = make_prepare_measure_scenario(2, 1, 2, 2, {1, 1});
  std::vector<Monomial> cands{Monomial::identity(), Monomial::of({0})};
  Rng r1(1), r2(2);
  auto s1 = sample_realization(sc, r1);
  auto s2 = sample_realization(sc, r2);
  auto mset = MonomialSet::build(sc, cands, s1, s2);
  std::vector<SignedImage> img{{1, +1}, {0, +1}, {2, +1}, {3, +1}};
  EXPECT_THROW(monomial_action(make_signed_perm(img), mset, sc.num_ops()),
               ClosureError);
}

TEST(MonomialAction, CloseCandidatesAddsOrbit) {
  auto sc = make_prepare_measure_scenario(2, 1, 2, 2, {1, 1});
  std::vector<Monomial> cands{Monomial::identity(), Monomial::of({0})};
  std::vector<SignedImage> img{{1, +1}, {0, +1}, {2, +1}, {3, +1}};
  auto closed = close_candidates_under_group(cands, {make_signed_perm(img)},
                                             sc.num_ops());
  EXPECT_EQ(closed.size(), 3u);  // identity, rho_0, rho_1
}
