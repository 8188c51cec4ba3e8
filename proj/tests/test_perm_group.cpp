#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "symsdp/perm.hpp"
#include "symsdp/perm_group.hpp"
#include "symsdp/rng.hpp"

using namespace symsdp;

namespace {

Permutation perm(std::vector<int> v) { return Permutation(std::move(v)); }

std::vector<Permutation> s3_generators() {
  return {perm({1, 0, 2}), perm({1, 2, 0})};
}

std::vector<Permutation> s4_generators() {
  return {perm({1, 0, 2, 3}), perm({1, 2, 3, 0})};
}

}  // namespace

TEST(Permutation, ComposeIdentityAndInverse) {
  auto p = perm({2, 0, 1, 3});
  auto id = Permutation::identity(4);
  EXPECT_EQ(compose(id, p), p);
  EXPECT_EQ(compose(p, id), p);
  EXPECT_TRUE(compose(p, p.inverse()).is_identity());
  EXPECT_TRUE(compose(p.inverse(), p).is_identity());
}

TEST(Permutation, ComposeEvaluatesPofQ) {
  // result(i) = p(q(i)) checked entry by entry
  auto p = perm({1, 0, 2});
  auto q = perm({0, 2, 1});
  auto r = compose(p, q);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(r(i), p(q(i)));
  EXPECT_EQ(r.images(), (std::vector<int>{1, 2, 0}));
}

TEST(Permutation, RejectsNonBijection) {
  EXPECT_THROW(perm({0, 0, 1}), std::invalid_argument);
  EXPECT_THROW(perm({0, 3, 1}), std::invalid_argument);
  EXPECT_THROW(compose(perm({0, 1}), perm({0, 1, 2})), std::invalid_argument);
}

TEST(Enumerate, S3HasOrderSix) {
  auto elems = enumerate_group(s3_generators());
  EXPECT_EQ(elems.size(), 6u);
  EXPECT_TRUE(std::is_sorted(elems.begin(), elems.end()));
}

TEST(Enumerate, ClosedUnderCompositionAndInverse) {
  auto elems = enumerate_group(s4_generators());
  ASSERT_EQ(elems.size(), 24u);
  std::set<std::vector<int>> set;
  for (const auto& e : elems) set.insert(e.images());
  for (const auto& a : elems) {
    EXPECT_TRUE(set.count(a.inverse().images()));
    for (const auto& b : elems) EXPECT_TRUE(set.count((a * b).images()));
  }
}

TEST(Enumerate, CapExceededThrows) {
  EXPECT_THROW(enumerate_group(s4_generators(), 10), OrderCapExceeded);
}

TEST(Enumerate, GroupLawsOnRandomTriples) {
  auto elems = enumerate_group(s4_generators());
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    const auto& a = elems[rng.uniform_index(elems.size())];
    const auto& b = elems[rng.uniform_index(elems.size())];
    const auto& c = elems[rng.uniform_index(elems.size())];
    EXPECT_EQ((a * b) * c, a * (b * c));
  }
}

TEST(Orbit, TrivialGroupFixesPoint) {
  std::vector<Permutation> gens{Permutation::identity(5)};
  EXPECT_EQ(orbit(gens, 3), (std::vector<int>{3}));
}

TEST(Orbit, SymmetricGroupIsTransitive) {
  std::vector<Permutation> gens{perm({1, 0, 2, 3, 4}), perm({1, 2, 3, 4, 0})};
  EXPECT_EQ(orbit(gens, 0), (std::vector<int>{0, 1, 2, 3, 4}));
}

TEST(StabilizerChain, TrivialGroup) {
  std::vector<Permutation> gens{Permutation::identity(4)};
  auto d = stabilizer_chain(gens);
  EXPECT_EQ(d.transversals.size(), 0u);
  EXPECT_EQ(d.order_exact().value(), 1u);
  auto elems = expand_decomposition(d, 4);
  ASSERT_EQ(elems.size(), 1u);
  EXPECT_TRUE(elems[0].is_identity());
}

TEST(StabilizerChain, S4ProductOfTransversalsIs24) {
  auto d = stabilizer_chain(s4_generators(), 3);
  EXPECT_EQ(d.order_exact().value(), 24u);
}

TEST(StabilizerChain, ExpansionEnumeratesEachElementOnce) {
  // Multiply out all transversal products and compare against the closure.
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto d = stabilizer_chain(s4_generators(), seed);
    auto expanded = expand_decomposition(d, 4);
    std::set<std::vector<int>> set;
    for (const auto& e : expanded) set.insert(e.images());
    EXPECT_EQ(set.size(), expanded.size()) << "duplicate products";
    auto elems = enumerate_group(s4_generators());
    ASSERT_EQ(elems.size(), expanded.size());
    for (const auto& e : elems) EXPECT_TRUE(set.count(e.images()));
  }
}

TEST(StabilizerChain, AgreesWithEnumerateOnAssortedGroups) {
  // dihedral-8 on a square, C6, S3 x S3
  std::vector<std::vector<Permutation>> groups;
  groups.push_back({perm({1, 2, 3, 0}), perm({3, 2, 1, 0})});
  groups.push_back({perm({1, 2, 3, 4, 5, 0})});
  groups.push_back({perm({1, 0, 2, 3, 4, 5}), perm({1, 2, 0, 3, 4, 5}),
                    perm({0, 1, 2, 4, 3, 5}), perm({0, 1, 2, 4, 5, 3})});
  for (const auto& gens : groups) {
    auto elems = enumerate_group(gens);
    auto d = stabilizer_chain(gens, 11);
    EXPECT_EQ(d.order_exact().value(), elems.size());
  }
}

TEST(PermGroup, WithElementsAndChainAgreeOnOrder) {
  auto g = PermGroup::from_generators(s4_generators());
  g.with_elements().with_chain();
  EXPECT_EQ(g.order_exact().value(), 24u);
  EXPECT_DOUBLE_EQ(g.order_double(), 24.0);
}
