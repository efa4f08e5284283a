#include "potfp/equilibria.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "fixtures.hpp"

using namespace potfp;

namespace {

std::vector<int> support_vertex(const EquilibriumRecord& rec) {
  std::vector<int> v;
  for (const auto& s : rec.support) v.push_back(s[0]);
  return v;
}

bool contains_vertex(const std::vector<EquilibriumRecord>& eqs,
                     const std::vector<int>& y) {
  for (const auto& rec : eqs)
    if (rec.kind == EqKind::pure && support_vertex(rec) == y) return true;
  return false;
}

TEST(BestResponse, CoordinationThresholds) {
  auto pg = fixtures::identity_coordination();
  // Player 1 responds to player 2's weight on action 2.
  EXPECT_EQ(pure_best_responses(pg, 0, XProfile{{{0.0}, {0.3}}}, 1e-9),
            (std::vector<int>{0}));
  EXPECT_EQ(pure_best_responses(pg, 0, XProfile{{{0.0}, {0.5}}}, 1e-9),
            (std::vector<int>{0, 1}));
  EXPECT_EQ(pure_best_responses(pg, 0, XProfile{{{0.0}, {0.8}}}, 1e-9),
            (std::vector<int>{1}));
}

TEST(BestResponse, JointSetAndSingleton) {
  auto pg = fixtures::identity_coordination();
  BestResponseSet br = best_response_set(pg, XProfile{{{0.3}, {0.3}}});
  EXPECT_TRUE(br.singleton());
  EXPECT_EQ(br.vertex_actions(), (std::vector<int>{0, 0}));
  BestResponseSet tie = best_response_set(pg, XProfile{{{0.5}, {0.5}}});
  EXPECT_FALSE(tie.singleton());
  EXPECT_EQ(tie.actions[0], (std::vector<int>{0, 1}));
  EXPECT_EQ(tie.actions[1], (std::vector<int>{0, 1}));
}

TEST(Nash, CoordinationProfiles) {
  auto pg = fixtures::identity_coordination();
  EXPECT_TRUE(is_nash(pg, XProfile{{{0.0}, {0.0}}}));
  EXPECT_TRUE(is_nash(pg, XProfile{{{0.5}, {0.5}}}));
  EXPECT_FALSE(is_nash(pg, XProfile{{{0.3}, {0.3}}}));
}

TEST(PureEnumeration, CoordinationHasTwoStrict) {
  auto pg = fixtures::identity_coordination();
  auto eqs = enumerate_pure_nash(pg);
  ASSERT_EQ(eqs.size(), 2u);
  EXPECT_TRUE(contains_vertex(eqs, {0, 0}));
  EXPECT_TRUE(contains_vertex(eqs, {1, 1}));
  for (const auto& rec : eqs) {
    EXPECT_TRUE(rec.strict);
    EXPECT_TRUE(rec.quasi_strict);
    EXPECT_TRUE(rec.regular);
  }
}

TEST(PureEnumeration, DominantGameHasUniqueEquilibrium) {
  auto pg = fixtures::dominant_game();
  auto eqs = enumerate_pure_nash(pg);
  ASSERT_EQ(eqs.size(), 1u);
  EXPECT_EQ(support_vertex(eqs[0]), (std::vector<int>{0, 0}));
  EXPECT_TRUE(eqs[0].strict);
}

TEST(PureEnumeration, ConstantGameAllProfilesNonStrict) {
  auto pg = fixtures::constant_game();
  auto eqs = enumerate_pure_nash(pg);
  ASSERT_EQ(eqs.size(), 4u);
  for (const auto& rec : eqs) {
    EXPECT_FALSE(rec.strict);
    EXPECT_FALSE(rec.regular);
  }
}

TEST(MixedEnumeration, CoordinationAddsCenter) {
  auto pg = fixtures::identity_coordination();
  auto eqs = enumerate_mixed_nash(pg);
  ASSERT_EQ(eqs.size(), 1u);
  EXPECT_EQ(eqs[0].kind, EqKind::mixed);
  EXPECT_NEAR(eqs[0].profile.coords[0][0], 0.5, 1e-12);
  EXPECT_NEAR(eqs[0].profile.coords[1][0], 0.5, 1e-12);
}

TEST(MixedEnumeration, DominanceSolvableHasNone) {
  auto pg = fixtures::dominant_game();
  EXPECT_TRUE(enumerate_mixed_nash(pg).empty());
}

TEST(MixedEnumeration, AsymmetricCoordinationIndifference) {
  // Payoffs 2 on (1,1), 1 on (2,2): indifference puts weight 1/3 on action 1.
  auto pg = fixtures::asym_coordination();
  auto eqs = enumerate_mixed_nash(pg);
  ASSERT_EQ(eqs.size(), 1u);
  EXPECT_NEAR(eqs[0].profile.coords[0][0], 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(eqs[0].profile.coords[1][0], 2.0 / 3.0, 1e-12);
}

TEST(MixedEnumeration, GuardsLargeGames) {
  PotentialGame pg = sample_potential_game({3, 3, 3, 3}, 1);  // 81 profiles
  EXPECT_THROW(enumerate_mixed_nash(pg), TooLarge);
}

TEST(MixedEnumeration, SingletonSupportsReproducePureEnumeration) {
  for (std::uint64_t seed : {21ull, 22ull, 23ull}) {
    PotentialGame pg = sample_potential_game({2, 3}, seed);
    auto pure = enumerate_pure_nash(pg);
    std::set<std::vector<int>> from_faces;
    for_each_joint(pg.game.action_counts, [&](const std::vector<int>& y) {
      std::vector<std::vector<int>> support;
      for (int yi : y) support.push_back({yi});
      if (solve_support(pg, support)) from_faces.insert(y);
    });
    std::set<std::vector<int>> from_scan;
    for (const auto& rec : pure) from_scan.insert(support_vertex(rec));
    EXPECT_EQ(from_faces, from_scan);
  }
}

TEST(Classify, CoordinationVertex) {
  auto pg = fixtures::identity_coordination();
  EquilibriumRecord rec = classify_equilibrium(pg, XProfile{{{0.0}, {0.0}}});
  EXPECT_EQ(rec.kind, EqKind::pure);
  EXPECT_TRUE(rec.strict);
  EXPECT_TRUE(rec.quasi_strict);
  EXPECT_TRUE(rec.regular);
}

TEST(Classify, CoordinationCenterIsRegularMixed) {
  auto pg = fixtures::identity_coordination();
  EquilibriumRecord rec = classify_equilibrium(pg, XProfile{{{0.5}, {0.5}}});
  EXPECT_EQ(rec.kind, EqKind::mixed);
  EXPECT_FALSE(rec.strict);
  EXPECT_TRUE(rec.quasi_strict);
  EXPECT_TRUE(rec.regular);  // support Hessian [[0,2],[2,0]] is nonsingular
}

TEST(Classify, ConstantGameVertexNotRegular) {
  auto pg = fixtures::constant_game();
  EquilibriumRecord rec = classify_equilibrium(pg, XProfile{{{0.0}, {0.0}}});
  EXPECT_EQ(rec.kind, EqKind::pure);
  EXPECT_FALSE(rec.strict);
  EXPECT_FALSE(rec.quasi_strict);
  EXPECT_FALSE(rec.regular);
}

TEST(Classify, RejectsNonEquilibrium) {
  auto pg = fixtures::identity_coordination();
  EXPECT_THROW(classify_equilibrium(pg, XProfile{{{0.3}, {0.3}}}),
               NotAnEquilibrium);
}

TEST(Invariants, AffineRescalingLeavesOutputsUnchanged) {
  PotentialGame pg = sample_potential_game({2, 3}, 5);
  PotentialGame scaled = pg;
  for (auto& v : scaled.potential) v = 2.5 * v - 3.0;
  auto eng = substream(41, "affine", 0);
  for (int rep = 0; rep < 20; ++rep) {
    XProfile x;
    for (int c : pg.game.action_counts) {
      auto w = draw_simplex(eng, c);
      x.coords.emplace_back(w.begin() + 1, w.end());
    }
    BestResponseSet a = best_response_set(pg, x);
    BestResponseSet b = best_response_set(scaled, x);
    EXPECT_EQ(a.actions, b.actions);
  }
  auto ea = enumerate_all_nash(pg);
  auto eb = enumerate_all_nash(scaled);
  ASSERT_EQ(ea.size(), eb.size());
  for (std::size_t i = 0; i < ea.size(); ++i) {
    EXPECT_EQ(ea[i].support, eb[i].support);
    EXPECT_LE(distance(ea[i].profile, eb[i].profile), 1e-8);
  }
}

TEST(Invariants, EnumeratedProfilesAreFixedPoints) {
  for (std::uint64_t seed : {31ull, 32ull, 33ull, 34ull}) {
    for (const std::vector<int>& shape :
         {std::vector<int>{2, 2}, {3, 3}, {2, 2, 2}}) {
      PotentialGame pg = sample_potential_game(shape, seed);
      for (const auto& rec : enumerate_all_nash(pg))
        EXPECT_TRUE(is_nash(pg, rec.profile, 1e-9));
    }
  }
}

TEST(Invariants, RegularGamesHaveIsolatedEquilibria) {
  int regular_games = 0;
  for (std::uint64_t seed = 50; seed < 58; ++seed) {
    PotentialGame pg = sample_potential_game({2, 2}, seed);
    auto eqs = enumerate_all_nash(pg);
    bool all_regular = true;
    for (const auto& rec : eqs)
      if (!rec.regular) all_regular = false;
    if (!all_regular) continue;
    ++regular_games;
    for (std::size_t i = 0; i < eqs.size(); ++i)
      for (std::size_t j = i + 1; j < eqs.size(); ++j)
        EXPECT_GT(distance(eqs[i].profile, eqs[j].profile), 1e-6);
    // 2x2 regular games carry 1 or 3 equilibria.
    EXPECT_TRUE(eqs.size() == 1 || eqs.size() == 3) << eqs.size();
  }
  EXPECT_GT(regular_games, 0);
}

TEST(LockCheck, CoordinationRadii) {
  auto pg = fixtures::identity_coordination();
  XProfile origin{{{0.0}, {0.0}}};
  LockCheck near = verify_local_br_lock(pg, origin, 0.2, 1000, 7);
  EXPECT_TRUE(near.ok);
  EXPECT_GE(near.min_margin, 0.6 - 1e-12);
  EXPECT_TRUE(verify_local_br_lock(pg, origin, 0.49, 1000, 7).ok);
  // Radius 0.6 crosses the indifference hyperplane at coordinate 0.5.
  EXPECT_FALSE(verify_local_br_lock(pg, origin, 0.6, 1000, 7).ok);
}

TEST(LockCheck, RequiresStrictPure) {
  auto pg = fixtures::identity_coordination();
  EXPECT_THROW(verify_local_br_lock(pg, XProfile{{{0.5}, {0.5}}}, 0.1, 10, 1),
               NotStrictPure);
  auto constant = fixtures::constant_game();
  EXPECT_THROW(
      verify_local_br_lock(constant, XProfile{{{0.0}, {0.0}}}, 0.1, 10, 1),
      NotStrictPure);
}

}  // namespace
