#include <gtest/gtest.h>

#include <algorithm>

#include "ocnet/model.hpp"
#include "ocnet/topology_io.hpp"

using namespace ocnet;

namespace {

// Fig. 4/5 shape: A=1, B=2, X=3, I=4, C=5, plus direct working links A-C, B-C.
Topology butterfly() { return Topology(5, 4, {{1, 3}, {2, 3}, {3, 4}, {4, 5}, {1, 5}, {2, 5}}); }

Path path(const Topology& t, std::vector<NodeId> n) { return Path::from_nodes(t, std::move(n)); }

}  // namespace

TEST(Topology, RejectsBadEdgeLists) {
  EXPECT_THROW(Topology(3, 1, {{1, 1}, {1, 2}, {2, 3}}), ValidationError);
  EXPECT_THROW(Topology(3, 1, {{1, 2}, {2, 1}, {2, 3}}), ValidationError);
  EXPECT_THROW(Topology(3, 1, {{1, 2}, {2, 4}}), ValidationError);
  EXPECT_THROW(Topology(4, 1, {{1, 2}, {3, 4}}), ValidationError);
  EXPECT_THROW(Topology(3, 0, {{1, 2}, {2, 3}}), ValidationError);
}

TEST(Topology, LinksAreUndirectedAndOrdered) {
  Topology t(3, 2, {{3, 1}, {1, 2}, {2, 3}});
  EXPECT_EQ(t.link(0).a, 1);
  EXPECT_EQ(t.link(0).b, 3);
  EXPECT_EQ(t.link_between(1, 3), t.link_between(3, 1));
  EXPECT_FALSE(Topology(4, 1, {{1, 2}, {2, 3}, {3, 4}}).link_between(1, 3).has_value());
  EXPECT_THROW(t.link(7), UnknownLink);
}

TEST(Path, RequiresAdjacentSteps) {
  auto t = butterfly();
  EXPECT_NO_THROW(path(t, {1, 3, 4, 5}));
  EXPECT_THROW(path(t, {1, 4}), ValidationError);
  EXPECT_THROW(path(t, {1, 9}), ValidationError);
  auto p = path(t, {1, 3, 4, 5});
  EXPECT_EQ(p.hops(), 3);
  EXPECT_EQ(p.to_string(), "1-3-4-5");
  EXPECT_EQ(p.suffix_from(3)->to_string(), "3-4-5");
  EXPECT_FALSE(p.suffix_from(2).has_value());
}

TEST(Cost, OneDemandIsWorkingPlusBackup) {
  Topology t(5, 2, {{1, 2}, {2, 3}, {1, 4}, {4, 5}, {5, 3}});
  auto s = make_solution(t, {{1, path(t, {1, 2, 3}), 1, path(t, {1, 4, 5, 3}), 1}}, {});
  EXPECT_EQ(wavelength_link_cost(s), 5);
  EXPECT_EQ(lexicographic_cost(s), (LexCost{1, 5}));
}

TEST(Cost, EmptySolutionCostsNothing) {
  auto t = butterfly();
  auto s = make_solution(t, {}, {});
  EXPECT_EQ(wavelength_link_cost(s), 0);
  EXPECT_EQ(lexicographic_cost(s).wavelengths, 0);
}

TEST(Cost, CodingTheSharedTailSavesItsLength) {
  auto t = butterfly();
  std::vector<ProtectedAssignment> as{{1, path(t, {1, 5}), 1, path(t, {1, 3, 4, 5}), 1},
                                      {2, path(t, {2, 5}), 1, path(t, {2, 3, 4, 5}), 1}};
  EXPECT_THROW(make_solution(t, as, {}), CollisionError);
  as[1].working_wavelength = as[1].backup_wavelength = 2;
  const int uncoded = wavelength_link_cost(make_solution(t, as, {}));
  as[1].working_wavelength = as[1].backup_wavelength = 1;
  auto coded = make_solution(t, as, {{1, 2, 3, path(t, {3, 4, 5}), 1}});
  EXPECT_EQ(uncoded - wavelength_link_cost(coded), 2);
  // X-I and I-C each hold a single channel
  EXPECT_TRUE(coded.occupancy.used(*t.link_between(3, 4), 1));
  EXPECT_EQ(wavelength_link_cost(coded), 1 + 1 + 3 + 3 - 2);
}

TEST(DeriveOccupancy, NamesBothOwnersOnCollision) {
  auto t = butterfly();
  std::vector<ProtectedAssignment> as{{1, path(t, {1, 5}), 1, path(t, {1, 3, 4, 5}), 1},
                                      {2, path(t, {2, 5}), 1, path(t, {2, 3, 4, 5}), 1}};
  try {
    derive_occupancy(t, as, {});
    FAIL();
  } catch (const CollisionError& e) {
    std::string m = e.what();
    EXPECT_NE(m.find("demand 1"), std::string::npos) << m;
    EXPECT_NE(m.find("demand 2"), std::string::npos) << m;
  }
}

TEST(DeriveOccupancy, DisjointUsageIsAdditive) {
  auto t = butterfly();
  std::vector<ProtectedAssignment> as{{1, path(t, {1, 5}), 1, path(t, {1, 3, 4, 5}), 1},
                                      {2, path(t, {2, 5}), 2, path(t, {2, 3, 4, 5}), 2}};
  auto s = make_solution(t, as, {});
  EXPECT_EQ(wavelength_link_cost(s), 4 + 4);
}

TEST(DeriveOccupancy, OrderIndependentAndIdempotent) {
  auto t = butterfly();
  std::vector<ProtectedAssignment> as{{1, path(t, {1, 5}), 1, path(t, {1, 3, 4, 5}), 1},
                                      {2, path(t, {2, 5}), 1, path(t, {2, 3, 4, 5}), 1}};
  std::vector<CodingAssignment> cs{{1, 2, 3, path(t, {3, 4, 5}), 1}};
  auto a = derive_occupancy(t, as, cs);
  std::reverse(as.begin(), as.end());
  EXPECT_EQ(a, derive_occupancy(t, as, cs));
  EXPECT_EQ(a, derive_occupancy(t, as, cs));
}

TEST(DeriveOccupancy, RejectsCodedPathOffTheBackupTail) {
  auto t = butterfly();
  std::vector<ProtectedAssignment> as{{1, path(t, {1, 5}), 1, path(t, {1, 3, 4, 5}), 1},
                                      {2, path(t, {2, 5}), 1, path(t, {2, 3, 4, 5}), 1}};
  EXPECT_THROW(derive_occupancy(t, as, {{1, 2, 4, path(t, {4, 3, 1}), 1}}), ValidationError);
  EXPECT_THROW(derive_occupancy(t, as, {{1, 2, 3, path(t, {3, 4, 5}), 1}, {1, 2, 3, path(t, {3, 4, 5}), 1}}),
               ValidationError);
}

TEST(Cost, ArithmeticIdentityOverCodings) {
  auto t = butterfly();
  std::vector<ProtectedAssignment> as{{1, path(t, {1, 5}), 1, path(t, {1, 3, 4, 5}), 1},
                                      {2, path(t, {2, 5}), 1, path(t, {2, 3, 4, 5}), 1}};
  std::vector<CodingAssignment> cs{{1, 2, 3, path(t, {3, 4, 5}), 1}};
  auto s = make_solution(t, as, cs);
  int expected = 0;
  for (const auto& a : as) expected += a.working.hops() + a.backup.hops();
  for (const auto& c : cs) expected -= c.coded_path.hops();
  EXPECT_EQ(wavelength_link_cost(s), expected);
}

TEST(LexCost, PrefersFewerWavelengthsThenFewerLinks) {
  EXPECT_LT((LexCost{3, 9}), (LexCost{3, 10}));
  EXPECT_LT((LexCost{2, 50}), (LexCost{3, 1}));
}

TEST(LexCost, WeightedFormInducesTheSameOrder) {
  // every pair of costs with link cost <= |E||W| on a few grid shapes
  for (auto [links, waves] : std::vector<std::pair<int, int>>{{1, 1}, {2, 3}, {3, 2}, {4, 4}}) {
    const int max_cost = links * waves;
    std::vector<LexCost> all;
    for (int w = 0; w <= waves; ++w)
      for (int c = 0; c <= max_cost; ++c) all.push_back({w, c});
    for (const auto& x : all)
      for (const auto& y : all) {
        auto sx = weighted_objective_scaled(x, links, waves);
        auto sy = weighted_objective_scaled(y, links, waves);
        EXPECT_EQ(x < y, sx < sy);
        EXPECT_EQ(x < y, weighted_objective(x, links, waves) < weighted_objective(y, links, waves));
      }
  }
}
