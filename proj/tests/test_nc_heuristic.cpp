#include <gtest/gtest.h>

#include "ocnet/nc_heuristic.hpp"
#include "ocnet/solution_io.hpp"
#include "ocnet/topology_io.hpp"
#include "ocnet/validator.hpp"
#include "ocnet/worked_example.hpp"
#include "oracles.hpp"

using namespace ocnet;

namespace {

// A=1, B=2, X=3, I=4, C=5; both backups merge at X and run X-I-C.
Topology butterfly(int wavelengths = 4) {
  return Topology(5, wavelengths, {{1, 3}, {2, 3}, {3, 4}, {4, 5}, {1, 5}, {2, 5}});
}

Path path(const Topology& t, std::vector<NodeId> n) { return Path::from_nodes(t, std::move(n)); }

Solution butterfly_baseline(const Topology& t, Wavelength wa, Wavelength wb) {
  return make_solution(t,
                       {{1, path(t, {1, 5}), wa, path(t, {1, 3, 4, 5}), wa},
                        {2, path(t, {2, 5}), wb, path(t, {2, 3, 4, 5}), wb}},
                       {});
}

const std::vector<Demand> kButterflyDemands{{1, 1, 5}, {2, 2, 5}};

}  // namespace

TEST(CommonSuffix, StartsWhereTheBackupsMerge) {
  auto t = butterfly();
  auto s = common_backup_suffix(path(t, {1, 3, 4, 5}), path(t, {2, 3, 4, 5}));
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->to_string(), "3-4-5");
  EXPECT_FALSE(common_backup_suffix(path(t, {1, 5}), path(t, {2, 5})).has_value());
  EXPECT_FALSE(common_backup_suffix(path(t, {1, 3, 4}), path(t, {2, 3, 4, 5})).has_value());
}

TEST(Opportunities, ButterflySavesTheSharedTail) {
  auto t = butterfly();
  const auto base = butterfly_baseline(t, 1, 2);
  const auto opps = enumerate_opportunities(kButterflyDemands, base);
  ASSERT_EQ(opps.size(), 1u);
  EXPECT_EQ(opps[0].coding_node, 3);
  EXPECT_EQ(opps[0].savings(), 2);
  const auto coded = apply_coding(t, kButterflyDemands, base, opps[0]);
  EXPECT_EQ(wavelength_link_cost(base) - wavelength_link_cost(coded), 2);
  EXPECT_EQ(coded.occupancy.used_wavelength_count(), 1);
  EXPECT_TRUE(validate(t, kButterflyDemands, coded).passed());
  EXPECT_TRUE(audit_exhaustive(t, kButterflyDemands, coded));
}

TEST(Opportunities, WorkingOverlapRulesAPairOut) {
  // both working paths use A-C, so a single failure kills both signals
  Topology t(5, 4, {{1, 3}, {2, 3}, {3, 4}, {4, 5}, {1, 5}, {2, 1}});
  const std::vector<Demand> demands{{1, 1, 5}, {2, 2, 5}};
  const auto base = make_solution(t,
                                  {{1, path(t, {1, 5}), 1, path(t, {1, 3, 4, 5}), 1},
                                   {2, path(t, {2, 1, 5}), 2, path(t, {2, 3, 4, 5}), 2}},
                                  {});
  EXPECT_TRUE(enumerate_opportunities(demands, base).empty());
}

TEST(Opportunities, WorkedExamplePairMergesAtNodeSeven) {
  const auto topo = builtin_topology("nsfnet14");
  const auto demands = parse_traffic(worked_example::kTraffic).demands();
  auto design = parse_solution(topo, worked_example::kSolution);
  Solution uncoded;
  uncoded.assignments = design.solution.assignments;
  const auto opps = enumerate_opportunities(demands, uncoded);
  auto it = std::find_if(opps.begin(), opps.end(),
                         [](const CodingOpportunity& o) { return o.demand_a == 1 && o.demand_b == 7; });
  ASSERT_NE(it, opps.end());
  EXPECT_EQ(it->coding_node, 7);
  EXPECT_EQ(it->suffix.to_string(), "7-3-1");
  for (const auto& o : opps) {
    EXPECT_LT(o.demand_a, o.demand_b);
    EXPECT_GE(o.savings(), 1);
  }
  for (std::size_t i = 1; i < opps.size(); ++i) EXPECT_GE(opps[i - 1].savings(), opps[i].savings());
}

TEST(ApplyCoding, MovesOneDemandOntoItsPartnersWavelength) {
  auto t = butterfly();
  const auto base = butterfly_baseline(t, 3, 1);
  const auto opp = enumerate_opportunities(kButterflyDemands, base).at(0);
  const auto coded = apply_coding(t, kButterflyDemands, base, opp);
  EXPECT_EQ(coded.codings.at(0).wavelength, 3);
  EXPECT_EQ(coded.find(2)->working_wavelength, 3);
  EXPECT_THROW(apply_coding(t, kButterflyDemands, base, opp, false), Stale);
}

TEST(ApplyCoding, TriesThePartnersWavelengthWhenTheFirstIsTaken) {
  auto t = butterfly();
  // a third demand occupies B-C on wavelength 1, so coding on a's wavelength fails
  std::vector<Demand> demands = kButterflyDemands;
  demands.push_back({3, 2, 5});
  auto base = make_solution(t,
                            {{1, path(t, {1, 5}), 1, path(t, {1, 3, 4, 5}), 1},
                             {2, path(t, {2, 5}), 2, path(t, {2, 3, 4, 5}), 2},
                             {3, path(t, {2, 5}), 1, path(t, {2, 3, 4, 5}), 3}},
                            {});
  const auto opps = enumerate_opportunities(demands, base);
  const auto opp = *std::find_if(opps.begin(), opps.end(), [](const CodingOpportunity& o) {
    return o.demand_a == 1 && o.demand_b == 2;
  });
  const auto coded = apply_coding(t, demands, base, opp);
  EXPECT_EQ(coded.codings.at(0).wavelength, 2);
  EXPECT_EQ(wavelength_link_cost(base) - wavelength_link_cost(coded), 2);
}

TEST(ApplyCoding, StaleOpportunitiesAreRefusedWithoutSideEffects) {
  auto t = butterfly();
  const auto base = butterfly_baseline(t, 1, 2);
  auto opp = enumerate_opportunities(kButterflyDemands, base).at(0);
  const auto coded = apply_coding(t, kButterflyDemands, base, opp);
  EXPECT_THROW(apply_coding(t, kButterflyDemands, coded, opp), Stale);
  auto wrong = opp;
  wrong.coding_node = 4;
  wrong.suffix = path(t, {4, 5});
  EXPECT_THROW(apply_coding(t, kButterflyDemands, base, wrong), Stale);
  EXPECT_TRUE(base.codings.empty());
  EXPECT_EQ(wavelength_link_cost(base), 8);
}

TEST(SolveRwnca, NeverWorseThanTheBaselineAndAlwaysValid) {
  for (const auto& name : builtin_topology_names()) {
    const auto t = builtin_topology(name, 100);
    for (double load : {0.3, 0.7}) {
      const auto demands = generate_traffic(t.node_count(), load, 4, 0).demands();
      const auto c = build_candidates(t, demands);
      const auto wnc = solve_rwa(t, demands, c);
      const auto nc = solve_rwnca(t, demands, c);
      int saved = 0;
      for (const auto& cd : nc.codings) saved += cd.coded_path.hops();
      EXPECT_EQ(wavelength_link_cost(wnc) - wavelength_link_cost(nc), saved);
      EXPECT_LE(wavelength_link_cost(nc), wavelength_link_cost(wnc));
      const auto report = validate(t, demands, nc);
      EXPECT_TRUE(report.passed()) << report.text();
      EXPECT_TRUE(audit_exhaustive(t, demands, nc));
      for (std::size_t i = 0; i < demands.size(); ++i) {
        EXPECT_EQ(nc.assignments[i].working, wnc.assignments[i].working);
        EXPECT_EQ(nc.assignments[i].backup, wnc.assignments[i].backup);
      }
    }
  }
}

TEST(SolveRwnca, NoCodingWithoutSharedDestinations) {
  const auto t = builtin_topology("small6", 10);
  const std::vector<Demand> demands{{1, 1, 2}, {2, 3, 4}, {3, 5, 6}};
  const auto c = build_candidates(t, demands);
  const auto nc = solve_rwnca(t, demands, c);
  EXPECT_TRUE(nc.codings.empty());
  EXPECT_EQ(wavelength_link_cost(nc), wavelength_link_cost(solve_rwa(t, demands, c)));
}

TEST(SolveRwnca, NeverBeatsTheExhaustiveCodingOptimum) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto inst = oracle::tiny_instance(seed);
    const auto best = oracle::brute_force(inst.topo, inst.demands);
    try {
      const auto s = solve_rwnca(inst.topo, inst.demands, build_candidates(inst.topo, inst.demands));
      ASSERT_TRUE(best.rwnca.by_link_cost.has_value());
      EXPECT_GE(wavelength_link_cost(s), best.rwnca.by_link_cost->link_cost);
      EXPECT_LE(best.rwnca.by_link_cost->link_cost, best.rwa.by_link_cost->link_cost);
    } catch (const Blocked&) {
    }
  }
}

TEST(SolveRwnca, Deterministic) {
  const auto t = builtin_topology("cost239", 100);
  const auto demands = generate_traffic(11, 1.0, 0, 0).demands();
  const auto c = build_candidates(t, demands);
  const auto a = solve_rwnca(t, demands, c);
  const auto b = solve_rwnca(t, demands, c);
  EXPECT_EQ(a.occupancy, b.occupancy);
  EXPECT_EQ(emit_solution(demands, a), emit_solution(demands, b));
}
