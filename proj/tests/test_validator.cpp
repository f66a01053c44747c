#include <gtest/gtest.h>

#include "ocnet/nc_heuristic.hpp"
#include "ocnet/solution_io.hpp"
#include "ocnet/topology_io.hpp"
#include "ocnet/validator.hpp"
#include "ocnet/worked_example.hpp"

using namespace ocnet;

namespace {

Topology butterfly() { return Topology(5, 4, {{1, 3}, {2, 3}, {3, 4}, {4, 5}, {1, 5}, {2, 5}}); }

Path path(const Topology& t, std::vector<NodeId> n) { return Path::from_nodes(t, std::move(n)); }

const std::vector<Demand> kDemands{{1, 1, 5}, {2, 2, 5}};

Solution coded_butterfly(const Topology& t) {
  return make_solution(t,
                       {{1, path(t, {1, 5}), 1, path(t, {1, 3, 4, 5}), 1},
                        {2, path(t, {2, 5}), 1, path(t, {2, 3, 4, 5}), 1}},
                       {{1, 2, 3, path(t, {3, 4, 5}), 1}});
}

std::vector<std::string> failing(const ValidationReport& r) {
  std::vector<std::string> out;
  for (const auto& f : r.families)
    if (!f.passed()) out.push_back(f.name);
  return out;
}

struct WorkedExample {
  Topology topo = builtin_topology("nsfnet14");
  std::vector<Demand> demands = parse_traffic(worked_example::kTraffic).demands();
  DesignFile design = parse_solution(topo, worked_example::kSolution);
};

}  // namespace

TEST(Validate, FamiliesAreReportedInModelOrder) {
  auto t = butterfly();
  const auto r = validate(t, kDemands, coded_butterfly(t));
  ASSERT_EQ(r.families.size(), std::size(kCheckFamilies));
  for (std::size_t i = 0; i < r.families.size(); ++i) EXPECT_EQ(r.families[i].name, kCheckFamilies[i].name);
  EXPECT_TRUE(r.passed()) << r.text();
  EXPECT_EQ(r.link_cost, 6);
  EXPECT_EQ(r.used_wavelengths, 1);
  EXPECT_EQ(r.coding_count, 1);
  EXPECT_THROW(r.family("no-such-family"), ValidationError);
}

TEST(Validate, UnservedDemand) {
  auto t = butterfly();
  auto s = coded_butterfly(t);
  auto demands = kDemands;
  demands.push_back({3, 1, 4});
  EXPECT_EQ(failing(validate(t, demands, s)), (std::vector<std::string>{"served-on-one-wavelength"}));
}

TEST(Validate, SplitWavelengthNeedsLenientMode) {
  auto t = butterfly();
  auto s = make_solution(t, {{1, path(t, {1, 5}), 1, path(t, {1, 3, 4, 5}), 2}}, {});
  std::vector<Demand> one{kDemands[0]};
  EXPECT_FALSE(validate(t, one, s).family("served-on-one-wavelength").passed());
  EXPECT_TRUE(validate(t, one, s, DesignMode::rwnca, WavelengthMode::lenient).passed());
}

TEST(Validate, BrokenRoute) {
  auto t = butterfly();
  auto s = coded_butterfly(t);
  s.assignments[0].working = path(t, {1, 3});  // stops short of the destination
  EXPECT_FALSE(validate(t, kDemands, s).family("flow-conservation").passed());
}

TEST(Validate, WorkingAndBackupOverlap) {
  Topology t(4, 2, {{1, 2}, {2, 3}, {3, 4}, {4, 1}, {2, 4}});
  auto s = make_solution(t, {{1, path(t, {1, 2, 3}), 1, path(t, {1, 4, 2, 3}), 2}}, {},
                         WavelengthMode::lenient);
  const auto r = validate(t, {{1, 1, 3}}, s, DesignMode::rwa, WavelengthMode::lenient);
  EXPECT_EQ(failing(r), (std::vector<std::string>{"working-backup-disjoint"}));
}

TEST(Validate, DoubleBookedCellIsFlagged) {
  auto t = butterfly();
  Solution s;
  s.assignments = {{1, path(t, {1, 5}), 1, path(t, {1, 3, 4, 5}), 1},
                   {2, path(t, {2, 5}), 1, path(t, {2, 3, 4, 5}), 1}};
  const auto r = validate(t, kDemands, s);
  EXPECT_EQ(failing(r), (std::vector<std::string>{"wavelength-uniqueness"}));
  EXPECT_EQ(r.family("wavelength-uniqueness").offenders.size(), 2u);  // 3-4 and 4-5
}

TEST(Validate, CodingAtTheDestination) {
  auto t = butterfly();
  auto s = coded_butterfly(t);
  s.codings[0].coding_node = 5;
  s.codings[0].coded_path = path(t, {5});
  const auto r = validate(t, kDemands, s);
  EXPECT_FALSE(r.family("coding-node").passed());
  EXPECT_FALSE(r.family("coding-coherence").passed());
}

TEST(Validate, PartnersWithDifferentDestinations) {
  Topology t(5, 4, {{1, 3}, {2, 3}, {3, 4}, {4, 5}, {1, 5}, {2, 5}, {2, 4}});
  Solution s;
  s.assignments = {{1, path(t, {1, 5}), 1, path(t, {1, 3, 4, 5}), 1},
                   {2, path(t, {2, 4}), 1, path(t, {2, 3, 4}), 1}};
  s.codings = {{1, 2, 3, path(t, {3, 4, 5}), 1}};
  const auto r = validate(t, {{1, 1, 5}, {2, 2, 4}}, s);
  EXPECT_FALSE(r.family("coding-partner").passed());
  EXPECT_FALSE(r.family("coded-path-on-backup").passed());
}

TEST(Validate, CodingInABypassDesign) {
  auto t = butterfly();
  EXPECT_FALSE(validate(t, kDemands, coded_butterfly(t), DesignMode::rwa).family("coding-partner").passed());
}

TEST(Validate, DemandCodedTwice) {
  auto t = butterfly();
  auto s = coded_butterfly(t);
  s.codings.push_back(s.codings[0]);
  EXPECT_FALSE(validate(t, kDemands, s).family("coding-partner").passed());
}

TEST(Validate, PartnersWorkingPathsMustStayApart) {
  Topology t(5, 4, {{1, 3}, {2, 3}, {3, 4}, {4, 5}, {1, 5}, {2, 1}});
  Solution s;
  s.assignments = {{1, path(t, {1, 5}), 1, path(t, {1, 3, 4, 5}), 1},
                   {2, path(t, {2, 1, 5}), 1, path(t, {2, 3, 4, 5}), 1}};
  s.codings = {{1, 2, 3, path(t, {3, 4, 5}), 1}};
  const auto r = validate(t, kDemands, s);
  EXPECT_FALSE(r.family("recovery-disjoint").passed());
}

TEST(Validate, CodedWavelengthMismatch) {
  auto t = butterfly();
  auto s = coded_butterfly(t);
  s.codings[0].wavelength = 2;
  s.occupancy = {};
  const auto r = validate(t, kDemands, s);
  EXPECT_EQ(failing(r), (std::vector<std::string>{"coding-wavelength"}));
  EXPECT_TRUE(validate(t, kDemands, s, DesignMode::rwnca, WavelengthMode::lenient).passed());
}

TEST(Validate, CodedPathOffTheTail) {
  auto t = butterfly();
  auto s = coded_butterfly(t);
  s.codings[0].coded_path = path(t, {4, 5});
  s.occupancy = {};
  const auto r = validate(t, kDemands, s);
  EXPECT_FALSE(r.family("coded-path-on-backup").passed());
  EXPECT_FALSE(r.family("coding-node-agreement").passed());
}

TEST(Validate, CodedPathMustReachTheDestination) {
  auto t = butterfly();
  auto s = coded_butterfly(t);
  s.codings[0].coded_path = path(t, {3, 4});
  s.occupancy = {};
  const auto r = validate(t, kDemands, s);
  EXPECT_FALSE(r.family("coded-path-flow").passed());
}

TEST(Validate, StaleStoredOccupancy) {
  auto t = butterfly();
  auto s = coded_butterfly(t);
  s.occupancy.set(0, 4);
  EXPECT_EQ(failing(validate(t, kDemands, s)), (std::vector<std::string>{"objective"}));
}

TEST(Validate, RecordsAreOneLinePerFamilyPlusSummary) {
  auto t = butterfly();
  const auto rec = validate(t, kDemands, coded_butterfly(t)).records();
  EXPECT_EQ(static_cast<std::size_t>(std::count(rec.begin(), rec.end(), '\n')), std::size(kCheckFamilies) + 1);
  EXPECT_NE(rec.find("summary status=pass"), std::string::npos);
}

TEST(WorkedExample, OnlyWavelengthUniquenessFailsInLenientMode) {
  WorkedExample we;
  EXPECT_EQ(we.design.demands, we.demands);
  const auto r = validate(we.topo, we.demands, we.design.solution, DesignMode::rwnca, WavelengthMode::lenient);
  EXPECT_EQ(failing(r), (std::vector<std::string>{"wavelength-uniqueness"})) << r.text();
  EXPECT_EQ(r.coding_count, worked_example::kExpectedCodings);
  EXPECT_EQ(r.used_wavelengths, worked_example::kExpectedWavelengths);
  const auto& clash = r.family("wavelength-uniqueness").offenders;
  ASSERT_EQ(clash.size(), 5u);
  const std::vector<std::string> cells{"link 1-3 wavelength 1", "link 1-8 wavelength 1",
                                       "link 2-4 wavelength 4", "link 5-7 wavelength 3",
                                       "link 6-8 wavelength 6"};
  for (const auto& cell : cells)
    EXPECT_TRUE(std::any_of(clash.begin(), clash.end(),
                            [&](const std::string& o) { return o.rfind(cell, 0) == 0; }))
        << cell;
}

TEST(WorkedExample, StrictModeAlsoFlagsTheSplitWavelengths) {
  WorkedExample we;
  const auto r = validate(we.topo, we.demands, we.design.solution);
  EXPECT_FALSE(r.family("served-on-one-wavelength").passed());
  EXPECT_FALSE(r.family("coding-wavelength").passed());
}

TEST(WorkedExample, InjectedFaultsAreCaught) {
  WorkedExample we;
  auto s = we.design.solution;
  s.codings[0].coding_node = 1;
  s.codings[0].coded_path = path(we.topo, {1});
  auto r = validate(we.topo, we.demands, s, DesignMode::rwnca, WavelengthMode::lenient);
  EXPECT_FALSE(r.family("coding-node").passed());

  // demand 5 goes to node 6, demand 1 to node 1
  s = we.design.solution;
  s.codings[0].demand_b = 5;
  r = validate(we.topo, we.demands, s, DesignMode::rwnca, WavelengthMode::lenient);
  EXPECT_FALSE(r.family("coding-partner").passed());
}

TEST(WorkedExample, SurvivesEverySingleLinkFailure) {
  WorkedExample we;
  EXPECT_TRUE(audit_exhaustive(we.topo, we.demands, we.design.solution));
}

TEST(Recovery, CodedDemandIsRebuiltFromItsPartner) {
  auto t = butterfly();
  const auto s = coded_butterfly(t);
  auto verdicts = simulate_failure_recovery(t, kDemands, s, *t.link_between(1, 5));
  EXPECT_EQ(verdicts[0].verdict, RecoveryVerdict::recovered_via_coding);
  EXPECT_EQ(verdicts[1].verdict, RecoveryVerdict::unaffected);
  verdicts = simulate_failure_recovery(t, kDemands, s, *t.link_between(3, 4));
  EXPECT_EQ(verdicts[0].verdict, RecoveryVerdict::unaffected);
  EXPECT_EQ(verdicts[1].verdict, RecoveryVerdict::unaffected);
  EXPECT_TRUE(audit_exhaustive(t, kDemands, s));
  EXPECT_THROW(simulate_failure_recovery(t, kDemands, s, 99), UnknownLink);
}

TEST(Recovery, UncodedDemandFallsBackToItsBackup) {
  auto t = butterfly();
  auto s = make_solution(t, {{1, path(t, {1, 5}), 1, path(t, {1, 3, 4, 5}), 1}}, {});
  const std::vector<Demand> one{kDemands[0]};
  EXPECT_EQ(simulate_failure_recovery(t, one, s, *t.link_between(1, 5))[0].verdict,
            RecoveryVerdict::recovered_via_backup);
  EXPECT_EQ(simulate_failure_recovery(t, one, s, *t.link_between(4, 5))[0].verdict,
            RecoveryVerdict::unaffected);
}

TEST(Recovery, SharedWorkingLinkLosesTheCodedDemand) {
  Topology t(5, 4, {{1, 3}, {2, 3}, {3, 4}, {4, 5}, {1, 5}, {2, 1}});
  Solution s;
  s.assignments = {{1, path(t, {1, 5}), 1, path(t, {1, 3, 4, 5}), 1},
                   {2, path(t, {2, 1, 5}), 1, path(t, {2, 3, 4, 5}), 1}};
  s.codings = {{1, 2, 3, path(t, {3, 4, 5}), 1}};
  const auto v = simulate_failure_recovery(t, kDemands, s, *t.link_between(1, 5));
  EXPECT_EQ(v[0].verdict, RecoveryVerdict::lost);
  EXPECT_EQ(v[1].verdict, RecoveryVerdict::lost);
  EXPECT_FALSE(audit_exhaustive(t, kDemands, s));
}

TEST(Recovery, UnservedDemandIsLost) {
  auto t = butterfly();
  const auto v = simulate_failure_recovery(t, kDemands, Solution{}, 0);
  EXPECT_EQ(v[0].verdict, RecoveryVerdict::lost);
}

TEST(Recovery, HeuristicDesignsSurviveEveryFailure) {
  for (const auto& name : builtin_topology_names()) {
    const auto t = builtin_topology(name, 100);
    const auto demands = generate_traffic(t.node_count(), 0.7, 12, 0).demands();
    const auto s = solve_rwnca(t, demands, build_candidates(t, demands));
    EXPECT_TRUE(audit_exhaustive(t, demands, s)) << name;
  }
}

TEST(SolutionText, RoundTripsHeuristicDesigns) {
  const auto t = builtin_topology("nsfnet14", 100);
  const auto demands = generate_traffic(14, 0.7, 3, 0).demands();
  const auto s = solve_rwnca(t, demands, build_candidates(t, demands));
  const auto text = emit_solution(demands, s);
  const auto back = parse_solution(t, text);
  EXPECT_EQ(back.demands, demands);
  EXPECT_EQ(back.solution.occupancy, s.occupancy);
  EXPECT_EQ(emit_solution(back.demands, back.solution), text);
}

TEST(SolutionText, ReportsLineNumbers) {
  const auto t = builtin_topology("small6");
  try {
    parse_solution(t, "assign 1 1 2 working 1-2 1 backup 1-3-2 1\nassign 2 1 3 working 1-5 1 backup 1-3 2\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  EXPECT_THROW(parse_solution(t, "frobnicate\n"), ParseError);
}
