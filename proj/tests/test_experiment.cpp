#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "ocnet/experiment.hpp"

using namespace ocnet;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ScenarioSpec scenario(std::string topology, std::vector<double> loads, int instances) {
  ScenarioSpec s;
  s.topology = std::move(topology);
  s.loads = std::move(loads);
  s.instances = instances;
  s.seed = 7;
  s.wavelengths = 100;
  return s;
}

}  // namespace

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<int> hits(257, 0);
  parallel_for(hits.size(), 8, [&](std::size_t i) { hits[i]++; });
  EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  parallel_for(0, 4, [](std::size_t) { FAIL(); });
}

TEST(ParallelFor, RethrowsTheLowestFailingIndex) {
  try {
    parallel_for(50, 6, [](std::size_t i) {
      if (i == 17 || i == 31) throw std::runtime_error(std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "17");
  }
}

TEST(Comparison, InstanceAccountingPerLoad) {
  const auto r = run_comparison(scenario("small6", {0.3, 0.7, 1.0}, 4), 3);
  ASSERT_EQ(r.instances.size(), 4u + 4u + 1u);
  ASSERT_EQ(r.loads.size(), 3u);
  EXPECT_EQ(r.loads[0].instances, 4);
  EXPECT_EQ(r.loads[2].instances, 1);
  for (const auto& i : r.instances) {
    EXPECT_EQ(i.demands, demand_count_for_load(6, i.load));
    EXPECT_LE(i.nc_cost, i.wnc_cost);
    EXPECT_GE(i.gain(), 0.0);
  }
}

TEST(Comparison, IndependentOfThreadCount) {
  const auto spec = scenario("cost239", {0.3, 0.7}, 5);
  EXPECT_EQ(comparison_csv(run_comparison(spec, 1)), comparison_csv(run_comparison(spec, 8)));
  EXPECT_EQ(comparison_table(run_comparison(spec, 1)), comparison_table(run_comparison(spec, 4)));
}

TEST(Comparison, SummaryMatchesRows) {
  const auto r = run_comparison(scenario("nsfnet14", {0.3}, 6), 0);
  double wnc = 0, nc = 0, best = 0;
  for (const auto& i : r.instances) {
    wnc += i.wnc_cost;
    nc += i.nc_cost;
    best = std::max(best, i.gain());
  }
  EXPECT_DOUBLE_EQ(r.loads[0].mean_wnc, wnc / 6);
  EXPECT_DOUBLE_EQ(r.loads[0].mean_nc, nc / 6);
  EXPECT_DOUBLE_EQ(r.loads[0].max_gain, best);
  const auto csv = comparison_csv(r);
  EXPECT_EQ(csv.rfind("topology,load,instance,", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
}

TEST(Comparison, BlockedInstanceIsNamed) {
  auto spec = scenario("nsfnet14", {0.7}, 3);
  spec.wavelengths = 2;
  try {
    run_comparison(spec, 2);
    FAIL();
  } catch (const Blocked& b) {
    const std::string what = b.what();
    EXPECT_NE(what.find("instance 0 at load 0.7"), std::string::npos) << what;
    EXPECT_GT(b.demand_id(), 0);
  }
}

TEST(Comparison, TableCollapsesEqualMaxAndMean) {
  const auto r = run_comparison(scenario("cost239", {1.0}, 1), 1);
  const auto table = comparison_table(r);
  EXPECT_NE(table.find("Max = Mean = "), std::string::npos) << table;
  EXPECT_NE(table.find("100%"), std::string::npos);
}

TEST(Gains, RelativeGainAndRounding) {
  EXPECT_DOUBLE_EQ(relative_gain(100, 93), 0.07);
  EXPECT_EQ(relative_gain(0, 0), 0.0);
  EXPECT_EQ(whole_percent(0.065), 7);
  EXPECT_EQ(whole_percent(0.0386), 4);
  EXPECT_EQ(format_load(0.3), "0.3");
  EXPECT_EQ(format_load(1.0), "1");
}

TEST(Replay, WorkedExampleReportsItsCounts) {
  const auto r = replay_worked_example();
  EXPECT_TRUE(r.demands_match_traffic);
  EXPECT_TRUE(r.recovery_audit);
  EXPECT_EQ(r.validation.coding_count, 5);
  EXPECT_EQ(r.validation.used_wavelengths, 6);
  EXPECT_EQ(r.codings.size(), 5u);
  const auto text = replay_text(r);
  EXPECT_NE(text.find("(5->1) xor (10->1)  node 7  route 7-3-1  wavelength 2"), std::string::npos) << text;
  const auto csv = replay_csv(r);
  EXPECT_NE(csv.find("wavelength-uniqueness,"), std::string::npos);
  EXPECT_NE(csv.find("codings,5,"), std::string::npos);
}

TEST(Replay, DataFilesMatchTheEmbeddedFixture) {
  EXPECT_EQ(slurp(std::string(OCNET_DATA_DIR) + "/worked_example/traffic.csv"), worked_example::kTraffic);
  EXPECT_EQ(slurp(std::string(OCNET_DATA_DIR) + "/worked_example/solution.txt"), worked_example::kSolution);
}

TEST(Replay, OverrideDesignIsUsed) {
  // drop the last coding; the counts follow
  std::string text(worked_example::kSolution);
  text = text.substr(0, text.find("coding 6 12"));
  const auto r = replay_worked_example(text);
  EXPECT_EQ(r.validation.coding_count, 4);
  EXPECT_FALSE(r.passed());
}

TEST(Gap, ExactNeverWorseThanHeuristic) {
  GapOptions o;
  o.objective = Objective::eq1;
  o.mode = DesignMode::rwnca;
  o.threads = 4;
  ScenarioSpec spec = scenario("small6", {0.3}, 3);
  spec.wavelengths = 40;
  const auto r = run_exact_vs_heuristic(spec, o);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_TRUE(r.full_candidates);
  for (const auto& row : r.rows) {
    EXPECT_FALSE(row.infeasible);
    EXPECT_EQ(row.status, ExactStatus::optimal_full);
    EXPECT_LE(row.exact.link_cost, row.heuristic.link_cost);
  }
  const auto topo = builtin_topology("small6", 40);
  EXPECT_NE(gap_table(r, topo).find("all disjoint pairs"), std::string::npos);
  const auto csv = gap_csv(r);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_NE(csv.find(",eq1,rwnca,"), std::string::npos);
}

TEST(Gap, ScoreUsesTheScaledWeightedForm) {
  const auto t = builtin_topology("small6", 4);
  EXPECT_EQ(score({2, 10}, Objective::eq1, t), 10);
  EXPECT_EQ(score({2, 10}, Objective::eq21, t), 2 * 37 + 10);
}
