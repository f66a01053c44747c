// Command-line driver: compare, replay-example, exact-gap, export-ilp, validate.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ocnet/experiment.hpp"
#include "ocnet/ilp.hpp"
#include "ocnet/solution_io.hpp"
#include "ocnet/topology_io.hpp"
#include "ocnet/validator.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct CommonFlags {
  std::string topology = "nsfnet14";
  std::vector<double> loads{0.3, 0.7, 1.0};
  int instances = 20;
  std::uint64_t seed = 1;
  int wavelengths = 40;
  int k_pairs = ocnet::kDefaultCandidatePairs;
  std::string objective = "eq1";
  std::string mode = "rwnca";
  std::string wavelength_mode = "strict";
  std::string out_dir = "results";
  double budget_secs = 600.0;
  long long budget_nodes = 50'000'000;
  unsigned threads = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string load_tag(const std::vector<double>& loads) {
  std::string s;
  for (std::size_t i = 0; i < loads.size(); ++i) s += (i ? "-" : "") + ocnet::format_load(loads[i]);
  return s;
}

std::string stem(const std::string& command, const CommonFlags& f) {
  return command + "_" + f.topology + "_load" + load_tag(f.loads) + "_seed" + std::to_string(f.seed);
}

void emit(const CommonFlags& f, const std::string& name, const std::string& table,
          const std::string& csv, const ordered_json& json) {
  std::cout << table;
  const fs::path dir(f.out_dir);
  write_file(dir / (name + ".txt"), table);
  write_file(dir / (name + ".csv"), csv);
  write_file(dir / (name + ".json"), json.dump(2) + "\n");
  std::cout << "wrote " << (dir / name).string() << ".{txt,csv,json}\n";
}

ocnet::ScenarioSpec scenario(const CommonFlags& f) {
  ocnet::ScenarioSpec s;
  s.topology = f.topology;
  s.loads = f.loads;
  s.instances = f.instances;
  s.seed = f.seed;
  s.wavelengths = f.wavelengths;
  s.k_pairs = f.k_pairs;
  return s;
}

ocnet::Objective objective(const CommonFlags& f) {
  return f.objective == "eq21" ? ocnet::Objective::eq21 : ocnet::Objective::eq1;
}
ocnet::DesignMode design_mode(const CommonFlags& f) {
  return f.mode == "rwa" ? ocnet::DesignMode::rwa : ocnet::DesignMode::rwnca;
}
ocnet::WavelengthMode wavelength_mode(const CommonFlags& f) {
  return f.wavelength_mode == "lenient" ? ocnet::WavelengthMode::lenient
                                        : ocnet::WavelengthMode::strict;
}

int run_compare(const CommonFlags& f) {
  auto r = ocnet::run_comparison(scenario(f), f.threads);
  ordered_json j;
  j["topology"] = f.topology;
  j["seed"] = f.seed;
  j["wavelengths"] = f.wavelengths;
  j["k_pairs"] = f.k_pairs;
  for (const auto& s : r.loads)
    j["loads"].push_back({{"load", s.load},
                          {"instances", s.instances},
                          {"mean_wnc", s.mean_wnc},
                          {"mean_nc", s.mean_nc},
                          {"max_gain_percent", ocnet::whole_percent(s.max_gain)},
                          {"mean_gain_percent", ocnet::whole_percent(s.mean_gain)},
                          {"mean_coding_ops", s.mean_coding_ops}});
  for (const auto& i : r.instances)
    j["instances"].push_back({{"load", i.load},
                              {"instance", i.instance},
                              {"demands", i.demands},
                              {"wnc_cost", i.wnc_cost},
                              {"nc_cost", i.nc_cost},
                              {"coding_ops", i.coding_ops}});
  emit(f, stem("compare", f), ocnet::comparison_table(r), ocnet::comparison_csv(r), j);
  return 0;
}

int run_replay(const CommonFlags& f, const std::string& solution_path) {
  std::optional<std::string> text;
  if (!solution_path.empty()) text = read_file(solution_path);
  auto r = ocnet::replay_worked_example(text ? std::optional<std::string_view>(*text) : std::nullopt,
                                        wavelength_mode(f));
  ordered_json j;
  j["passed"] = r.passed();
  j["wavelength_mode"] = ocnet::to_string(wavelength_mode(f));
  j["codings"] = r.validation.coding_count;
  j["used_wavelengths"] = r.validation.used_wavelengths;
  j["link_cost"] = r.validation.link_cost;
  j["recovery_audit"] = r.recovery_audit;
  for (const auto& fam : r.validation.families)
    j["checks"].push_back({{"family", fam.name}, {"passed", fam.passed()}, {"offenders", fam.offenders}});
  CommonFlags named = f;
  named.topology = std::string(ocnet::worked_example::kTopology);
  emit(named, "replay-example_" + named.topology + "_" + ocnet::to_string(wavelength_mode(f)),
       ocnet::replay_text(r), ocnet::replay_csv(r), j);
  return r.passed() ? 0 : 1;
}

int run_gap(const CommonFlags& f, bool candidates_only) {
  ocnet::GapOptions o;
  o.objective = objective(f);
  o.mode = design_mode(f);
  o.budget.max_seconds = f.budget_secs;
  o.budget.max_nodes = f.budget_nodes;
  o.threads = f.threads;
  if (candidates_only) o.full_candidates = false;
  auto r = ocnet::run_exact_vs_heuristic(scenario(f), o);
  const auto topo = ocnet::builtin_topology(f.topology, f.wavelengths);
  ordered_json j;
  j["topology"] = f.topology;
  j["seed"] = f.seed;
  j["objective"] = f.objective;
  j["mode"] = f.mode;
  j["full_candidates"] = r.full_candidates;
  for (const auto& row : r.rows) {
    ordered_json x{{"load", row.load},
                   {"instance", row.instance},
                   {"demands", row.demands},
                   {"heuristic", {row.heuristic.wavelengths, row.heuristic.link_cost}}};
    if (row.infeasible) {
      x["status"] = "infeasible";
    } else {
      x["exact"] = {row.exact.wavelengths, row.exact.link_cost};
      x["status"] = ocnet::to_string(row.status);
    }
    j["rows"].push_back(x);
  }
  CommonFlags named = f;
  emit(named, stem("exact-gap", f) + "_" + f.objective + "_" + f.mode, ocnet::gap_table(r, topo),
       ocnet::gap_csv(r), j);
  return 0;
}

int run_export(const CommonFlags& f, int instance, const std::string& traffic_path,
               const std::string& format) {
  const auto topo = ocnet::builtin_topology(f.topology, f.wavelengths);
  const double load = f.loads.front();
  const auto demands = traffic_path.empty()
                           ? ocnet::instance_demands(topo.node_count(), load, f.seed, instance)
                           : ocnet::parse_traffic(read_file(traffic_path)).demands();
  const auto model = ocnet::build_model(topo, demands, objective(f));
  const std::string name = f.topology + "_load" + ocnet::format_load(load) + "_seed" +
                           std::to_string(f.seed) + "_instance" + std::to_string(instance) + "_" +
                           f.objective;
  const fs::path dir(f.out_dir);
  if (format == "lp" || format == "both")
    write_file(dir / (name + ".lp"), ocnet::export_model(model, ocnet::ExportFormat::lp));
  if (format == "mps" || format == "both")
    write_file(dir / (name + ".mps"), ocnet::export_model(model, ocnet::ExportFormat::mps));
  write_file(dir / (name + ".manifest"), ocnet::export_manifest(model));
  std::ostringstream csv;
  csv << "family,rows\n";
  for (const auto& fam : model.families()) csv << fam.name << "," << fam.rows << "\n";
  write_file(dir / (name + ".csv"), csv.str());
  std::cout << demands.size() << " demands, " << model.variable_count() << " variables, "
            << model.rows().size() << " rows\nwrote " << (dir / name).string() << ".*\n";
  return 0;
}

int run_validate(const CommonFlags& f, const std::string& solution_path, const std::string& traffic_path) {
  const auto topo = ocnet::builtin_topology(f.topology, f.wavelengths);
  const auto design = ocnet::parse_solution(topo, read_file(solution_path));
  const auto demands =
      traffic_path.empty() ? design.demands : ocnet::parse_traffic(read_file(traffic_path)).demands();
  const auto mode = wavelength_mode(f);
  auto report = ocnet::validate(topo, demands, design.solution, design_mode(f), mode);
  const bool audit = ocnet::audit_exhaustive(topo, demands, design.solution);
  std::cout << report.text() << "recovery audit " << (audit ? "pass" : "FAIL") << "\n"
            << report.records() << "audit status=" << (audit ? "pass" : "fail") << "\n";
  return report.passed() && audit ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Protected optical network design with XOR-coded backups"};
  app.require_subcommand(1);
  CommonFlags f;
  if (const char* env = std::getenv("OCNET_OUT_DIR"); env && *env) f.out_dir = env;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--topology", f.topology, "small6, nsfnet14 or cost239")
        ->check(CLI::IsMember(ocnet::builtin_topology_names()));
    sub->add_option("--load", f.loads, "traffic load(s) in (0, 1]; 1 = full mesh")->delimiter(',');
    sub->add_option("--instances", f.instances, "instances per load below full mesh")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", f.seed, "traffic seed");
    sub->add_option("--wavelengths", f.wavelengths, "wavelengths per link")
        ->check(CLI::PositiveNumber);
    sub->add_option("--k-pairs", f.k_pairs, "candidate pairs per demand")->check(CLI::PositiveNumber);
    sub->add_option("--out-dir", f.out_dir, "output directory (default $OCNET_OUT_DIR or ./results)");
    sub->add_option("--threads", f.threads, "worker threads (0 = hardware)");
  };
  auto add_design = [&](CLI::App* sub) {
    sub->add_option("--objective", f.objective, "eq1: link cost; eq21: wavelengths then link cost")
        ->check(CLI::IsMember({"eq1", "eq21"}));
    sub->add_option("--mode", f.mode, "rwa or rwnca")->check(CLI::IsMember({"rwa", "rwnca"}));
  };
  auto add_wavelength_mode = [&](CLI::App* sub) {
    sub->add_option("--wavelength-mode", f.wavelength_mode, "strict or lenient")
        ->check(CLI::IsMember({"strict", "lenient"}));
  };

  auto* compare = app.add_subcommand("compare", "bypass vs coding heuristic over generated traffic");
  add_common(compare);

  std::string solution_path, traffic_path, format = "both";
  int instance = 0;
  bool candidates_only = false;

  auto* replay = app.add_subcommand("replay-example", "validate and audit the two-source worked example");
  f.wavelength_mode = "strict";
  replay->add_option("--out-dir", f.out_dir, "output directory");
  replay->add_option("--solution", solution_path, "design file replacing the built-in one");
  add_wavelength_mode(replay);

  auto* gap = app.add_subcommand("exact-gap", "exact optimum vs heuristic per instance");
  add_common(gap);
  add_design(gap);
  gap->add_option("--budget-secs", f.budget_secs, "wall-clock budget per instance");
  gap->add_option("--budget-nodes", f.budget_nodes, "search-node budget per instance");
  gap->add_flag("--candidates-only", candidates_only, "search ranked candidate pairs only");

  auto* exporter = app.add_subcommand("export-ilp", "write the design ILP as LP/MPS text plus manifest");
  add_common(exporter);
  add_design(exporter);
  exporter->add_option("--instance", instance, "instance index at the first load");
  exporter->add_option("--traffic", traffic_path, "traffic matrix CSV instead of generated traffic");
  exporter->add_option("--format", format, "lp, mps or both")->check(CLI::IsMember({"lp", "mps", "both"}));

  auto* validator = app.add_subcommand("validate", "check a design file");
  validator->add_option("--topology", f.topology, "topology name")
      ->check(CLI::IsMember(ocnet::builtin_topology_names()));
  validator->add_option("--wavelengths", f.wavelengths, "wavelengths per link");
  validator->add_option("--solution", solution_path, "design file")->required();
  validator->add_option("--traffic", traffic_path, "traffic matrix CSV (default: demands in the design)");
  validator->add_option("--mode", f.mode, "rwa or rwnca")->check(CLI::IsMember({"rwa", "rwnca"}));
  add_wavelength_mode(validator);

  CLI11_PARSE(app, argc, argv);
  if (replay->parsed() && replay->count("--wavelength-mode") == 0) f.wavelength_mode = "lenient";
  if (gap->parsed() && gap->count("--topology") == 0) f.topology = "small6";

  try {
    if (compare->parsed()) return run_compare(f);
    if (replay->parsed()) return run_replay(f, solution_path);
    if (gap->parsed()) return run_gap(f, candidates_only);
    if (exporter->parsed()) return run_export(f, instance, traffic_path, format);
    if (validator->parsed()) return run_validate(f, solution_path, traffic_path);
  } catch (const ocnet::Blocked& e) {
    std::cerr << "blocked: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
