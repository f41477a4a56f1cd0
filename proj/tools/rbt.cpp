// Command-line front end: run experiments, plot run directories, inspect
// scenarios and export single-episode traces.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "rbt/rbt.hpp"

namespace {

int default_workers() {
  if (const char* env = std::getenv("RBT_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

rbt::Config load_or_default(const std::string& path) {
  return path.empty() ? rbt::Config::defaults() : rbt::load_config(path);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace rbt;
  CLI::App app{"Behavior-tree skill learning with recovery behaviors"};
  app.require_subcommand(1);

  harness::RunConfig rc;
  std::string config_path;
  auto* run = app.add_subcommand("run", "Run an experiment and write CSVs under OUT/scenario<N>_seed<S>");
  run->add_option("--scenario", rc.scenario, "Scenario id (1-5)")->required()->check(CLI::Range(1, 5));
  run->add_option("--iterations", rc.iterations, "Optimizer iterations per repetition")->check(CLI::PositiveNumber);
  run->add_option("--evals", rc.evals, "Randomized episodes per iteration")->check(CLI::PositiveNumber);
  run->add_option("--repetitions", rc.repetitions, "Independent repetitions")->check(CLI::PositiveNumber);
  run->add_option("--seed", rc.seed, "Master seed");
  run->add_option("--optimizer", rc.optimizer, "bo or random")->check(CLI::IsMember({"bo", "random"}));
  run->add_option("--out", rc.out, "Output directory");
  run->add_option("--config", config_path, "Config JSON (defaults built in)");

  std::string plot_in;
  auto* plot = app.add_subcommand("plot", "Write pareto.svg for a run directory or a directory of runs");
  plot->add_option("--in", plot_in, "Run directory")->required();

  std::string manifest, rerun_out;
  auto* rerun = app.add_subcommand("rerun", "Re-execute a run from its manifest");
  rerun->add_option("--manifest", manifest, "manifest.json of an earlier run")->required();
  rerun->add_option("--out", rerun_out, "Output directory")->required();

  auto* scenarios = app.add_subcommand("scenarios", "Inspect scenarios");
  scenarios->require_subcommand(1);
  auto* list = scenarios->add_subcommand("list", "List scenarios");
  int dump_id = 1;
  auto* dump = scenarios->add_subcommand("dump", "Print a scenario as JSON");
  dump->add_option("id", dump_id, "Scenario id")->required();

  auto* config = app.add_subcommand("config", "Print the built-in configuration or skill catalog as JSON");
  bool catalog_only = false;
  config->add_flag("--catalog", catalog_only, "Print the skill catalog instead");

  int trace_scenario = 1;
  std::uint64_t trace_seed = 0;
  std::vector<double> theta;
  std::string trace_out;
  auto* trace = app.add_subcommand("trace", "Export the CSV trace of one episode");
  trace->add_option("--scenario", trace_scenario, "Scenario id")->required()->check(CLI::Range(1, 5));
  trace->add_option("--seed", trace_seed, "Randomization seed");
  trace->add_option("--theta", theta, "Learned parameters in space order (defaults if omitted)");
  trace->add_option("--config", config_path, "Config JSON");
  trace->add_option("--out", trace_out, "Output CSV (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      rc.workers = default_workers();
      const auto out = harness::run(rc, load_or_default(config_path));
      std::cout << out.dir.string() << ": " << out.result.successful_repetitions() << "/" << rc.repetitions
                << " repetitions found a successful policy\n";
    } else if (*plot) {
      for (const auto& p : harness::plot(plot_in)) std::cout << p.string() << "\n";
    } else if (*rerun) {
      const auto out = harness::rerun(manifest, rerun_out, default_workers());
      std::cout << out.dir.string() << "\n";
    } else if (*list) {
      for (int i = 1; i <= harness::kScenarioCount; ++i) {
        const auto s = harness::load_scenario(i);
        std::cout << i << "  " << s.name << "  dim=" << s.space().dim() << "  " << s.description << "\n";
      }
    } else if (*dump) {
      std::cout << harness::scenario_to_json(harness::load_scenario(dump_id)).dump(2) << "\n";
    } else if (*config) {
      if (catalog_only) {
        nlohmann::json j = nlohmann::json::array();
        j.push_back(skills::spec_to_json(skills::peg_insertion_spec()));
        for (const auto& s : skills::recovery_catalog()) j.push_back(skills::spec_to_json(s));
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << nlohmann::json(Config::defaults()).dump(2) << "\n";
      }
    } else if (*trace) {
      const auto sc = harness::load_scenario(trace_scenario, load_or_default(config_path));
      if (theta.empty()) theta = sc.default_theta();
      sim::EpisodeTrace tr;
      const auto o = opt::evaluate_episode(theta, sc, trace_seed, &tr);
      if (trace_out.empty()) {
        tr.write_csv(std::cout);
      } else {
        std::ofstream f(trace_out);
        if (!f) throw Error(ErrorCode::Io, "cannot write '" + trace_out + "'");
        tr.write_csv(f);
      }
      std::cerr << (o.success ? "success" : "failure") << " insertion=" << fmt_num(o.rewards.insertion)
                << " force=" << fmt_num(o.rewards.force) << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
