#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "rbt/harness/csv.hpp"
#include "rbt/opt/experiment.hpp"
#include "rbt/version.hpp"

namespace rbt::harness {

namespace fs = std::filesystem;

struct RunConfig {
  int scenario = 1;
  int iterations = 40;
  int evals = 5;
  int repetitions = 10;
  std::uint64_t seed = 0;
  std::string optimizer = "bo";
  std::string out = "runs";
  int workers = 1;  // not part of the manifest: results do not depend on it

  opt::ExperimentConfig experiment() const {
    return {iterations, evals, repetitions, seed, optimizer, workers};
  }
};

inline std::string run_dir_name(int scenario, std::uint64_t seed) {
  return "scenario" + std::to_string(scenario) + "_seed" + std::to_string(seed);
}

// --- CSV writers -------------------------------------------------------------

inline std::vector<std::string> theta_columns(const opt::ParamSpace& sp) {
  std::vector<std::string> h;
  for (const auto& d : sp.dims()) h.push_back(d.name);
  return h;
}

inline void append_theta(std::vector<std::string>& row, const std::vector<double>& theta) {
  for (double v : theta) row.push_back(fmt_num(v));
}

/// iteration,iteration_seed,<theta...>,eval<k>_success,eval<k>_insertion,eval<k>_force...,
/// success_count,mean_insertion,mean_force,policy_successful
inline std::string history_csv(const opt::ParamSpace& sp, const std::vector<opt::EvaluationRecord>& hist, int evals,
                               int needed) {
  std::vector<std::string> h{"iteration", "iteration_seed"};
  for (auto& c : theta_columns(sp)) h.push_back(c);
  for (int e = 0; e < evals; ++e)
    for (const char* f : {"_success", "_insertion", "_force"}) h.push_back("eval" + std::to_string(e) + f);
  for (const char* c : {"success_count", "mean_insertion", "mean_force", "policy_successful"}) h.emplace_back(c);
  std::string out = csv_line(h) + "\n";
  for (const auto& r : hist) {
    std::vector<std::string> row{std::to_string(r.iteration), std::to_string(r.iteration_seed)};
    append_theta(row, r.theta);
    for (const auto& e : r.evals) {
      row.push_back(e.success ? "1" : "0");
      row.push_back(fmt_num(e.rewards.insertion));
      row.push_back(fmt_num(e.rewards.force));
    }
    row.push_back(std::to_string(r.success_count));
    row.push_back(fmt_num(r.mean.insertion));
    row.push_back(fmt_num(r.mean.force));
    row.push_back(r.policy_successful(needed) ? "1" : "0");
    out += csv_line(row) + "\n";
  }
  return out;
}

/// iteration,<theta...>,success_count,mean_insertion,mean_force
inline std::string front_csv(const opt::ParamSpace& sp, const std::vector<opt::EvaluationRecord>& front) {
  std::vector<std::string> h{"iteration"};
  for (auto& c : theta_columns(sp)) h.push_back(c);
  for (const char* c : {"success_count", "mean_insertion", "mean_force"}) h.emplace_back(c);
  std::string out = csv_line(h) + "\n";
  for (const auto& r : front) {
    std::vector<std::string> row{std::to_string(r.iteration)};
    append_theta(row, r.theta);
    row.push_back(std::to_string(r.success_count));
    row.push_back(fmt_num(r.mean.insertion));
    row.push_back(fmt_num(r.mean.force));
    out += csv_line(row) + "\n";
  }
  return out;
}

/// One row per episode, with the dispatched program and the effective peg
/// offset at the start of the spiral.
inline std::string episodes_csv(const std::vector<opt::EvaluationRecord>& hist) {
  std::string out = csv_line({"iteration", "eval", "seed", "start_pose", "success", "insertion", "force",
                              "force_integral", "min_lateral_error", "offset_x", "offset_y", "program", "failure"}) +
                    "\n";
  for (const auto& r : hist)
    for (std::size_t e = 0; e < r.evals.size(); ++e) {
      const auto& o = r.evals[e];
      out += csv_line({std::to_string(r.iteration), std::to_string(e), std::to_string(o.seed),
                       std::to_string(o.start_pose), o.success ? "1" : "0", fmt_num(o.rewards.insertion),
                       fmt_num(o.rewards.force), fmt_num(o.force_integral), fmt_num(o.min_lateral_error),
                       fmt_num(o.offset_x), fmt_num(o.offset_y), o.program, o.failure}) +
             "\n";
    }
  return out;
}

/// repetition,found_successful_policy,records,successful_records,front_size,best_insertion,best_force
inline std::string summary_csv(const opt::ExperimentResult& res, int needed) {
  std::string out = csv_line({"repetition", "found_successful_policy", "records", "successful_records",
                              "front_size", "best_insertion", "best_force"}) +
                    "\n";
  for (const auto& rep : res.repetitions) {
    int succ = 0;
    double bi = -1e300, bf = -1e300;
    for (const auto& r : rep.history) {
      succ += r.policy_successful(needed) ? 1 : 0;
      bi = std::max(bi, r.mean.insertion);
      bf = std::max(bf, r.mean.force);
    }
    out += csv_line({std::to_string(rep.repetition), rep.found_successful_policy ? "1" : "0",
                     std::to_string(rep.history.size()), std::to_string(succ), std::to_string(rep.front.size()),
                     fmt_num(bi), fmt_num(bf)}) +
           "\n";
  }
  return out;
}

// --- manifest ----------------------------------------------------------------

inline nlohmann::json manifest_json(const RunConfig& rc, const Config& cfg, const opt::ParamSpace& sp) {
  nlohmann::json dims = nlohmann::json::array();
  for (const auto& d : sp.dims()) dims.push_back({{"name", d.name}, {"lo", d.lo}, {"hi", d.hi}});
  return {{"tool", "rbt"},
          {"code_version", kVersion},
          {"scenario", rc.scenario},
          {"iterations", rc.iterations},
          {"evals", rc.evals},
          {"repetitions", rc.repetitions},
          {"seed", rc.seed},
          {"optimizer", rc.optimizer},
          {"space", dims},
          {"config", cfg}};
}

struct RunOutput {
  fs::path dir;
  opt::ExperimentResult result;
};

/// Runs the experiment and writes every artifact under
/// <out>/scenario<N>_seed<S>/.
inline RunOutput run(const RunConfig& rc, const Config& cfg = Config::defaults()) {
  const ScenarioSpec sc = load_scenario(rc.scenario, cfg);
  RunOutput out;
  out.dir = fs::path(rc.out) / run_dir_name(rc.scenario, rc.seed);
  std::error_code ec;
  fs::create_directories(out.dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create '" + out.dir.string() + "': " + ec.message());
  out.result = opt::run_experiment(sc, rc.experiment());

  const int needed = cfg.rewards.evals_for_success;
  const auto& sp = out.result.space;
  write_file((out.dir / "manifest.json").string(), manifest_json(rc, cfg, sp).dump(2) + "\n");
  for (const auto& rep : out.result.repetitions) {
    const std::string r = std::to_string(rep.repetition);
    write_file((out.dir / ("history_rep" + r + ".csv")).string(), history_csv(sp, rep.history, rc.evals, needed));
    write_file((out.dir / ("front_rep" + r + ".csv")).string(), front_csv(sp, rep.front));
    write_file((out.dir / ("episodes_rep" + r + ".csv")).string(), episodes_csv(rep.history));
  }
  write_file((out.dir / "summary.csv").string(), summary_csv(out.result, needed));
  return out;
}

inline std::pair<RunConfig, Config> read_manifest(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, "bad manifest '" + path + "': " + e.what());
  }
  RunConfig rc;
  rc.scenario = j.at("scenario").get<int>();
  rc.iterations = j.at("iterations").get<int>();
  rc.evals = j.at("evals").get<int>();
  rc.repetitions = j.at("repetitions").get<int>();
  rc.seed = j.at("seed").get<std::uint64_t>();
  rc.optimizer = j.at("optimizer").get<std::string>();
  return {rc, j.at("config").get<Config>()};
}

/// Re-executes the run described by a manifest into `out`.
inline RunOutput rerun(const std::string& manifest_path, const std::string& out, int workers = 1) {
  auto [rc, cfg] = read_manifest(manifest_path);
  rc.out = out;
  rc.workers = workers;
  return run(rc, cfg);
}

}  // namespace rbt::harness
