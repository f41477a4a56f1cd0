#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "rbt/opt/bayes_opt.hpp"
#include "rbt/opt/evaluate.hpp"
#include "rbt/opt/pareto.hpp"

namespace rbt::opt {

struct ExperimentConfig {
  int iterations = 40;
  int evals = 5;
  int repetitions = 10;
  std::uint64_t seed = 0;
  std::string optimizer = "bo";
  int workers = 1;
};

struct RepetitionResult {
  int repetition = 0;
  std::vector<EvaluationRecord> history;
  std::vector<EvaluationRecord> front;
  bool found_successful_policy = false;
};

struct ExperimentResult {
  ExperimentConfig config;
  ParamSpace space;
  std::vector<RepetitionResult> repetitions;

  int successful_repetitions() const {
    int n = 0;
    for (const auto& r : repetitions) n += r.found_successful_policy ? 1 : 0;
    return n;
  }
};

inline std::uint64_t iteration_seed(std::uint64_t seed, int rep, int iter) {
  return derive_seed({seed, static_cast<std::uint64_t>(rep), static_cast<std::uint64_t>(iter)});
}

inline std::uint64_t optimizer_seed(std::uint64_t seed, int rep) {
  return derive_seed({seed, static_cast<std::uint64_t>(rep), 0x6f7074ULL});
}

inline RepetitionResult run_repetition(const harness::ScenarioSpec& sc, const ExperimentConfig& cfg, int rep) {
  RepetitionResult out;
  out.repetition = rep;
  const ParamSpace space = sc.space();
  auto optimizer = make_optimizer(cfg.optimizer, space, optimizer_seed(cfg.seed, rep));
  for (int it = 0; it < cfg.iterations; ++it) {
    const auto theta = optimizer->propose(out.history);
    auto rec = evaluate_policy(theta, sc, iteration_seed(cfg.seed, rep, it), cfg.evals);
    rec.iteration = it;
    out.history.push_back(std::move(rec));
  }
  out.front = pareto_front(out.history);
  const int needed = sc.config.rewards.evals_for_success;
  for (const auto& r : out.history) out.found_successful_policy |= r.policy_successful(needed);
  return out;
}

/// Repetitions are independent and run on up to `workers` threads; results
/// do not depend on the worker count.
inline ExperimentResult run_experiment(const harness::ScenarioSpec& sc, const ExperimentConfig& cfg) {
  if (cfg.iterations < 1 || cfg.evals < 1 || cfg.repetitions < 1)
    throw Error(ErrorCode::InvalidDescriptor, "iterations, evals and repetitions must be positive");
  ExperimentResult res;
  res.config = cfg;
  res.space = sc.space();
  res.repetitions.resize(static_cast<std::size_t>(cfg.repetitions));

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (int r = next++; r < cfg.repetitions && !failed; r = next++) {
      try {
        res.repetitions[static_cast<std::size_t>(r)] = run_repetition(sc, cfg, r);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min(cfg.workers, cfg.repetitions));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return res;
}

}  // namespace rbt::opt
