#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "rbt/harness/scenario.hpp"
#include "rbt/opt/space.hpp"
#include "rbt/rng.hpp"
#include "rbt/sim/randomize.hpp"

namespace rbt::opt {

/// Episode rewards. The depth term measures the peg tip above the hole bottom
/// relative to the approach height and is zero when insertion never started;
/// the proximity term uses the insertion's closest lateral approach, or the
/// final peg-to-hole distance without one.
inline Objectives episode_rewards(bool success, const sim::WorldState& w, const RewardConfig& rc) {
  const auto& ins = w.last_insertion;
  const double d_min = ins ? ins->min_lateral_error : sim::lateral_error(w);
  double depth_term = 0.0;
  if (ins) {
    const double bottom = w.hole_block.top() - w.hole_block.depth;
    const double z_start = w.hole_block.depth + w.physics.approach_height;
    depth_term = std::clamp(1.0 - (ins->final_peg_z - bottom) / z_start, 0.0, 1.0);
  }
  Objectives o;
  o.insertion = rc.success_weight * (success ? 1.0 : 0.0) +
                rc.proximity_weight * (1.0 - std::min(d_min / rc.distance_scale, 1.0)) + rc.depth_weight * depth_term;
  o.force = -std::min(w.force_integral / rc.force_normalizer, 1.0);
  return o;
}

inline std::uint64_t eval_seed(std::uint64_t iteration_seed, int eval) {
  return derive_seed({iteration_seed, static_cast<std::uint64_t>(eval)});
}

/// One randomized episode of `sc` under parameters `theta`.
inline EvalOutcome evaluate_episode(const std::vector<double>& theta, const harness::ScenarioSpec& sc,
                                    std::uint64_t seed, sim::EpisodeTrace* trace = nullptr) {
  EvalOutcome out;
  out.seed = seed;
  const auto w0 = sim::randomize_domain(sc.world, seed, sc.config.randomization, sc.production_arm);
  out.start_pose = w0.start_pose_index;
  plan::EpisodeResult r;
  try {
    r = plan::run_episode(w0, sc.setup(theta), sc.config, trace);
  } catch (const Error& e) {
    r.success = false;
    r.world = w0;
    r.failure = e.what();
  }
  out.success = r.success;
  out.rewards = episode_rewards(r.success, r.world, sc.config.rewards);
  out.force_integral = r.world.force_integral;
  if (r.world.last_insertion) {
    out.min_lateral_error = r.world.last_insertion->min_lateral_error;
    out.offset_x = r.world.last_insertion->initial_offset.x;
    out.offset_y = r.world.last_insertion->initial_offset.y;
  } else {
    out.min_lateral_error = sim::lateral_error(r.world);
  }
  out.program = r.plan_log.empty() ? std::string() : join(r.plan_log, " / ");
  out.failure = r.failure;
  return out;
}

/// Runs `evals` randomized episodes and aggregates them.
inline EvaluationRecord evaluate_policy(const std::vector<double>& theta, const harness::ScenarioSpec& sc,
                                        std::uint64_t iteration_seed, int evals = 5) {
  if (!sc.space().contains(theta)) throw Error(ErrorCode::OutOfBounds, "theta outside the parameter space");
  EvaluationRecord rec;
  rec.iteration_seed = iteration_seed;
  rec.theta = theta;
  for (int e = 0; e < evals; ++e) {
    rec.evals.push_back(evaluate_episode(theta, sc, eval_seed(iteration_seed, e)));
    const auto& o = rec.evals.back();
    rec.mean.insertion += o.rewards.insertion / evals;
    rec.mean.force += o.rewards.force / evals;
    rec.success_count += o.success ? 1 : 0;
  }
  return rec;
}

}  // namespace rbt::opt
