#pragma once

#include <cstdint>

#include "rbt/rng.hpp"
#include "rbt/sim/world.hpp"

namespace rbt::sim {

/// Seeded domain randomization: Gaussian error on the commanded hole center
/// (per axis) and a uniformly drawn start pose for the active arm.
inline WorldState randomize_domain(WorldState w, std::uint64_t seed, const RandomizationConfig& cfg,
                                   ArmId active = ArmId::Left) {
  Rng rng(seed);
  const double ex = rng.normal(0.0, cfg.hole_sigma);
  const double ey = rng.normal(0.0, cfg.hole_sigma);
  w.hole_block.estimate = w.hole_block.center.xy() + Vec2{ex, ey};
  if (!cfg.start_poses.empty()) {
    const auto idx = rng.below(cfg.start_poses.size());
    ArmState& arm = w.arm(active);
    arm.ee = cfg.start_poses[idx];
    arm.command.target = arm.ee;
    w.start_pose_index = static_cast<int>(idx);
    sync_held(w, active);
  }
  return w;
}

}  // namespace rbt::sim
