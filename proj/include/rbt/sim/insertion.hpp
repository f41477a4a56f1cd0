#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>

#include "rbt/sim/motion.hpp"

namespace rbt::sim {

struct InsertionParams {
  double force = 10.0;          // N, pressed downward
  double path_velocity = 0.05;  // m/s along the spiral parameter
  double path_distance = 0.10;  // m, spiral parameter at termination
  double radius = 0.015;        // m, spiral radius reached at path_distance
  std::optional<double> approach_height;  // m; world default when unset
};

/// Archimedean spiral whose radius grows linearly with the path parameter s
/// and whose turns are `pitch` apart: r(s) = radius * s / path_distance,
/// angle(s) = 2*pi * r(s) / pitch.
inline Vec2 spiral_offset(double s, double radius, double path_distance, double pitch) {
  if (path_distance <= 0.0 || radius <= 0.0) return {};
  const double r = radius * std::clamp(s / path_distance, 0.0, 1.0);
  const double angle = 2.0 * std::numbers::pi * r / pitch;
  return {r * std::cos(angle), r * std::sin(angle)};
}

/// Path parameter at spiral step k, clamped at path_distance.
inline double spiral_parameter(int k, double path_velocity, double dt, double path_distance) {
  return std::min(static_cast<double>(k) * path_velocity * dt, path_distance);
}

/// Compliant spiral search. The arm drops with zero z-stiffness under the
/// downward force until the peg touches the block, then sweeps the spiral
/// around the commanded hole estimate one sample per step. The peg seats as
/// soon as its axis is within clearance of the true hole, the hole is free
/// and the contact force reaches the floor.
inline std::pair<WorldState, InsertionOutcome> run_insertion(
    WorldState w, ArmId a, const InsertionParams& p,
    const std::function<void(const WorldState&)>& on_step = {}) {
  if (!w.peg.holder.held_by(a) || w.arm(a).held.kind != Held::Kind::Peg)
    throw Error(ErrorCode::PreconditionViolated, "peg is not held by " + std::string(to_string(a)));
  if (distance(w.arm(a).ee, approach_pose(w, p.approach_height.value_or(w.physics.approach_height))) > w.physics.motion_tolerance + 1e-9)
    throw Error(ErrorCode::PreconditionViolated, std::string(to_string(a)) + " is not at the approach pose");
  if (!(p.force >= 0.0) || !(p.path_velocity > 0.0) || !(p.path_distance >= 0.0) || !(p.radius >= 0.0))
    throw Error(ErrorCode::InvalidCommand, "bad insertion parameters");

  const double dt = w.physics.dt;
  const double cap = w.physics.episode_cap;
  const double pitch = w.physics.spiral_pitch;
  const Vec2 center = w.hole_block.estimate;
  const double force_before = w.force_integral;

  MgCommand cmd = w.arm(a).command;
  cmd.target = w.arm(a).ee;
  cmd.target.x = center.x;
  cmd.target.y = center.y;
  cmd.stiffness.z = 0.0;
  cmd.wrench = {0.0, 0.0, -p.force};
  cmd.spiral = SpiralSpec{p.radius, p.path_velocity, p.path_distance};

  InsertionOutcome out;
  auto resting = [&] {
    const double surface = support_height(w, w.peg.pose.xy());
    return w.peg.pose.z <= surface + 1e-12;
  };

  while (!resting() && w.time < cap) {
    w = step_motion(std::move(w), a, cmd, dt);
    if (on_step) on_step(w);
  }

  if (resting()) {
    out.contact_steps = 1;
    for (int k = 0;; ++k) {
      const double s = spiral_parameter(k, p.path_velocity, dt, p.path_distance);
      if (k > 0) {
        const Vec2 target = center + spiral_offset(s, p.radius, p.path_distance, pitch);
        ArmState& arm = w.arm(a);
        arm.ee.x = target.x;
        arm.ee.y = target.y;
        sync_held(w, a);
        w.time += dt;
        w.contact_force = p.force;
        w.force_integral += cmd.wrench.norm() * dt;
        ++out.contact_steps;
        ++out.spiral_steps;
        if (on_step) on_step(w);
      } else {
        out.initial_offset = w.peg.pose.xy() - w.hole_block.center.xy();
      }
      const double err = lateral_error(w);
      out.min_lateral_error = std::min(out.min_lateral_error, err);
      if (p.force >= w.physics.contact_force_floor && err <= w.clearance && !blocked(w)) {
        out.success = true;
        break;
      }
      if (s >= p.path_distance || w.time >= cap) break;
    }
  } else {
    out.min_lateral_error = lateral_error(w);
  }

  if (out.success) {
    ArmState& arm = w.arm(a);
    arm.held = Held::none();
    arm.grasp_offset = {};
    w.peg.pose = {w.hole_block.center.x, w.hole_block.center.y, w.hole_block.top() - w.hole_block.depth,
                  w.peg.pose.yaw};
    w.peg.holder = PegHolder::inserted();
    if (on_step) on_step(w);
  }
  w.arm(a).command = cmd;
  out.cumulative_force = w.force_integral - force_before;
  out.final_peg_z = w.peg.pose.z;
  w.last_insertion = out;
  return {std::move(w), out};
}

}  // namespace rbt::sim
