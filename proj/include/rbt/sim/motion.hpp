#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "rbt/sim/world.hpp"

namespace rbt::sim {

inline void validate_command(const MgCommand& cmd) {
  for (int i = 0; i < 3; ++i) {
    if (!(cmd.stiffness[i] >= 0.0)) throw Error(ErrorCode::InvalidCommand, "negative stiffness");
    if (!std::isfinite(cmd.wrench[i])) throw Error(ErrorCode::InvalidCommand, "non-finite wrench");
  }
  if (!cmd.target.finite()) throw Error(ErrorCode::InvalidCommand, "non-finite target");
  if (!(cmd.velocity_limit > 0.0)) throw Error(ErrorCode::InvalidCommand, "velocity_limit must be > 0");
  if (cmd.spiral) {
    const auto& s = *cmd.spiral;
    if (!(s.radius_max >= 0.0) || !(s.path_distance >= 0.0) || !(s.path_velocity > 0.0))
      throw Error(ErrorCode::InvalidCommand, "bad spiral overlay");
  }
}

/// How far the lowest point of arm + held object sits below the end-effector.
inline double hang_below_ee(const WorldState& w, ArmId a) {
  const Held& h = w.arm(a).held;
  return h.kind == Held::Kind::Peg ? w.peg.length : 0.0;
}

/// Lateral position of the lowest point, used to look up the support surface.
inline Vec2 lowest_point_xy(const WorldState& w, ArmId a) {
  const ArmState& arm = w.arm(a);
  if (arm.held.kind == Held::Kind::None) return arm.ee.xy();
  return arm.ee.xy() + rotate(arm.grasp_offset, arm.ee.yaw);
}

/// One quasi-static integration step of the impedance-style motion generator.
///
/// Stiff axes track cmd.target along a straight line, capped at
/// velocity_limit * dt. Compliant axes move along the wrench at the same cap.
/// The lowest point cannot go below its supporting surface; while resting on
/// it the applied wrench magnitude is integrated into force_integral.
inline WorldState step_motion(WorldState w, ArmId a, const MgCommand& cmd, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidCommand, "dt must be > 0");
  validate_command(cmd);

  ArmState& arm = w.arm(a);
  arm.command = cmd;
  const double max_step = cmd.velocity_limit * dt;

  Vec3 tracking;
  Vec3 compliant_wrench;
  for (int i = 0; i < 3; ++i) {
    if (cmd.stiffness[i] > 0.0) {
      tracking[i] = cmd.target.position()[i] - arm.ee.position()[i];
    } else {
      compliant_wrench[i] = cmd.wrench[i];
    }
  }
  const double track_len = tracking.norm();
  if (track_len > max_step) tracking = (max_step / track_len) * tracking;
  Vec3 drift;
  const double wrench_len = compliant_wrench.norm();
  if (wrench_len > 0.0) drift = (max_step / wrench_len) * compliant_wrench;

  Vec3 next = arm.ee.position() + tracking + drift;
  const double hang = hang_below_ee(w, a);
  arm.ee.x = next.x;
  arm.ee.y = next.y;
  const double surface = support_height(w, lowest_point_xy(w, a));
  bool in_contact = false;
  if (next.z - hang <= surface) {
    next.z = surface + hang;
    in_contact = true;
  }
  arm.ee.z = next.z;

  w.contact_force = in_contact ? std::max(0.0, -cmd.wrench.z) : 0.0;
  if (in_contact) w.force_integral += cmd.wrench.norm() * dt;
  w.time += dt;
  sync_held(w, a);
  return w;
}

/// Closes the gripper of `a` on `object` ("peg" or an obstacle id) with a
/// lateral offset expressed in the gripper frame.
inline WorldState grasp(WorldState w, ArmId a, std::string_view object, Vec2 offset) {
  ArmState& arm = w.arm(a);
  if (arm.gripper == GripperState::Closed || !arm.held.empty())
    throw Error(ErrorCode::GripperOccupied, std::string(to_string(a)) + " gripper is not open");

  const bool is_peg = object == kPegId;
  if (!is_peg) {
    const ObstacleSpec* o = find_obstacle(w, object);
    if (o == nullptr) throw Error(ErrorCode::UnknownObject, "no object '" + std::string(object) + "'");
  }
  if (!graspable(w, object)) throw Error(ErrorCode::NotGraspable, std::string(object));

  const Pose gp = grasp_point(w, object);
  const Vec2 off = rotate(offset, arm.ee.yaw);
  const Vec3 fingers{arm.ee.x + off.x, arm.ee.y + off.y, arm.ee.z};
  if ((gp.position() - fingers).norm() > w.physics.grasp_reach + 1e-12)
    throw Error(ErrorCode::OutOfReach, std::string(object) + " is out of reach of " + std::string(to_string(a)));

  // Hand-over: the other gripper lets go of the object but stays closed.
  ArmState& peer = w.arm(other(a));
  const bool peer_holds = is_peg ? peer.held.kind == Held::Kind::Peg
                                 : (peer.held.kind == Held::Kind::Obstacle && peer.held.obstacle_id == object);
  if (peer_holds) {
    peer.held = Held::none();
    peer.grasp_offset = {};
  }

  arm.gripper = GripperState::Closed;
  arm.held = is_peg ? Held::peg() : Held::obstacle(std::string(object));
  arm.grasp_offset = offset;
  if (is_peg) w.peg.holder = PegHolder::by(a);
  sync_held(w, a);
  return w;
}

/// Opens the gripper; a held object comes to rest on the surface below it.
inline WorldState release(WorldState w, ArmId a) {
  ArmState& arm = w.arm(a);
  if (arm.gripper == GripperState::Open)
    throw Error(ErrorCode::NothingHeld, std::string(to_string(a)) + " gripper is already open");
  const Held held = arm.held;
  arm.gripper = GripperState::Open;
  arm.held = Held::none();
  arm.grasp_offset = {};
  if (held.kind == Held::Kind::Peg) {
    w.peg.pose.z = support_height(w, w.peg.pose.xy());
    w.peg.holder = PegHolder::table();
  } else if (held.kind == Held::Kind::Obstacle) {
    ObstacleSpec& o = obstacle_ref(w, held.obstacle_id);
    o.pose.z = support_height(w, o.pose.xy());
  }
  return w;
}

inline bool in_push_contact(const WorldState& w, ArmId a, const ObstacleSpec& o) {
  const Pose& ee = w.arm(a).ee;
  const double dz = ee.z - o.pose.z;
  return horizontal_distance(ee, o.pose) <= o.footprint_radius + w.physics.grasp_reach + 1e-12 && dz >= -1e-12 &&
         dz <= 0.1;
}

/// Pushes an obstacle along `direction`. Heavy obstacles only move when the
/// force reaches their threshold; the force is integrated over the push
/// duration either way.
inline WorldState apply_push(WorldState w, ArmId a, std::string_view obstacle_id, Vec2 direction, double force,
                             double distance) {
  ObstacleSpec& o = obstacle_ref(w, obstacle_id);
  if (!in_push_contact(w, a, o)) throw Error(ErrorCode::NoContact, std::string(obstacle_id));
  const double n = direction.norm();
  if (!(n > 0.0) || !(force >= 0.0) || !(distance >= 0.0))
    throw Error(ErrorCode::InvalidCommand, "bad push parameters");
  const Vec2 dir = (1.0 / n) * direction;

  const bool moves = o.kind == ObstacleKind::Light || force >= o.push_threshold;
  if (moves) {
    o.pose.x += dir.x * distance;
    o.pose.y += dir.y * distance;
    o.pose.z = support_height(w, o.pose.xy());
    ArmState& arm = w.arm(a);
    arm.ee.x += dir.x * distance;
    arm.ee.y += dir.y * distance;
    sync_held(w, a);
  }
  const double duration = distance / w.physics.push_speed;
  w.force_integral += force * duration;
  w.contact_force = force;
  w.time += duration;
  return w;
}

}  // namespace rbt::sim
