#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rbt/config.hpp"
#include "rbt/error.hpp"
#include "rbt/sim/geometry.hpp"

namespace rbt::sim {

enum class ArmId : std::uint8_t { Left = 0, Right = 1 };

inline constexpr std::array<ArmId, 2> kArms{ArmId::Left, ArmId::Right};

inline constexpr std::string_view to_string(ArmId a) noexcept { return a == ArmId::Left ? "left" : "right"; }

inline ArmId arm_from_string(std::string_view s) {
  if (s == "left") return ArmId::Left;
  if (s == "right") return ArmId::Right;
  throw Error(ErrorCode::UnknownObject, "unknown arm '" + std::string(s) + "'");
}

inline constexpr ArmId other(ArmId a) noexcept { return a == ArmId::Left ? ArmId::Right : ArmId::Left; }

enum class GripperState : std::uint8_t { Open, Closed };
enum class ObstacleKind : std::uint8_t { Light, Heavy };

inline constexpr std::string_view kPegId = "peg";

struct ObstacleSpec {
  std::string id;
  ObstacleKind kind = ObstacleKind::Light;
  double footprint_radius = 0.015;
  double push_threshold = 0.0;  // N, Heavy only
  Pose pose;                    // base center, resting on a surface

  friend bool operator==(const ObstacleSpec&, const ObstacleSpec&) = default;
};

struct Held {
  enum class Kind : std::uint8_t { None, Peg, Obstacle };
  Kind kind = Kind::None;
  std::string obstacle_id;

  static Held none() { return {}; }
  static Held peg() { return {Kind::Peg, {}}; }
  static Held obstacle(std::string id) { return {Kind::Obstacle, std::move(id)}; }
  bool empty() const { return kind == Kind::None; }
  friend bool operator==(const Held&, const Held&) = default;
};

struct SpiralSpec {
  double radius_max = 0.0;     // m
  double path_velocity = 0.05; // m/s
  double path_distance = 0.0;  // m

  friend bool operator==(const SpiralSpec&, const SpiralSpec&) = default;
};

/// Motion-generator setpoint. Zero stiffness on an axis disables position
/// tracking there and hands that axis to the wrench.
struct MgCommand {
  Pose target;
  Vec3 stiffness{2000.0, 2000.0, 2000.0};  // N/m
  Vec3 wrench;                             // N
  std::optional<SpiralSpec> spiral;
  double velocity_limit = 0.2;  // m/s

  friend bool operator==(const MgCommand&, const MgCommand&) = default;
};

struct ArmState {
  ArmId id = ArmId::Left;
  Pose ee;
  GripperState gripper = GripperState::Open;
  Held held;
  Vec2 grasp_offset;
  MgCommand command;

  friend bool operator==(const ArmState&, const ArmState&) = default;
};

struct PegHolder {
  enum class Kind : std::uint8_t { Arm, Table, Inserted };
  Kind kind = Kind::Table;
  ArmId arm = ArmId::Left;

  static PegHolder table() { return {Kind::Table, ArmId::Left}; }
  static PegHolder inserted() { return {Kind::Inserted, ArmId::Left}; }
  static PegHolder by(ArmId a) { return {Kind::Arm, a}; }
  bool held_by(ArmId a) const { return kind == Kind::Arm && arm == a; }
  friend bool operator==(const PegHolder&, const PegHolder&) = default;
};

struct Peg {
  Pose pose;  // tip (bottom center)
  double radius = 0.010;
  double length = 0.050;
  PegHolder holder;

  friend bool operator==(const Peg&, const Peg&) = default;
};

struct HoleBlock {
  Pose center;     // true hole center on the top face
  Vec2 estimate;   // commanded hole center, offset by domain randomization
  double hole_radius = 0.013;
  double depth = 0.040;
  double half_extent = 0.15;

  double top() const { return center.z; }
  friend bool operator==(const HoleBlock&, const HoleBlock&) = default;
};

/// Result of one spiral insertion attempt.
struct InsertionOutcome {
  bool success = false;
  double min_lateral_error = std::numeric_limits<double>::infinity();
  double cumulative_force = 0.0;  // N*s integrated during this insertion
  double final_peg_z = 0.0;
  Vec2 initial_offset;  // peg axis minus hole center when the spiral starts
  int contact_steps = 0;
  int spiral_steps = 0;

  friend bool operator==(const InsertionOutcome&, const InsertionOutcome&) = default;
};

/// Complete simulation state. A plain value: every operation maps a state to a
/// new state.
struct WorldState {
  std::array<ArmState, 2> arms;
  Peg peg;
  HoleBlock hole_block;
  double clearance = 0.003;
  std::vector<ObstacleSpec> obstacles;
  double force_integral = 0.0;  // N*s
  double contact_force = 0.0;   // N, last step
  double time = 0.0;            // s
  double table_z = 0.0;
  int start_pose_index = -1;
  std::optional<InsertionOutcome> last_insertion;
  PhysicsConfig physics;

  ArmState& arm(ArmId a) { return arms[static_cast<std::size_t>(a)]; }
  const ArmState& arm(ArmId a) const { return arms[static_cast<std::size_t>(a)]; }

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

inline const ObstacleSpec* find_obstacle(const WorldState& w, std::string_view id) {
  auto it = std::find_if(w.obstacles.begin(), w.obstacles.end(), [&](const auto& o) { return o.id == id; });
  return it == w.obstacles.end() ? nullptr : &*it;
}

inline ObstacleSpec& obstacle_ref(WorldState& w, std::string_view id) {
  auto it = std::find_if(w.obstacles.begin(), w.obstacles.end(), [&](const auto& o) { return o.id == id; });
  if (it == w.obstacles.end()) throw Error(ErrorCode::UnknownObject, "no obstacle '" + std::string(id) + "'");
  return *it;
}

inline bool over_block(const WorldState& w, Vec2 p) {
  const auto& b = w.hole_block;
  return std::abs(p.x - b.center.x) <= b.half_extent && std::abs(p.y - b.center.y) <= b.half_extent;
}

/// Height of the supporting surface under a point: block top or table.
inline double support_height(const WorldState& w, Vec2 p) {
  return over_block(w, p) ? w.hole_block.top() : w.table_z;
}

inline bool obstacle_blocks(const WorldState& w, const ObstacleSpec& o) {
  return horizontal_distance(o.pose, w.hole_block.center) < o.footprint_radius + w.hole_block.hole_radius;
}

inline bool blocked(const WorldState& w) {
  return std::any_of(w.obstacles.begin(), w.obstacles.end(), [&](const auto& o) { return obstacle_blocks(w, o); });
}

inline bool blocked_by(const WorldState& w, std::string_view id) {
  const auto* o = find_obstacle(w, id);
  return o != nullptr && obstacle_blocks(w, *o);
}

inline bool graspable(const WorldState& w, std::string_view id) {
  if (id == kPegId) return w.peg.holder.kind != PegHolder::Kind::Inserted;
  const auto* o = find_obstacle(w, id);
  return o != nullptr && o->kind == ObstacleKind::Light && o->footprint_radius <= w.physics.gripper_opening;
}

/// Distance from the peg axis to the true hole center.
inline double lateral_error(const WorldState& w) { return horizontal_distance(w.peg.pose, w.hole_block.center); }

/// End-effector pose from which insertion starts: above the commanded hole
/// estimate with the peg tip approach_height above the block.
inline Pose approach_pose(const WorldState& w, double approach_height) {
  return {w.hole_block.estimate.x, w.hole_block.estimate.y, w.hole_block.top() + approach_height + w.peg.length, 0.0};
}

inline Pose approach_pose(const WorldState& w) { return approach_pose(w, w.physics.approach_height); }

inline bool at_approach_region(const WorldState& w, ArmId a) {
  const Pose ap = approach_pose(w);
  const Pose& ee = w.arm(a).ee;
  const double dz = ee.z - ap.z;
  return horizontal_distance(ee, ap) <= w.physics.approach_region_radius &&
         dz >= -w.physics.motion_tolerance && dz <= w.physics.approach_region_height;
}

/// Vertical distance from an object's reference point up to where it is gripped.
inline double grip_depth(const WorldState& w, std::string_view object) {
  return object == kPegId ? w.peg.length : 0.0;
}

inline Pose object_pose(const WorldState& w, std::string_view object) {
  if (object == kPegId) return w.peg.pose;
  const auto* o = find_obstacle(w, object);
  if (o == nullptr) throw Error(ErrorCode::UnknownObject, "no object '" + std::string(object) + "'");
  return o->pose;
}

inline Pose grasp_point(const WorldState& w, std::string_view object) {
  Pose p = object_pose(w, object);
  p.z += grip_depth(w, object);
  return p;
}

/// Re-attaches the held object of `a` to its gripper.
inline void sync_held(WorldState& w, ArmId a) {
  const ArmState& arm = w.arm(a);
  const Vec2 off = rotate(arm.grasp_offset, arm.ee.yaw);
  switch (arm.held.kind) {
    case Held::Kind::None:
      return;
    case Held::Kind::Peg:
      w.peg.pose = {arm.ee.x + off.x, arm.ee.y + off.y, arm.ee.z - w.peg.length, arm.ee.yaw};
      return;
    case Held::Kind::Obstacle: {
      ObstacleSpec& o = obstacle_ref(w, arm.held.obstacle_id);
      o.pose = {arm.ee.x + off.x, arm.ee.y + off.y, arm.ee.z, o.pose.yaw};
      return;
    }
  }
}

/// Builds the default world: both arms open at their rest poses, peg on the
/// table at the configured drop pose, no obstacles.
inline WorldState make_world(const Config& cfg) {
  WorldState w;
  w.physics = cfg.physics;
  w.clearance = cfg.geometry.clearance;
  w.table_z = cfg.geometry.table_z;
  w.hole_block.center = cfg.geometry.hole_center;
  w.hole_block.estimate = cfg.geometry.hole_center.xy();
  w.hole_block.hole_radius = cfg.geometry.peg_radius + cfg.geometry.clearance;
  w.hole_block.depth = cfg.geometry.hole_depth;
  w.hole_block.half_extent = cfg.geometry.block_half_extent;
  w.peg.radius = cfg.geometry.peg_radius;
  w.peg.length = cfg.geometry.peg_length;
  w.peg.pose = cfg.layout.peg_drop;
  w.peg.holder = PegHolder::table();
  for (ArmId a : kArms) {
    ArmState& arm = w.arm(a);
    arm.id = a;
    arm.ee = a == ArmId::Left ? cfg.randomization.start_poses.front() : cfg.layout.right_home;
    arm.command.target = arm.ee;
    const double k = cfg.physics.default_stiffness;
    arm.command.stiffness = {k, k, k};
    arm.command.velocity_limit = cfg.physics.default_velocity_limit;
  }
  return w;
}

}  // namespace rbt::sim
