#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rbt/error.hpp"
#include "rbt/sim/geometry.hpp"

namespace rbt {

/// Simulator constants. None of these come from hardware; they are chosen so
/// that insertion depends on spiral coverage and force, and pushing on a
/// force threshold.
struct PhysicsConfig {
  double dt = 0.01;                       // s
  double episode_cap = 30.0;              // s of simulated time
  double spiral_pitch = 0.004;            // m between spiral turns
  double contact_force_floor = 2.0;       // N needed to seat the peg
  double push_speed = 0.05;               // m/s
  double grasp_reach = 0.02;              // m
  double gripper_opening = 0.04;          // m
  double motion_tolerance = 1e-3;         // m
  double default_velocity_limit = 0.2;    // m/s
  double default_stiffness = 2000.0;      // N/m
  double approach_height = 0.01;          // m of peg tip above the block at approach
  double approach_region_radius = 0.08;   // m
  double approach_region_height = 0.15;   // m above the approach pose
  int max_ticks = 100000;

  friend bool operator==(const PhysicsConfig&, const PhysicsConfig&) = default;
};

struct GeometryConfig {
  double peg_radius = 0.010;
  double peg_length = 0.050;
  double clearance = 0.003;
  double hole_depth = 0.040;
  sim::Pose hole_center{0.55, 0.10, 0.10, 0.0};  // true hole, on the block's top face
  double block_half_extent = 0.15;
  double table_z = 0.0;

  friend bool operator==(const GeometryConfig&, const GeometryConfig&) = default;
};

struct RandomizationConfig {
  double hole_sigma = 0.008;  // m, per axis
  std::vector<sim::Pose> start_poses{
      {0.550, 0.100, 0.20, 0.0},
      {0.575, 0.100, 0.18, 0.0},
      {0.525, 0.100, 0.18, 0.0},
      {0.550, 0.125, 0.19, 0.0},
      {0.550, 0.075, 0.21, 0.0},
  };

  friend bool operator==(const RandomizationConfig&, const RandomizationConfig&) = default;
};

struct RewardConfig {
  double success_weight = 100.0;
  double proximity_weight = 50.0;
  double depth_weight = 25.0;
  double distance_scale = 0.05;     // m
  double force_normalizer = 300.0;  // N*s
  int evals_for_success = 3;        // of evals per iteration

  double max_insertion_reward() const { return success_weight + proximity_weight + depth_weight; }

  friend bool operator==(const RewardConfig&, const RewardConfig&) = default;
};

struct Bounds {
  double lo = 0.0;
  double hi = 1.0;

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

struct SkillBoundsConfig {
  Bounds insertion_force{1.0, 30.0};
  Bounds path_velocity{0.01, 0.10};
  Bounds path_distance{0.01, 0.20};
  Bounds radius{0.0, 0.03};
  Bounds push_force{1.0, 40.0};
  Bounds push_distance{0.02, 0.20};
  Bounds grasp_offset{-0.02, 0.02};

  friend bool operator==(const SkillBoundsConfig&, const SkillBoundsConfig&) = default;
};

struct LayoutConfig {
  sim::Pose right_home{0.45, -0.25, 0.25, 0.0};
  sim::Pose peg_drop{0.40, -0.30, 0.0, 0.0};       // peg tip on the table
  sim::Pose handover_point{0.50, -0.10, 0.30, 0.0};  // peg grasp point during exchange
  sim::Pose place_pose{0.30, 0.30, 0.0, 0.0};
  sim::Vec2 push_direction{0.0, 1.0};
  double push_distance = 0.10;
  double light_footprint = 0.015;
  double heavy_footprint = 0.030;
  double heavy_push_threshold = 15.0;  // N
  sim::Vec2 exchange_offset{0.005, 0.005};
  double lift_height = 0.05;

  friend bool operator==(const LayoutConfig&, const LayoutConfig&) = default;
};

struct Config {
  PhysicsConfig physics;
  GeometryConfig geometry;
  RandomizationConfig randomization;
  RewardConfig rewards;
  SkillBoundsConfig bounds;
  LayoutConfig layout;

  static const Config& defaults() {
    static const Config c{};
    return c;
  }

  friend bool operator==(const Config&, const Config&) = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(PhysicsConfig, dt, episode_cap, spiral_pitch, contact_force_floor,
                                                push_speed, grasp_reach, gripper_opening, motion_tolerance,
                                                default_velocity_limit, default_stiffness, approach_height,
                                                approach_region_radius, approach_region_height, max_ticks)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(GeometryConfig, peg_radius, peg_length, clearance, hole_depth,
                                                hole_center, block_half_extent, table_z)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RandomizationConfig, hole_sigma, start_poses)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RewardConfig, success_weight, proximity_weight, depth_weight,
                                                distance_scale, force_normalizer, evals_for_success)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Bounds, lo, hi)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SkillBoundsConfig, insertion_force, path_velocity, path_distance,
                                                radius, push_force, push_distance, grasp_offset)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(LayoutConfig, right_home, peg_drop, handover_point, place_pose,
                                                push_direction, push_distance, light_footprint, heavy_footprint,
                                                heavy_push_threshold, exchange_offset, lift_height)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Config, physics, geometry, randomization, rewards, bounds, layout)

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path + "'");
  try {
    return nlohmann::json::parse(in).get<Config>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, "bad config '" + path + "': " + e.what());
  }
}

}  // namespace rbt
