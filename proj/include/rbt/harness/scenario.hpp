#pragma once

#include <string>
#include <vector>

#include "rbt/opt/space.hpp"
#include "rbt/plan/execute.hpp"
#include "rbt/sim/motion.hpp"

namespace rbt::harness {

using sim::ArmId;

/// A complete task setup: initial world (before randomization), production
/// skill, the recovery catalog available to the planner and per-skill
/// Manual/Learned modes.
struct ScenarioSpec {
  int id = 1;
  std::string name;
  std::string description;
  Config config;
  sim::WorldState world;
  skills::SkillSpec production;
  skills::Grounding production_grounding;
  std::vector<skills::SkillSpec> catalog;
  ArmId production_arm = ArmId::Left;

  /// Learned parameters of the production skill and the catalog, in that
  /// order, named "<skill>.<param>".
  opt::ParamSpace space() const {
    std::vector<opt::Dimension> dims;
    auto add = [&](const skills::SkillSpec& s) {
      for (const auto& p : s.params)
        if (p.mode == skills::ParamMode::Learned) dims.push_back({s.name + "." + p.name, p.lo, p.hi});
    };
    add(production);
    for (const auto& s : catalog) add(s);
    return opt::ParamSpace(std::move(dims));
  }

  /// Splits a point of space() into per-skill bindings. Manual parameters
  /// keep their defaults.
  plan::SkillBindings bindings(const std::vector<double>& theta) const {
    const auto sp = space();
    if (theta.size() != sp.dim()) throw Error(ErrorCode::OutOfBounds, "theta has the wrong dimension");
    plan::SkillBindings b;
    for (std::size_t i = 0; i < sp.dim(); ++i) {
      const auto& n = sp[i].name;
      const auto dot = n.find('.');
      b[n.substr(0, dot)][n.substr(dot + 1)] = theta[i];
    }
    return b;
  }

  /// Defaults of the learned parameters, in space() order.
  std::vector<double> default_theta() const {
    std::vector<double> out;
    auto add = [&](const skills::SkillSpec& s) {
      for (const auto& p : s.params)
        if (p.mode == skills::ParamMode::Learned) out.push_back(p.default_value);
    };
    add(production);
    for (const auto& s : catalog) add(s);
    return out;
  }

  plan::EpisodeSetup setup(const std::vector<double>& theta) const {
    plan::EpisodeSetup s;
    s.production = &production;
    s.production_grounding = production_grounding;
    s.catalog = &catalog;
    s.bindings = bindings(theta);
    s.planner.production_arm = production_arm;
    return s;
  }
};

/// Puts the peg into `a`'s gripper at its current pose with zero offset.
inline sim::WorldState hold_peg(sim::WorldState w, ArmId a) {
  const sim::Pose ee = w.arm(a).ee;
  w.peg.pose = {ee.x, ee.y, ee.z - w.peg.length, ee.yaw};
  w.peg.holder = sim::PegHolder::table();
  return sim::grasp(std::move(w), a, sim::kPegId, {});
}

inline constexpr int kScenarioCount = 5;

inline ScenarioSpec load_scenario(int id, const Config& cfg = Config::defaults()) {
  if (id < 1 || id > kScenarioCount) throw Error(ErrorCode::UnknownScenario, "scenario " + std::to_string(id));
  ScenarioSpec s;
  s.id = id;
  s.config = cfg;
  s.production = skills::peg_insertion_spec(cfg);
  s.production_grounding = {{"arm", "left"}};
  s.world = sim::make_world(cfg);
  const auto& l = cfg.layout;
  const sim::Pose hole = cfg.geometry.hole_center;

  switch (id) {
    case 1:
      s.name = "insertion";
      s.description = "peg insertion only, no obstacles";
      s.world = hold_peg(s.world, ArmId::Left);
      break;
    case 2:
      s.name = "light_obstacle";
      s.description = "small block on the hole, manual pick-place by the right arm";
      s.world = hold_peg(s.world, ArmId::Left);
      s.world.obstacles.push_back({"small_block", sim::ObstacleKind::Light, l.light_footprint, 0.0, hole});
      s.catalog = {skills::pick_place_spec(cfg)};
      break;
    case 3:
      s.name = "heavy_obstacle";
      s.description = "heavy block on the hole, push force learned";
      s.world = hold_peg(s.world, ArmId::Left);
      s.world.obstacles.push_back(
          {"heavy_block", sim::ObstacleKind::Heavy, l.heavy_footprint, l.heavy_push_threshold, hole});
      s.catalog = {skills::push_spec(cfg).with_mode("force", skills::ParamMode::Learned)};
      break;
    case 4:
    case 5: {
      s.name = id == 4 ? "exchange_manual" : "exchange_learned";
      s.description = id == 4 ? "dropped peg, pick-exchange with fixed offsets"
                              : "dropped peg, pick-exchange offsets learned";
      auto ex = skills::pick_exchange_spec(cfg)
                    .with_default("offset_x", l.exchange_offset.x)
                    .with_default("offset_y", l.exchange_offset.y);
      if (id == 5) ex = ex.with_mode("offset_x", skills::ParamMode::Learned).with_mode("offset_y", skills::ParamMode::Learned);
      s.catalog = {ex};
      break;
    }
  }
  return s;
}

/// Structured description of a scenario: world layout, skills and which
/// parameters are learned.
inline nlohmann::json scenario_to_json(const ScenarioSpec& s) {
  nlohmann::json obstacles = nlohmann::json::array();
  for (const auto& o : s.world.obstacles)
    obstacles.push_back({{"id", o.id},
                         {"kind", o.kind == sim::ObstacleKind::Light ? "light" : "heavy"},
                         {"footprint_radius", o.footprint_radius},
                         {"push_threshold", o.push_threshold},
                         {"pose", o.pose}});
  std::string holder = "table";
  if (s.world.peg.holder.kind == sim::PegHolder::Kind::Arm) holder = std::string(sim::to_string(s.world.peg.holder.arm));
  nlohmann::json catalog = nlohmann::json::array();
  for (const auto& c : s.catalog) catalog.push_back(skills::spec_to_json(c));
  nlohmann::json space = nlohmann::json::array();
  const auto sp = s.space();
  for (const auto& d : sp.dims()) space.push_back({{"name", d.name}, {"lo", d.lo}, {"hi", d.hi}});
  return {{"id", s.id},
          {"name", s.name},
          {"description", s.description},
          {"production", skills::spec_to_json(s.production)},
          {"production_arm", std::string(sim::to_string(s.production_arm))},
          {"catalog", catalog},
          {"learned_space", space},
          {"world",
           {{"obstacles", obstacles},
            {"peg", {{"holder", holder}, {"pose", s.world.peg.pose}}},
            {"hole_center", s.world.hole_block.center},
            {"clearance", s.world.clearance},
            {"start_poses", s.config.randomization.start_poses},
            {"hole_sigma", s.config.randomization.hole_sigma}}}};
}

}  // namespace rbt::harness
