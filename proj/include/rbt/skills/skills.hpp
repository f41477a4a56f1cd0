#pragma once

#include <string>
#include <vector>

#include "rbt/skills/params.hpp"

namespace rbt::skills {

using plan::Condition;
using plan::Predicate;

inline constexpr const char* kPegInsertion = "peg_insertion";
inline constexpr const char* kPickPlace = "pick_place";
inline constexpr const char* kPush = "push";
inline constexpr const char* kPickExchange = "pick_exchange";

namespace detail {

inline Vec3 full_stiffness(const Config& cfg) {
  const double k = cfg.physics.default_stiffness;
  return {k, k, k};
}

inline Tree seq(std::string name, std::vector<Tree> c) { return Tree::sequence(std::move(name), std::move(c)); }
inline Tree sel(std::string name, std::vector<Tree> c) { return Tree::selector(std::move(name), std::move(c)); }
inline Tree inv(Tree t) { return Tree::decorator(bt::DecoratorRule::inverter(), std::move(t)); }

inline ArmId arm_var(const Grounding& g, const char* key) { return sim::arm_from_string(g.at(key)); }

}  // namespace detail

// --- peg insertion ----------------------------------------------------------

inline SkillSpec peg_insertion_spec(const Config& cfg = Config::defaults()) {
  const auto& b = cfg.bounds;
  const sim::InsertionParams d;
  SkillSpec s;
  s.name = kPegInsertion;
  s.params = {
      {"force", "N", b.insertion_force.lo, b.insertion_force.hi, ParamClass::Extrinsic, ParamMode::Learned, d.force},
      {"path_velocity", "m/s", b.path_velocity.lo, b.path_velocity.hi, ParamClass::Extrinsic, ParamMode::Learned,
       d.path_velocity},
      {"path_distance", "m", b.path_distance.lo, b.path_distance.hi, ParamClass::Extrinsic, ParamMode::Learned,
       d.path_distance},
      {"radius", "m", b.radius.lo, b.radius.hi, ParamClass::Extrinsic, ParamMode::Learned, d.radius},
      {"approach_height", "m", 0.005, 0.05, ParamClass::Intrinsic, ParamMode::Manual, cfg.physics.approach_height},
  };
  s.variables = {"arm"};
  s.variants = {{"",
                 {Condition::of(Predicate::PegHeld, {"?arm"}), Condition::of(Predicate::AtApproach, {"?arm", "hole"}),
                  Condition::is_not(Predicate::Blocked, {"hole"})},
                 {Condition::of(Predicate::Inserted, {"peg"})}}};
  s.build = [](const WorldState& w, const Grounding& g, const Bindings& p, const Config& cfg) {
    const ArmId a = detail::arm_var(g, "arm");
    const double k = cfg.physics.default_stiffness;
    sim::InsertionParams ip;
    ip.force = p.at("force");
    ip.path_velocity = p.at("path_velocity");
    ip.path_distance = p.at("path_distance");
    ip.radius = p.at("radius");
    ip.approach_height = p.at("approach_height");
    return detail::seq(kPegInsertion, {prim_go_to_linear(a, sim::approach_pose(w, *ip.approach_height)),
                                       prim_change_stiffness(a, {k, k, 0.0}),
                                       prim_apply_force(a, {0.0, 0.0, -ip.force}),
                                       spiral_search(a, ip)});
  };
  return s;
}

// --- pick-place -------------------------------------------------------------

inline SkillSpec pick_place_spec(const Config& cfg = Config::defaults()) {
  const auto& l = cfg.layout;
  SkillSpec s;
  s.name = kPickPlace;
  s.params = {
      {"place_x", "m", -1.0, 1.0, ParamClass::Extrinsic, ParamMode::Manual, l.place_pose.x},
      {"place_y", "m", -1.0, 1.0, ParamClass::Extrinsic, ParamMode::Manual, l.place_pose.y},
      {"place_z", "m", 0.0, 0.5, ParamClass::Extrinsic, ParamMode::Manual, l.place_pose.z},
  };
  s.variables = {"arm", "obstacle"};
  s.variants = {{"",
                 {Condition::of(Predicate::Blocked, {"hole", "?obstacle"}),
                  Condition::of(Predicate::Graspable, {"?obstacle"}), Condition::of(Predicate::GripperFree, {"?arm"})},
                 {Condition::is_not(Predicate::Blocked, {"hole"}),
                  Condition::is_not(Predicate::Blocked, {"hole", "?obstacle"})}}};
  s.build = [](const WorldState& w, const Grounding& g, const Bindings& p, const Config& cfg) {
    const ArmId a = detail::arm_var(g, "arm");
    const std::string& obj = g.at("obstacle");
    const sim::ObstacleSpec* o = sim::find_obstacle(w, obj);
    if (o == nullptr) throw Error(ErrorCode::UnknownObject, "no obstacle '" + obj + "'");
    if (o->kind != sim::ObstacleKind::Light) throw Error(ErrorCode::NotGraspable, obj + " is heavy");
    Pose above = sim::grasp_point(w, obj);
    above.z += 0.5 * cfg.physics.grasp_reach;
    const Pose place{p.at("place_x"), p.at("place_y"), p.at("place_z"), 0.0};
    const Pose home = w.arm(a).ee;
    return detail::seq(
        kPickPlace,
        {prim_change_stiffness(a, detail::full_stiffness(cfg)),
         detail::sel("pick", {cond_holding(a, obj), cond_object_at(obj, place),
                              detail::seq("grasp", {prim_go_to_linear(a, above), prim_gripper_close(a, obj)})}),
         detail::sel("place", {detail::seq("placed", {detail::inv(cond_holding(a, obj)), cond_object_at(obj, place)}),
                               detail::seq("put_down", {prim_go_to_linear(a, place), prim_gripper_open(a)})}),
         prim_go_to_linear(a, home), check(Condition::is_not(Predicate::Blocked, {"hole"}))});
  };
  return s;
}

// --- push -------------------------------------------------------------------

inline SkillSpec push_spec(const Config& cfg = Config::defaults()) {
  const auto& b = cfg.bounds;
  const auto& l = cfg.layout;
  SkillSpec s;
  s.name = kPush;
  s.params = {
      {"force", "N", b.push_force.lo, b.push_force.hi, ParamClass::Extrinsic, ParamMode::Manual, 20.0},
      {"distance", "m", b.push_distance.lo, b.push_distance.hi, ParamClass::Extrinsic, ParamMode::Manual,
       l.push_distance},
      {"direction_x", "", -1.0, 1.0, ParamClass::Intrinsic, ParamMode::Manual, l.push_direction.x},
      {"direction_y", "", -1.0, 1.0, ParamClass::Intrinsic, ParamMode::Manual, l.push_direction.y},
  };
  s.variables = {"arm", "obstacle"};
  s.variants = {{"",
                 {Condition::of(Predicate::Blocked, {"hole", "?obstacle"}), Condition::of(Predicate::GripperFree, {"?arm"})},
                 {Condition::is_not(Predicate::Blocked, {"hole"}),
                  Condition::is_not(Predicate::Blocked, {"hole", "?obstacle"})}}};
  s.build = [](const WorldState& w, const Grounding& g, const Bindings& p, const Config& cfg) {
    const ArmId a = detail::arm_var(g, "arm");
    const std::string& obj = g.at("obstacle");
    const sim::ObstacleSpec* o = sim::find_obstacle(w, obj);
    if (o == nullptr) throw Error(ErrorCode::UnknownObject, "no obstacle '" + obj + "'");
    Vec2 dir{p.at("direction_x"), p.at("direction_y")};
    if (!(dir.norm() > 0.0)) throw Error(ErrorCode::InvalidCommand, "push direction is zero");
    dir = (1.0 / dir.norm()) * dir;
    const double force = p.at("force");
    const Vec2 c = o->pose.xy() - (o->footprint_radius + 0.25 * cfg.physics.grasp_reach) * dir;
    const Pose contact{c.x, c.y, o->pose.z + cfg.physics.grasp_reach, 0.0};
    const Pose home = w.arm(a).ee;
    const Condition clear = Condition::is_not(Predicate::Blocked, {"hole"});
    return detail::seq(
        kPush,
        {detail::sel("push_once",
                     {check(Condition::is_not(Predicate::Blocked, {"hole", obj})),
                      detail::seq("push", {prim_change_stiffness(a, detail::full_stiffness(cfg)),
                                           prim_go_to_linear(a, contact),
                                           prim_apply_force(a, {force * dir.x, force * dir.y, 0.0}, obj,
                                                            p.at("distance"))})}),
         check(clear), prim_go_to_linear(a, home), check(clear)});
  };
  return s;
}

// --- pick-exchange ----------------------------------------------------------

inline SkillSpec pick_exchange_spec(const Config& cfg = Config::defaults()) {
  const auto& b = cfg.bounds;
  SkillSpec s;
  s.name = kPickExchange;
  s.params = {
      {"offset_x", "m", b.grasp_offset.lo, b.grasp_offset.hi, ParamClass::Extrinsic, ParamMode::Manual, 0.0},
      {"offset_y", "m", b.grasp_offset.lo, b.grasp_offset.hi, ParamClass::Extrinsic, ParamMode::Manual, 0.0},
  };
  s.variables = {"from", "to"};
  s.variants = {
      {"table",
       {Condition::of(Predicate::PegAt, {"table"}), Condition::of(Predicate::GripperFree, {"?from"}),
        Condition::of(Predicate::GripperFree, {"?to"})},
       {Condition::of(Predicate::PegHeld, {"?to"}), Condition::is_not(Predicate::PegAt, {"table"}),
        Condition::is_not(Predicate::GripperFree, {"?to"}), Condition::of(Predicate::GripperFree, {"?from"})}},
      {"held",
       {Condition::of(Predicate::PegHeld, {"?from"}), Condition::of(Predicate::GripperFree, {"?to"})},
       {Condition::of(Predicate::PegHeld, {"?to"}), Condition::is_not(Predicate::PegHeld, {"?from"}),
        Condition::is_not(Predicate::GripperFree, {"?to"}), Condition::of(Predicate::GripperFree, {"?from"})}},
  };
  s.build = [](const WorldState& w, const Grounding& g, const Bindings& p, const Config& cfg) {
    const ArmId from = detail::arm_var(g, "from");
    const ArmId to = detail::arm_var(g, "to");
    if (from == to) throw Error(ErrorCode::InvalidCommand, "exchange needs two different arms");
    const Vec2 offset{p.at("offset_x"), p.at("offset_y")};
    const Vec3 k = detail::full_stiffness(cfg);
    const std::string peg(sim::kPegId);

    // The from-arm carries the peg's grasp point to the handover point.
    const Vec2 from_offset = w.peg.holder.held_by(from) ? w.arm(from).grasp_offset : Vec2{};
    Pose from_handover = cfg.layout.handover_point;
    from_handover.x -= from_offset.x;
    from_handover.y -= from_offset.y;
    Pose to_handover = cfg.layout.handover_point;
    to_handover.x -= offset.x;
    to_handover.y -= offset.y;

    return detail::seq(
        kPickExchange,
        {prim_change_stiffness(from, k), prim_change_stiffness(to, k), prim_apply_force(to, {}),
         detail::sel("pick", {cond_holding(from, peg), cond_holding(to, peg),
                              detail::seq("grasp", {prim_go_to_linear(from, sim::grasp_point(w, peg)),
                                                    prim_gripper_close(from, peg)})}),
         detail::sel("exchange", {cond_holding(to, peg),
                                  detail::seq("hand_over", {prim_go_to_linear(from, from_handover),
                                                            prim_go_to_linear(to, to_handover),
                                                            prim_gripper_close(to, peg, offset)})}),
         detail::sel("let_go", {cond_gripper_open(from), prim_gripper_open(from)}),
         prim_go_to_linear(from, w.arm(from).ee), prim_go_to_linear(to, w.arm(to).ee),
         check(Condition::of(Predicate::PegHeld, {std::string(sim::to_string(to))}))});
  };
  return s;
}

/// Recovery behaviors in planner priority order.
inline std::vector<SkillSpec> recovery_catalog(const Config& cfg = Config::defaults()) {
  return {pick_place_spec(cfg), push_spec(cfg), pick_exchange_spec(cfg)};
}

// --- typed builders ---------------------------------------------------------

inline GroundedSkill build_peg_insertion(const WorldState& w, ArmId arm, const Bindings& b,
                                         const Config& cfg = Config::defaults()) {
  return instantiate(peg_insertion_spec(cfg), {{"arm", arm_name(arm)}}, b, w, cfg);
}

inline GroundedSkill build_pick_place(const WorldState& w, ArmId arm, const std::string& obstacle, const Pose& place,
                                      const Config& cfg = Config::defaults()) {
  return instantiate(pick_place_spec(cfg), {{"arm", arm_name(arm)}, {"obstacle", obstacle}},
                     {{"place_x", place.x}, {"place_y", place.y}, {"place_z", place.z}}, w, cfg);
}

inline GroundedSkill build_push(const WorldState& w, ArmId arm, const std::string& obstacle, Vec2 direction,
                                const Bindings& b, const Config& cfg = Config::defaults()) {
  Bindings all = b;
  all["direction_x"] = direction.x;
  all["direction_y"] = direction.y;
  return instantiate(push_spec(cfg), {{"arm", arm_name(arm)}, {"obstacle", obstacle}}, all, w, cfg);
}

inline GroundedSkill build_pick_exchange(const WorldState& w, ArmId from, ArmId to, const Bindings& b,
                                         const Config& cfg = Config::defaults()) {
  return instantiate(pick_exchange_spec(cfg), {{"from", arm_name(from)}, {"to", arm_name(to)}}, b, w, cfg);
}

}  // namespace rbt::skills
