#pragma once

#include <array>
#include <set>
#include <string>

#include "rbt/bt/serialize.hpp"
#include "rbt/plan/condition.hpp"
#include "rbt/sim/insertion.hpp"
#include "rbt/sim/motion.hpp"

namespace rbt::skills {

using sim::ArmId;
using sim::Pose;
using sim::Vec2;
using sim::Vec3;
using sim::WorldState;
using Tree = bt::Node<WorldState>;
using TickCtx = bt::TickContext<WorldState>;
using bt::NodeStatus;

/// The five motion primitives every recovery behavior is assembled from.
inline const std::set<std::string>& primitive_bindings() {
  static const std::set<std::string> names{"GripperOpen", "GripperClose", "GoToLinear", "ChangeStiffness",
                                           "ApplyForce"};
  return names;
}

namespace detail {

inline Vec2 vec2_arg(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) return {};
  const auto& a = j.at(key);
  return {a.at(0).get<double>(), a.at(1).get<double>()};
}

inline Vec3 vec3_arg(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) return {};
  const auto& a = j.at(key);
  return {a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>()};
}

inline nlohmann::json arr(Vec2 v) { return nlohmann::json::array({v.x, v.y}); }
inline nlohmann::json arr(Vec3 v) { return nlohmann::json::array({v.x, v.y, v.z}); }

inline ArmId arm_arg(const nlohmann::json& j) { return sim::arm_from_string(j.at("arm").get<std::string>()); }

/// Runs a world transform; library errors turn into Failure.
template <class Fn>
NodeStatus guarded(TickCtx& ctx, Fn&& fn) {
  try {
    *ctx.world = fn(*ctx.world);
    return NodeStatus::Success;
  } catch (const Error&) {
    return NodeStatus::Failure;
  }
}

/// Distance to target over the axes the arm actually tracks.
inline double tracking_distance(const WorldState& w, ArmId a, const Pose& target) {
  const auto& arm = w.arm(a);
  Vec3 d = target.position() - arm.ee.position();
  for (int i = 0; i < 3; ++i)
    if (arm.command.stiffness[i] <= 0.0) d[i] = 0.0;
  return d.norm();
}

}  // namespace detail

// --- action factories keyed by binding name --------------------------------

inline Tree::ActionFn gripper_open_fn(const nlohmann::json& args) {
  const ArmId a = detail::arm_arg(args);
  return [a](TickCtx& ctx) { return detail::guarded(ctx, [&](WorldState w) { return sim::release(std::move(w), a); }); };
}

inline Tree::ActionFn gripper_close_fn(const nlohmann::json& args) {
  const ArmId a = detail::arm_arg(args);
  const std::string object = args.value("object", std::string(sim::kPegId));
  const Vec2 offset = detail::vec2_arg(args, "offset");
  return [=](TickCtx& ctx) {
    return detail::guarded(ctx, [&](WorldState w) { return sim::grasp(std::move(w), a, object, offset); });
  };
}

inline Tree::ActionFn go_to_linear_fn(const nlohmann::json& args) {
  const ArmId a = detail::arm_arg(args);
  Pose target = args.at("target").get<Pose>();
  const Vec2 offset = detail::vec2_arg(args, "offset");
  target.x += offset.x;
  target.y += offset.y;
  if (!target.finite()) throw Error(ErrorCode::InvalidCommand, "GoToLinear target is not finite");
  return [=](TickCtx& ctx) {
    WorldState& w = *ctx.world;
    const double tol = w.physics.motion_tolerance;
    if (detail::tracking_distance(w, a, target) <= tol) return NodeStatus::Success;
    sim::MgCommand cmd = w.arm(a).command;
    cmd.target = target;
    cmd.target.yaw = w.arm(a).ee.yaw;
    try {
      w = sim::step_motion(std::move(w), a, cmd, w.physics.dt);
    } catch (const Error&) {
      return NodeStatus::Failure;
    }
    if (ctx.on_step) ctx.on_step(w);
    return detail::tracking_distance(w, a, target) <= tol ? NodeStatus::Success : NodeStatus::Running;
  };
}

inline Tree::ActionFn change_stiffness_fn(const nlohmann::json& args) {
  const ArmId a = detail::arm_arg(args);
  const Vec3 k = detail::vec3_arg(args, "stiffness");
  for (int i = 0; i < 3; ++i)
    if (!(k[i] >= 0.0)) throw Error(ErrorCode::InvalidCommand, "negative stiffness");
  return [=](TickCtx& ctx) {
    ctx.world->arm(a).command.stiffness = k;
    return NodeStatus::Success;
  };
}

/// Sets the arm's wrench setpoint. With "travel" and "obstacle" it also
/// pushes that obstacle along the wrench's horizontal direction.
inline Tree::ActionFn apply_force_fn(const nlohmann::json& args) {
  const ArmId a = detail::arm_arg(args);
  const Vec3 wrench = detail::vec3_arg(args, "wrench");
  const double travel = args.value("travel", 0.0);
  const std::string obstacle = args.value("obstacle", std::string());
  if (!std::isfinite(wrench.norm()) || !(travel >= 0.0))
    throw Error(ErrorCode::InvalidCommand, "bad ApplyForce arguments");
  return [=](TickCtx& ctx) {
    ctx.world->arm(a).command.wrench = wrench;
    if (travel <= 0.0 || obstacle.empty()) return NodeStatus::Success;
    const Vec2 dir{wrench.x, wrench.y};
    return detail::guarded(ctx, [&](WorldState w) {
      return sim::apply_push(std::move(w), a, obstacle, dir, dir.norm(), travel);
    });
  };
}

/// Macro leaf for the compliant spiral search of the insertion skill.
inline Tree::ActionFn spiral_search_fn(const nlohmann::json& args) {
  const ArmId a = detail::arm_arg(args);
  sim::InsertionParams p;
  p.force = args.at("force").get<double>();
  p.path_velocity = args.at("path_velocity").get<double>();
  p.path_distance = args.at("path_distance").get<double>();
  p.radius = args.at("radius").get<double>();
  if (args.contains("approach_height")) p.approach_height = args.at("approach_height").get<double>();
  return [=](TickCtx& ctx) {
    try {
      auto [w, out] = sim::run_insertion(*ctx.world, a, p, ctx.on_step);
      *ctx.world = std::move(w);
      return out.success ? NodeStatus::Success : NodeStatus::Failure;
    } catch (const Error&) {
      return NodeStatus::Failure;
    }
  };
}

// --- condition factories ----------------------------------------------------

inline Tree::PredicateFn predicate_fn(const nlohmann::json& args) {
  const plan::Condition c = args.get<plan::Condition>();
  plan::eval_atom(c, WorldState{});  // rejects bad arity up front
  return [c](const WorldState& w) { return plan::eval_condition(c, w); };
}

inline Tree::PredicateFn holding_fn(const nlohmann::json& args) {
  const ArmId a = detail::arm_arg(args);
  const std::string object = args.at("object").get<std::string>();
  return [=](const WorldState& w) {
    const auto& h = w.arm(a).held;
    return object == sim::kPegId ? h.kind == sim::Held::Kind::Peg
                                 : (h.kind == sim::Held::Kind::Obstacle && h.obstacle_id == object);
  };
}

inline Tree::PredicateFn object_at_fn(const nlohmann::json& args) {
  const std::string object = args.at("object").get<std::string>();
  const Pose pose = args.at("pose").get<Pose>();
  const double tol = args.value("tolerance", 1e-3);
  return [=](const WorldState& w) { return sim::distance(sim::object_pose(w, object), pose) <= tol; };
}

inline Tree::PredicateFn gripper_open_pred_fn(const nlohmann::json& args) {
  const ArmId a = detail::arm_arg(args);
  return [=](const WorldState& w) { return w.arm(a).gripper == sim::GripperState::Open; };
}

inline const bt::Registry<WorldState>& registry() {
  static const bt::Registry<WorldState> reg = [] {
    bt::Registry<WorldState> r;
    r.actions["GripperOpen"] = gripper_open_fn;
    r.actions["GripperClose"] = gripper_close_fn;
    r.actions["GoToLinear"] = go_to_linear_fn;
    r.actions["ChangeStiffness"] = change_stiffness_fn;
    r.actions["ApplyForce"] = apply_force_fn;
    r.actions["SpiralSearch"] = spiral_search_fn;
    r.conditions["Predicate"] = predicate_fn;
    r.conditions["Holding"] = holding_fn;
    r.conditions["ObjectAt"] = object_at_fn;
    r.conditions["GripperIsOpen"] = gripper_open_pred_fn;
    return r;
  }();
  return reg;
}

inline Tree make_action(const std::string& binding, nlohmann::json args) {
  auto fn = registry().actions.at(binding)(args);
  return Tree::action(binding, std::move(args), std::move(fn));
}

inline Tree make_condition(const std::string& binding, nlohmann::json args) {
  auto fn = registry().conditions.at(binding)(args);
  return Tree::condition(binding, std::move(args), std::move(fn));
}

inline std::string arm_name(ArmId a) { return std::string(sim::to_string(a)); }

// --- typed constructors -----------------------------------------------------

inline Tree prim_gripper_open(ArmId a) { return make_action("GripperOpen", {{"arm", arm_name(a)}}); }

inline Tree prim_gripper_close(ArmId a, const std::string& object, Vec2 offset = {}) {
  return make_action("GripperClose", {{"arm", arm_name(a)}, {"object", object}, {"offset", detail::arr(offset)}});
}

inline Tree prim_go_to_linear(ArmId a, const Pose& target, Vec2 offset = {}) {
  return make_action("GoToLinear", {{"arm", arm_name(a)}, {"target", target}, {"offset", detail::arr(offset)}});
}

inline Tree prim_change_stiffness(ArmId a, Vec3 stiffness) {
  return make_action("ChangeStiffness", {{"arm", arm_name(a)}, {"stiffness", detail::arr(stiffness)}});
}

inline Tree prim_apply_force(ArmId a, Vec3 wrench) {
  return make_action("ApplyForce", {{"arm", arm_name(a)}, {"wrench", detail::arr(wrench)}});
}

inline Tree prim_apply_force(ArmId a, Vec3 wrench, const std::string& obstacle, double travel) {
  return make_action("ApplyForce", {{"arm", arm_name(a)},
                                    {"wrench", detail::arr(wrench)},
                                    {"obstacle", obstacle},
                                    {"travel", travel}});
}

inline Tree spiral_search(ArmId a, const sim::InsertionParams& p) {
  nlohmann::json args{{"arm", arm_name(a)},
                      {"force", p.force},
                      {"path_velocity", p.path_velocity},
                      {"path_distance", p.path_distance},
                      {"radius", p.radius}};
  if (p.approach_height) args["approach_height"] = *p.approach_height;
  return make_action("SpiralSearch", std::move(args));
}

inline Tree check(const plan::Condition& c) { return make_condition("Predicate", c).named(c.str()); }

inline Tree cond_holding(ArmId a, const std::string& object) {
  return make_condition("Holding", {{"arm", arm_name(a)}, {"object", object}});
}

inline Tree cond_object_at(const std::string& object, const Pose& pose, double tol = 1e-3) {
  return make_condition("ObjectAt", {{"object", object}, {"pose", pose}, {"tolerance", tol}});
}

inline Tree cond_gripper_open(ArmId a) { return make_condition("GripperIsOpen", {{"arm", arm_name(a)}}); }

}  // namespace rbt::skills
