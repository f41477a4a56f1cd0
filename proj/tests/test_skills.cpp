#include <gtest/gtest.h>

#include <cmath>

#include "rbt/harness/scenario.hpp"
#include "rbt/plan/execute.hpp"
#include "rbt/rng.hpp"
#include "rbt/sim/randomize.hpp"
#include "test_util.hpp"

using namespace rbt;
using namespace rbt::skills;
using plan::Condition;
using plan::Predicate;

namespace {

const Config& cfg() { return Config::defaults(); }

NodeStatus tick_once(const Tree& t, WorldState& w) {
  TickCtx ctx;
  ctx.world = &w;
  return bt::tick(t, ctx);
}

NodeStatus run(const Tree& t, WorldState& w, int* ticks = nullptr) {
  int n = 0;
  const auto s = plan::tick_to_completion(t, w, n);
  if (ticks) *ticks = n;
  return s;
}

WorldState scenario_world(int id) { return harness::load_scenario(id).world; }

// Every action leaf in a tree.
std::vector<const Tree*> actions(const Tree& t) {
  std::vector<const Tree*> out;
  t.visit([&](const Tree& n) {
    if (n.kind() == bt::NodeKind::Action) out.push_back(&n);
  });
  return out;
}

bool all_hold(const std::vector<Condition>& cs, const WorldState& w) {
  for (const auto& c : cs)
    if (!plan::eval_condition(c, w)) return false;
  return true;
}

}  // namespace

// --- primitives ---------------------------------------------------------------

TEST(Primitives, CloseOnReachablePeg) {
  WorldState w = sim::make_world(cfg());
  w.arm(ArmId::Right).ee = sim::grasp_point(w, sim::kPegId);
  EXPECT_EQ(tick_once(prim_gripper_close(ArmId::Right, "peg"), w), NodeStatus::Success);
  EXPECT_TRUE(w.peg.holder.held_by(ArmId::Right));
}

TEST(Primitives, CloseOnHeavyFails) {
  WorldState w = scenario_world(3);
  w.arm(ArmId::Right).ee = w.obstacles[0].pose;
  const WorldState before = w;
  EXPECT_EQ(tick_once(prim_gripper_close(ArmId::Right, "heavy_block"), w), NodeStatus::Failure);
  EXPECT_EQ(w, before);
}

TEST(Primitives, OpenWithNothingHeldFails) {
  WorldState w = sim::make_world(cfg());
  EXPECT_EQ(tick_once(prim_gripper_open(ArmId::Right), w), NodeStatus::Failure);
}

TEST(Primitives, GoToCurrentPoseSucceedsImmediately) {
  WorldState w = sim::make_world(cfg());
  const WorldState before = w;
  EXPECT_EQ(tick_once(prim_go_to_linear(ArmId::Left, w.arm(ArmId::Left).ee), w), NodeStatus::Success);
  EXPECT_EQ(w, before);
}

TEST(Primitives, GoToLinearTickCount) {
  WorldState w = sim::make_world(cfg());
  w.arm(ArmId::Left).command.velocity_limit = 0.05;
  Pose target = w.arm(ArmId::Left).ee;
  target.x -= 0.1;
  int ticks = 0;
  EXPECT_EQ(run(prim_go_to_linear(ArmId::Left, target), w, &ticks), NodeStatus::Success);
  // each tick advances v*dt; the leaf reports Success once within tolerance.
  // 0.1 m lands exactly on the tolerance boundary after 198 steps, so
  // rounding decides between 198 and 199.
  const double step = 0.05 * w.physics.dt;
  const int expect = static_cast<int>(std::ceil((0.1 - w.physics.motion_tolerance) / step - 1e-9));
  EXPECT_GE(ticks, expect);
  EXPECT_LE(ticks, expect + 1);
  EXPECT_NEAR(ticks, 200, 200 * 0.02);
}

TEST(Primitives, GoToLinearOffsetIsAdditive) {
  WorldState w = sim::make_world(cfg());
  Pose target = w.arm(ArmId::Left).ee;
  target.y += 0.05;
  ASSERT_EQ(run(prim_go_to_linear(ArmId::Left, target, {0.01, 0.0}), w), NodeStatus::Success);
  const Pose& ee = w.arm(ArmId::Left).ee;
  EXPECT_NEAR(sim::distance(ee, {target.x + 0.01, target.y, target.z, 0}), 0.0, w.physics.motion_tolerance);
}

TEST(Primitives, ZeroZStiffnessHandsZToTheWrench) {
  WorldState w = sim::make_world(cfg());
  w.arm(ArmId::Left).ee = sim::grasp_point(w, sim::kPegId);
  w = sim::grasp(std::move(w), ArmId::Left, sim::kPegId, {});
  const auto t = Tree::sequence("", {prim_change_stiffness(ArmId::Left, {2000, 2000, 0}),
                                     prim_apply_force(ArmId::Left, {0, 0, -10})});
  ASSERT_EQ(tick_once(t, w), NodeStatus::Success);
  const double z = w.arm(ArmId::Left).ee.z;
  auto cmd = w.arm(ArmId::Left).command;
  cmd.target.z = z + 0.1;  // ignored on a compliant axis
  w = sim::step_motion(std::move(w), ArmId::Left, cmd, w.physics.dt);
  EXPECT_DOUBLE_EQ(w.arm(ArmId::Left).ee.z, z);
  EXPECT_DOUBLE_EQ(w.contact_force, 10.0);
}

TEST(Primitives, LastStiffnessWriteWins) {
  WorldState w = sim::make_world(cfg());
  const auto t = Tree::sequence("", {prim_change_stiffness(ArmId::Left, {1, 2, 3}),
                                     prim_change_stiffness(ArmId::Left, {4, 5, 6})});
  ASSERT_EQ(tick_once(t, w), NodeStatus::Success);
  EXPECT_EQ(w.arm(ArmId::Left).command.stiffness, (Vec3{4, 5, 6}));
}

TEST(Primitives, NegativeStiffnessRejectedAtConstruction) {
  EXPECT_RBT_ERROR(prim_change_stiffness(ArmId::Left, {2000, -1, 0}), ErrorCode::InvalidCommand);
}

// --- descriptors and bindings ----------------------------------------------------

TEST(Params, DescriptorInvariants) {
  ParamDescriptor d{"f", "N", 1, 30, ParamClass::Extrinsic, ParamMode::Learned, 10};
  EXPECT_NO_THROW(validate(d));
  auto bad = d;
  bad.lo = 30;
  EXPECT_RBT_ERROR(validate(bad), ErrorCode::InvalidDescriptor);
  bad = d;
  bad.default_value = 31;
  EXPECT_RBT_ERROR(validate(bad), ErrorCode::InvalidDescriptor);
  bad = d;
  bad.cls = ParamClass::Intrinsic;
  EXPECT_RBT_ERROR(validate(bad), ErrorCode::InvalidDescriptor);
  EXPECT_EQ(nlohmann::json(d).get<ParamDescriptor>(), d);
}

TEST(Params, ShippedSpecsAreValid) {
  std::vector<SkillSpec> all = recovery_catalog();
  all.push_back(peg_insertion_spec());
  for (const auto& s : all)
    for (const auto& p : s.params) EXPECT_NO_THROW(validate(p)) << s.name << "." << p.name;
}

TEST(Params, InsertionBoundsEnforcedAtConstruction) {
  const WorldState w = scenario_world(1);
  const std::map<std::string, std::pair<double, double>> bounds{
      {"force", {1, 30}}, {"path_velocity", {0.01, 0.1}}, {"path_distance", {0.01, 0.2}}, {"radius", {0.0, 0.03}}};
  for (const auto& [name, b] : bounds) {
    EXPECT_NO_THROW(build_peg_insertion(w, ArmId::Left, {{name, b.first}}));
    EXPECT_NO_THROW(build_peg_insertion(w, ArmId::Left, {{name, b.second}}));
    const double span = b.second - b.first;
    EXPECT_RBT_ERROR(build_peg_insertion(w, ArmId::Left, {{name, b.first - 0.01 * span}}), ErrorCode::OutOfBounds);
    EXPECT_RBT_ERROR(build_peg_insertion(w, ArmId::Left, {{name, b.second + 0.01 * span}}), ErrorCode::OutOfBounds);
  }
  EXPECT_RBT_ERROR(build_peg_insertion(w, ArmId::Left, {{"speed", 1.0}}), ErrorCode::OutOfBounds);
  EXPECT_RBT_ERROR(build_push(scenario_world(3), ArmId::Right, "heavy_block", {0, 1}, {{"force", 41}}),
                   ErrorCode::OutOfBounds);
  EXPECT_RBT_ERROR(build_pick_exchange(scenario_world(4), ArmId::Right, ArmId::Left, {{"offset_x", 0.021}}),
                   ErrorCode::OutOfBounds);
}

// --- peg insertion ------------------------------------------------------------------

TEST(PegInsertion, MidRangeBindingsSucceedWithoutError) {
  WorldState w = scenario_world(1);
  const auto gs = build_peg_insertion(w, ArmId::Left, {{"force", 15}, {"path_velocity", 0.05}, {"path_distance", 0.1}, {"radius", 0.015}});
  EXPECT_TRUE(all_hold(gs.preconditions(), w));
  EXPECT_EQ(run(gs.tree, w), NodeStatus::Success);
  EXPECT_TRUE(all_hold(gs.postconditions(), w));
}

TEST(PegInsertion, BlockedWorldFailsPrecondition) {
  const WorldState w = scenario_world(2);
  const auto unmet = plan::unmet_preconditions(peg_insertion_spec(), {{"arm", "left"}}, w);
  ASSERT_EQ(unmet.size(), 1u);
  EXPECT_EQ(unmet[0], Condition::is_not(Predicate::Blocked, {"hole"}));
}

TEST(PegInsertion, ZeroRadiusCannotRecoverFiveMillimeters) {
  WorldState w = scenario_world(1);
  w.hole_block.estimate = w.hole_block.center.xy() + Vec2{0.005, 0.0};
  const auto gs = build_peg_insertion(w, ArmId::Left, {{"radius", 0.0}});
  EXPECT_EQ(run(gs.tree, w), NodeStatus::Failure);
  ASSERT_TRUE(w.last_insertion.has_value());
  EXPECT_NEAR(w.last_insertion->min_lateral_error, 0.005, 1e-9);
}

TEST(PegInsertion, TemplateShape) {
  const auto gs = build_peg_insertion(scenario_world(1), ArmId::Left, {});
  std::vector<std::string> names;
  for (const auto* a : actions(gs.tree)) names.push_back(a->binding());
  EXPECT_EQ(names, (std::vector<std::string>{"GoToLinear", "ChangeStiffness", "ApplyForce", "SpiralSearch"}));
  EXPECT_EQ(actions(gs.tree)[1]->args().at("stiffness").at(2).get<double>(), 0.0);
}

// --- pick-place -------------------------------------------------------------------------

TEST(PickPlace, ClearsLightBlock) {
  WorldState w = scenario_world(2);
  const auto gs = build_pick_place(w, ArmId::Right, "small_block", cfg().layout.place_pose);
  EXPECT_TRUE(all_hold(gs.preconditions(), w));
  EXPECT_EQ(run(gs.tree, w), NodeStatus::Success);
  EXPECT_FALSE(sim::blocked(w));
  EXPECT_TRUE(all_hold(gs.postconditions(), w));
  EXPECT_TRUE(w.arm(ArmId::Right).held.empty());
}

TEST(PickPlace, PlacingBackOnTheHoleFails) {
  WorldState w = scenario_world(2);
  const auto gs = build_pick_place(w, ArmId::Right, "small_block", cfg().geometry.hole_center);
  EXPECT_EQ(run(gs.tree, w), NodeStatus::Failure);
  EXPECT_TRUE(sim::blocked(w));
}

TEST(PickPlace, HeavyRejectedAtConstruction) {
  EXPECT_RBT_ERROR(build_pick_place(scenario_world(3), ArmId::Right, "heavy_block", cfg().layout.place_pose),
                   ErrorCode::NotGraspable);
}

// --- push -------------------------------------------------------------------------------

TEST(Push, AboveThresholdUnblocks) {
  WorldState w = scenario_world(3);
  const Pose before = w.obstacles[0].pose;
  const auto gs = build_push(w, ArmId::Right, "heavy_block", {0, 1}, {{"force", 20}, {"distance", 0.1}});
  EXPECT_EQ(run(gs.tree, w), NodeStatus::Success);
  EXPECT_FALSE(sim::blocked(w));
  EXPECT_NEAR(w.obstacles[0].pose.y - before.y, 0.1, 1e-12);
}

TEST(Push, BelowThresholdFailsAndLeavesBlockInPlace) {
  WorldState w = scenario_world(3);
  const Pose before = w.obstacles[0].pose;
  const auto gs = build_push(w, ArmId::Right, "heavy_block", {0, 1}, {{"force", 10}});
  EXPECT_EQ(run(gs.tree, w), NodeStatus::Failure);
  EXPECT_EQ(w.obstacles[0].pose, before);
}

TEST(Push, MinimumSucceedingForceIsTheThreshold) {
  std::optional<int> min_ok;
  for (int f = 1; f <= 40; ++f) {
    WorldState w = scenario_world(3);
    const auto gs = build_push(w, ArmId::Right, "heavy_block", {0, 1}, {{"force", static_cast<double>(f)}});
    if (run(gs.tree, w) == NodeStatus::Success && !min_ok) min_ok = f;
  }
  ASSERT_TRUE(min_ok.has_value());
  EXPECT_EQ(*min_ok, static_cast<int>(cfg().layout.heavy_push_threshold));
}

// --- pick-exchange --------------------------------------------------------------------

TEST(PickExchange, ZeroOffsets) {
  WorldState w = scenario_world(4);
  const auto gs = build_pick_exchange(w, ArmId::Right, ArmId::Left, {{"offset_x", 0}, {"offset_y", 0}});
  EXPECT_EQ(gs.spec.variants[static_cast<std::size_t>(gs.variant)].label, "table");
  ASSERT_EQ(run(gs.tree, w), NodeStatus::Success);
  EXPECT_TRUE(w.peg.holder.held_by(ArmId::Left));
  EXPECT_EQ(w.arm(ArmId::Left).grasp_offset, (Vec2{0, 0}));
  EXPECT_NEAR(w.peg.pose.x, w.arm(ArmId::Left).ee.x, 1e-12);
  EXPECT_NEAR(w.peg.pose.y, w.arm(ArmId::Left).ee.y, 1e-12);
  EXPECT_TRUE(all_hold(gs.postconditions(), w));
}

TEST(PickExchange, OffsetsCarryOverToTheReceivingArm) {
  WorldState w = scenario_world(4);
  const auto gs = build_pick_exchange(w, ArmId::Right, ArmId::Left, {{"offset_x", 0.01}, {"offset_y", -0.007}});
  ASSERT_EQ(run(gs.tree, w), NodeStatus::Success);
  EXPECT_NEAR(w.arm(ArmId::Left).grasp_offset.x, 0.01, 1e-12);
  EXPECT_NEAR(w.arm(ArmId::Left).grasp_offset.y, -0.007, 1e-12);
}

TEST(PickExchange, HeldVariant) {
  WorldState w = scenario_world(1);
  const auto gs = build_pick_exchange(w, ArmId::Left, ArmId::Right, {});
  EXPECT_EQ(gs.spec.variants[static_cast<std::size_t>(gs.variant)].label, "held");
  ASSERT_EQ(run(gs.tree, w), NodeStatus::Success);
  EXPECT_TRUE(w.peg.holder.held_by(ArmId::Right));
  EXPECT_TRUE(all_hold(gs.postconditions(), w));
}

TEST(PickExchange, PegNeitherHeldNorOnTable) {
  WorldState w = scenario_world(1);
  w.arm(ArmId::Left).held = sim::Held::none();
  w.peg.holder = sim::PegHolder::inserted();
  for (const auto& from : {"left", "right"}) {
    const std::string to = std::string(from) == "left" ? "right" : "left";
    EXPECT_FALSE(plan::unmet_preconditions(pick_exchange_spec(), {{"from", from}, {"to", to}}, w).empty());
  }
}

// Insertion after an exchange with offset (0.01, 0.01) at zero hole error.
// The spiral has to reach the hole from a start error equal to the offset.
TEST(PickExchange, OffsetNeedsSpiralReach) {
  const Vec2 off{0.01, 0.01};
  const double clearance = cfg().geometry.clearance;
  WorldState base = scenario_world(4);
  ASSERT_EQ(run(build_pick_exchange(base, ArmId::Right, ArmId::Left, {{"offset_x", off.x}, {"offset_y", off.y}}).tree,
                base),
            NodeStatus::Success);
  int successes = 0;
  for (int i = 0; i <= 30; ++i) {
    const double radius = 0.001 * i;
    // geometry oracle: spiral samples around the estimate, peg displaced by off
    bool want = false;
    const sim::InsertionParams p;
    const double dt = cfg().physics.dt, pitch = cfg().physics.spiral_pitch;
    for (int k = 0; k * p.path_velocity * dt <= p.path_distance + 1e-12 && !want; ++k) {
      const double r = radius * std::min(k * p.path_velocity * dt / p.path_distance, 1.0);
      const double th = 2 * std::numbers::pi * r / pitch;
      want = std::hypot(r * std::cos(th) + off.x, r * std::sin(th) + off.y) <= clearance;
    }
    WorldState w = base;
    const bool got = run(build_peg_insertion(w, ArmId::Left, {{"radius", radius}}).tree, w) == NodeStatus::Success;
    EXPECT_EQ(got, want) << radius;
    if (got) {
      EXPECT_GE(radius, off.norm() - clearance);
    }
    successes += got;
  }
  EXPECT_GT(successes, 0);
}

// --- properties ----------------------------------------------------------------------------

// Every extrinsic parameter, learned or not, reaches the compiled tree.
TEST(Properties, CompilationTotalityAndSensitivity) {
  struct Case {
    SkillSpec spec;
    Grounding g;
    WorldState w;
  };
  const std::vector<Case> cases{
      {peg_insertion_spec(), {{"arm", "left"}}, scenario_world(1)},
      {pick_place_spec(), {{"arm", "right"}, {"obstacle", "small_block"}}, scenario_world(2)},
      {push_spec(), {{"arm", "right"}, {"obstacle", "heavy_block"}}, scenario_world(3)},
      {pick_exchange_spec(), {{"from", "right"}, {"to", "left"}}, scenario_world(4)},
  };
  for (const auto& c : cases) {
    const auto base = instantiate(c.spec, c.g, {}, c.w, cfg());
    const auto base_json = bt::to_json(base.tree);
    for (const auto& p : c.spec.params) {
      if (p.cls != ParamClass::Extrinsic) continue;
      const double v = p.default_value + 0.25 * (p.default_value < 0.5 * (p.lo + p.hi) ? 1 : -1) * (p.hi - p.lo);
      const auto moved = instantiate(c.spec, c.g, {{p.name, v}}, c.w, cfg());
      EXPECT_NE(bt::to_json(moved.tree), base_json) << c.spec.name << "." << p.name;
    }
    for (const auto& name : c.spec.with_mode(c.spec.params.front().name, ParamMode::Learned).learned())
      EXPECT_NE(c.spec.param(name), nullptr);
  }
}

TEST(Properties, RecoveriesUseOnlyPrimitives) {
  const auto& prims = primitive_bindings();
  const std::vector<std::pair<SkillSpec, std::pair<Grounding, int>>> cases{
      {pick_place_spec(), {{{"arm", "right"}, {"obstacle", "small_block"}}, 2}},
      {push_spec(), {{{"arm", "right"}, {"obstacle", "heavy_block"}}, 3}},
      {pick_exchange_spec(), {{{"from", "right"}, {"to", "left"}}, 4}},
  };
  std::set<std::string> used_by_exchange;
  for (const auto& [spec, gi] : cases) {
    const auto gs = instantiate(spec, gi.first, {}, scenario_world(gi.second), cfg());
    for (const auto* a : actions(gs.tree)) {
      EXPECT_TRUE(prims.count(a->binding())) << spec.name << " uses " << a->binding();
      if (spec.name == kPickExchange) used_by_exchange.insert(a->binding());
    }
  }
  EXPECT_EQ(used_by_exchange, prims);
}

TEST(Properties, PrePostSoundnessOverRandomizedWorlds) {
  Rng rng(2024);
  int executed = 0, succeeded = 0;
  auto attempt = [&](const SkillSpec& spec, const Grounding& g, const Bindings& b, WorldState w) {
    const auto gs = instantiate(spec, g, b, w, cfg());
    if (!all_hold(gs.preconditions(), w)) return;
    ++executed;
    if (run(gs.tree, w) != NodeStatus::Success) return;
    ++succeeded;
    for (const auto& c : gs.postconditions()) EXPECT_TRUE(plan::eval_condition(c, w)) << spec.name << " " << c.str();
  };
  const auto& rc = cfg().randomization;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    attempt(peg_insertion_spec(), {{"arm", "left"}},
            {{"force", rng.uniform(1, 30)}, {"radius", rng.uniform(0, 0.03)}, {"path_distance", rng.uniform(0.01, 0.2)}},
            sim::randomize_domain(scenario_world(1), seed, rc));
    attempt(pick_place_spec(), {{"arm", "right"}, {"obstacle", "small_block"}}, {},
            sim::randomize_domain(scenario_world(2), seed, rc));
    attempt(push_spec(), {{"arm", "right"}, {"obstacle", "heavy_block"}}, {{"force", rng.uniform(1, 40)}},
            sim::randomize_domain(scenario_world(3), seed, rc));
    attempt(pick_exchange_spec(), {{"from", "right"}, {"to", "left"}},
            {{"offset_x", rng.uniform(-0.02, 0.02)}, {"offset_y", rng.uniform(-0.02, 0.02)}},
            sim::randomize_domain(scenario_world(4), seed, rc));
    attempt(pick_exchange_spec(), {{"from", "left"}, {"to", "right"}}, {},
            sim::randomize_domain(scenario_world(1), seed, rc));
  }
  EXPECT_EQ(executed, 125);
  EXPECT_GT(succeeded, 60);
}

TEST(Properties, TreesRoundTripThroughJson) {
  const auto gs = build_pick_exchange(scenario_world(4), ArmId::Right, ArmId::Left, {});
  const auto j = bt::to_json(gs.tree);
  const auto back = bt::from_json(j, registry());
  EXPECT_EQ(bt::to_json(back), j);
  WorldState a = scenario_world(4), b = scenario_world(4);
  EXPECT_EQ(run(gs.tree, a), run(back, b));
  EXPECT_EQ(a, b);
}
