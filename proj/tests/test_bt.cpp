#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <vector>

#include "bt_oracle.hpp"
#include "rbt/bt/node.hpp"
#include "rbt/bt/serialize.hpp"

using namespace rbt;
using namespace rbt::bt;

using namespace bt_oracle;


TEST(Tick, SequenceOfSuccessfulConditionsSucceeds) {
  auto w = script({});
  EXPECT_EQ(run(N::sequence("", {cond(true), cond(true)}), w), NodeStatus::Success);
}

TEST(Tick, SequenceShortCircuitsOnFailure) {
  auto w = script({NodeStatus::Success});
  auto t = N::sequence("", {cond(true), cond(false), leaf(0)});
  EXPECT_EQ(run(t, w), NodeStatus::Failure);
  EXPECT_EQ(w.calls[0], 0);
}

TEST(Tick, SelectorPassesRunning) {
  auto w = script({NodeStatus::Running});
  EXPECT_EQ(run(N::selector("", {cond(false), leaf(0)}), w), NodeStatus::Running);
}

TEST(Tick, SequenceRules) {
  auto w = script({NodeStatus::Success, NodeStatus::Success, NodeStatus::Success});
  EXPECT_EQ(run(N::sequence("", {leaf(0), leaf(1), leaf(2)}), w), NodeStatus::Success);
  w = script({NodeStatus::Running, NodeStatus::Success});
  EXPECT_EQ(run(N::sequence("", {leaf(0), leaf(1)}), w), NodeStatus::Running);
  EXPECT_EQ(w.calls[1], 0);
}

TEST(Tick, SelectorRules) {
  auto w = script({NodeStatus::Failure, NodeStatus::Success});
  EXPECT_EQ(run(N::selector("", {leaf(0), leaf(1)}), w), NodeStatus::Success);
  w = script({NodeStatus::Failure, NodeStatus::Failure});
  EXPECT_EQ(run(N::selector("", {leaf(0), leaf(1)}), w), NodeStatus::Failure);
}

TEST(Decorator, StatusTransforms) {
  using R = DecoratorRule;
  EXPECT_EQ(apply_decorator(R::inverter(), NodeStatus::Success), NodeStatus::Failure);
  EXPECT_EQ(apply_decorator(R::inverter(), NodeStatus::Failure), NodeStatus::Success);
  EXPECT_EQ(apply_decorator(R::inverter(), NodeStatus::Running), NodeStatus::Running);
  EXPECT_EQ(apply_decorator(R::force_success(), NodeStatus::Failure), NodeStatus::Success);
  EXPECT_EQ(apply_decorator(R::force_success(), NodeStatus::Running), NodeStatus::Running);
  EXPECT_EQ(apply_decorator(R::force_success(), NodeStatus::Success), NodeStatus::Success);
}

TEST(Decorator, RetryReticksWithinOneTraversal) {
  auto w = script({NodeStatus::Success});
  w.queue[0] = {NodeStatus::Failure, NodeStatus::Failure, NodeStatus::Success};
  const auto t = N::decorator(DecoratorRule::retry(3), leaf(0));
  std::vector<TraceEntry> trace;
  EXPECT_EQ(run(t, w, &trace), NodeStatus::Success);
  EXPECT_EQ(w.calls[0], 3);
  // three child entries then the decorator itself
  ASSERT_EQ(trace.size(), 4u);
  EXPECT_EQ(trace[0], (TraceEntry{1, NodeStatus::Failure}));
  EXPECT_EQ(trace[1], (TraceEntry{1, NodeStatus::Failure}));
  EXPECT_EQ(trace[2], (TraceEntry{1, NodeStatus::Success}));
  EXPECT_EQ(trace[3], (TraceEntry{0, NodeStatus::Success}));
}

TEST(Decorator, RetryGivesUpAfterN) {
  auto w = script({NodeStatus::Failure});
  EXPECT_EQ(run(N::decorator(DecoratorRule::retry(4), leaf(0)), w), NodeStatus::Failure);
  EXPECT_EQ(w.calls[0], 4);
}

TEST(Decorator, RetryStopsOnRunning) {
  auto w = script({NodeStatus::Running});
  EXPECT_EQ(run(N::decorator(DecoratorRule::retry(4), leaf(0)), w), NodeStatus::Running);
  EXPECT_EQ(w.calls[0], 1);
}

TEST(Validation, MalformedTrees) {
  auto w = script({NodeStatus::Success, NodeStatus::Success});
  auto expect_malformed = [&](const N& t) {
    try {
      run(t, w);
      FAIL() << "expected MalformedTree";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::MalformedTree);
    }
  };
  expect_malformed(N::sequence("", {}));
  expect_malformed(N::selector("", {}));
  expect_malformed(N::decorator(DecoratorRule::inverter(), std::vector<N>{}));
  expect_malformed(N::decorator(DecoratorRule::inverter(), std::vector<N>{leaf(0), leaf(1)}));
  expect_malformed(N::decorator(DecoratorRule::retry(0), leaf(0)));
  expect_malformed(N::action("x", {}, nullptr));
  expect_malformed(N::sequence("", {leaf(0), N::selector("", {})}));
}

TEST(Ids, PreorderIdsAndPostorderTrace) {
  auto w = script({NodeStatus::Success, NodeStatus::Failure, NodeStatus::Success});
  // 0:Seq 1:leaf0 2:Sel 3:leaf1 4:leaf2
  const auto t = N::sequence("", {leaf(0), N::selector("", {leaf(1), leaf(2)})});
  std::vector<int> ids;
  t.visit([&](const N& n) { ids.push_back(n.id()); });
  EXPECT_EQ(ids, (std::vector<int>{0, 1, 2, 3, 4}));
  std::vector<TraceEntry> trace;
  EXPECT_EQ(run(t, w, &trace), NodeStatus::Success);
  const std::vector<TraceEntry> want{{1, NodeStatus::Success},
                                     {3, NodeStatus::Failure},
                                     {4, NodeStatus::Success},
                                     {2, NodeStatus::Success},
                                     {0, NodeStatus::Success}};
  EXPECT_EQ(trace, want);
}

// Exhaustive comparison with the reference interpreter: every shape with up
// to four leaves, every assignment of the three statuses to its leaves.
TEST(Exhaustive, MatchesReferenceInterpreter) {
  const auto r = exhaustive_check(4);
  EXPECT_GT(r.cases, 10000u);
  EXPECT_EQ(r.mismatches, 0u);
}

TEST(Reactivity, RepeatedTicksAreIdentical) {
  const auto shapes = all_shapes(3);
  for (const auto& s : shapes) {
    const int n = count_leaves(s);
    std::vector<NodeStatus> st(static_cast<std::size_t>(n), NodeStatus::Running);
    for (int i = 0; i < n; ++i) st[static_cast<std::size_t>(i)] = to_status(static_cast<Ref>(i % 3));
    const N tree = to_node(s);
    auto w1 = script(st);
    std::vector<TraceEntry> t1, t2;
    EXPECT_EQ(run(tree, w1, &t1), run(tree, w1, &t2));
    EXPECT_EQ(t1, t2);
  }
}

TEST(Conditions, NeverRunning) {
  Script w = script({});
  for (bool v : {true, false}) EXPECT_NE(run(cond(v), w), NodeStatus::Running);
}

TEST(Serialize, RoundTripPreservesStructureAndBehavior) {
  Registry<Script> reg;
  reg.actions["leaf"] = [](const nlohmann::json& a) { return leaf(a.at("i").get<int>()).action_fn(); };
  reg.conditions["const"] = [](const nlohmann::json& a) { return cond(a.at("v").get<bool>()).predicate_fn(); };
  const auto t = N::sequence("root", {cond(true), N::decorator(DecoratorRule::retry(2), leaf(0)),
                                      N::selector("alt", {N::decorator(DecoratorRule::inverter(), leaf(1)), leaf(2)})});
  const auto j = to_json(t);
  const auto back = rbt::bt::from_json(j, reg);
  EXPECT_EQ(to_json(back), j);
  EXPECT_EQ(back.size(), t.size());
  for (int c = 0; c < 27; ++c) {
    std::vector<NodeStatus> st;
    for (int i = 0, v = c; i < 3; ++i, v /= 3) st.push_back(to_status(static_cast<Ref>(v % 3)));
    auto w1 = script(st), w2 = script(st);
    std::vector<TraceEntry> t1, t2;
    EXPECT_EQ(run(t, w1, &t1), run(back, w2, &t2));
    EXPECT_EQ(t1, t2);
  }
}

TEST(Serialize, UnknownBindingAndBadKind) {
  Registry<Script> reg;
  try {
    rbt::bt::from_json<Script>(nlohmann::json{{"kind", "Action"}, {"binding", "nope"}}, reg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownBinding);
  }
  try {
    rbt::bt::from_json<Script>(nlohmann::json{{"kind", "Parallel"}}, reg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedTree);
  }
}
