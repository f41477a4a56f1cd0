#pragma once

// Scripted leaves and an engine-independent reference interpreter for
// behavior trees, shared by the unit tests and the acceptance binary.

#include <algorithm>
#include <vector>

#include "rbt/bt/node.hpp"

namespace bt_oracle {

using namespace rbt;
using namespace rbt::bt;

// Leaves read their status from a script in the world; calls are counted.
struct Script {
  std::vector<NodeStatus> leaf;
  std::vector<int> calls;
  std::vector<std::vector<NodeStatus>> queue;  // per-leaf statuses consumed in order, if non-empty
};

using N = Node<Script>;
using Ctx = TickContext<Script>;

inline N leaf(int i) {
  return N::action("leaf", {{"i", i}}, [i](Ctx& c) {
    auto& w = *c.world;
    ++w.calls[static_cast<std::size_t>(i)];
    auto& q = w.queue[static_cast<std::size_t>(i)];
    if (!q.empty()) {
      const NodeStatus s = q.front();
      q.erase(q.begin());
      return s;
    }
    return w.leaf[static_cast<std::size_t>(i)];
  });
}

inline N cond(bool v) {
  return N::condition("const", {{"v", v}}, [v](const Script&) { return v; });
}

inline Script script(std::vector<NodeStatus> s) {
  Script w;
  w.calls.assign(s.size(), 0);
  w.queue.assign(s.size(), {});
  w.leaf = std::move(s);
  return w;
}

inline NodeStatus run(const N& t, Script& w, std::vector<TraceEntry>* trace = nullptr) {
  Ctx ctx;
  ctx.world = &w;
  const auto s = tick(t, ctx);
  if (trace) *trace = ctx.trace;
  return s;
}

// --- independent reference interpreter --------------------------------------
//
// Shapes are described without any engine type. Internal nodes are 'S'
// (AND) or 'F' (OR, "fallback"), with optional wrapper 'I' (invert) or
// 'P' (force success) on top.

struct Shape {
  char op = 'L';  // 'L' leaf, 'S', 'F', 'I', 'P'
  int leaf = -1;
  std::vector<Shape> kids;
};

enum Ref { kS, kF, kR };  // success / failure / running

struct RefResult {
  Ref status;
  std::vector<int> visited;  // leaves in tick order
};

inline RefResult ref_eval(const Shape& s, const std::vector<Ref>& leaves) {
  RefResult r{kF, {}};
  if (s.op == 'L') {
    r.status = leaves[static_cast<std::size_t>(s.leaf)];
    r.visited.push_back(s.leaf);
    return r;
  }
  if (s.op == 'I' || s.op == 'P') {
    auto c = ref_eval(s.kids[0], leaves);
    r.visited = c.visited;
    if (s.op == 'I') r.status = c.status == kS ? kF : (c.status == kF ? kS : kR);
    else r.status = c.status == kF ? kS : c.status;
    return r;
  }
  // AND: stop at the first child that is not S. OR: stop at the first that is not F.
  const Ref cont = s.op == 'S' ? kS : kF;
  r.status = cont;
  for (const auto& k : s.kids) {
    auto c = ref_eval(k, leaves);
    r.visited.insert(r.visited.end(), c.visited.begin(), c.visited.end());
    if (c.status != cont) {
      r.status = c.status;
      break;
    }
  }
  return r;
}

inline N to_node(const Shape& s) {
  if (s.op == 'L') return leaf(s.leaf);
  std::vector<N> kids;
  for (const auto& k : s.kids) kids.push_back(to_node(k));
  if (s.op == 'S') return N::sequence("", std::move(kids));
  if (s.op == 'F') return N::selector("", std::move(kids));
  if (s.op == 'I') return N::decorator(DecoratorRule::inverter(), std::move(kids));
  return N::decorator(DecoratorRule::force_success(), std::move(kids));
}

inline int count_leaves(const Shape& s) {
  if (s.op == 'L') return 1;
  int n = 0;
  for (const auto& k : s.kids) n += count_leaves(k);
  return n;
}

inline void number_leaves(Shape& s, int& next) {
  if (s.op == 'L') {
    s.leaf = next++;
    return;
  }
  for (auto& k : s.kids) number_leaves(k, next);
}

// All ordered trees with exactly n leaves whose internal nodes have >= 2
// children and are labeled S or F. A single-child composite over these is
// added separately at the root.
inline std::vector<Shape> shapes_with(int n);

inline std::vector<std::vector<Shape>> forests_with(int n, int min_parts) {
  // ordered sequences of trees, total leaves n, at least min_parts trees
  std::vector<std::vector<Shape>> out;
  if (n == 0) {
    if (min_parts <= 0) out.push_back({});
    return out;
  }
  const int room = n - std::max(min_parts - 1, 0);  // leave one leaf per remaining required tree
  for (int first = 1; first <= room; ++first)
    for (const auto& t : shapes_with(first))
      for (auto rest : forests_with(n - first, min_parts - 1)) {
        rest.insert(rest.begin(), t);
        out.push_back(std::move(rest));
      }
  return out;
}

inline std::vector<Shape> shapes_with(int n) {
  std::vector<Shape> out;
  if (n == 1) {
    out.push_back(Shape{'L', -1, {}});
    return out;
  }
  for (auto& kids : forests_with(n, 2))
    for (char op : {'S', 'F'}) out.push_back(Shape{op, -1, kids});
  return out;
}

inline std::vector<Shape> all_shapes(int max_leaves) {
  std::vector<Shape> out;
  for (int n = 1; n <= max_leaves; ++n)
    for (const auto& s : shapes_with(n)) {
      out.push_back(s);
      for (char op : {'S', 'F'}) out.push_back(Shape{op, -1, {s}});
      for (char op : {'I', 'P'}) out.push_back(Shape{op, -1, {s}});
    }
  for (auto& s : out) {
    int next = 0;
    number_leaves(s, next);
  }
  return out;
}

inline NodeStatus to_status(Ref r) { return r == kS ? NodeStatus::Success : (r == kF ? NodeStatus::Failure : NodeStatus::Running); }


struct ExhaustiveResult {
  std::size_t shapes = 0;
  std::size_t cases = 0;
  std::size_t mismatches = 0;
};

// Every shape with up to `max_leaves` leaves, every assignment of the three
// statuses to its leaves; compares status and the set of leaves ticked.
inline ExhaustiveResult exhaustive_check(int max_leaves = 4) {
  ExhaustiveResult r;
  const auto shapes = all_shapes(max_leaves);
  r.shapes = shapes.size();
  for (const auto& s : shapes) {
    const int n = count_leaves(s);
    const N tree = to_node(s);
    int combos = 1;
    for (int i = 0; i < n; ++i) combos *= 3;
    for (int c = 0; c < combos; ++c) {
      std::vector<Ref> refs;
      std::vector<NodeStatus> st;
      for (int i = 0, v = c; i < n; ++i, v /= 3) {
        refs.push_back(static_cast<Ref>(v % 3));
        st.push_back(to_status(refs.back()));
      }
      const auto want = ref_eval(s, refs);
      auto w = script(st);
      const auto got = run(tree, w);
      std::vector<int> visited;
      for (int i = 0; i < n; ++i)
        if (w.calls[static_cast<std::size_t>(i)] > 0) visited.push_back(i);
      ++r.cases;
      if (got != to_status(want.status) || visited != want.visited) ++r.mismatches;
    }
  }
  return r;
}

}  // namespace bt_oracle
