#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rbt/error.hpp"

namespace rbt::bt {

enum class NodeStatus : std::uint8_t { Success, Failure, Running };

inline constexpr std::string_view to_string(NodeStatus s) noexcept {
  switch (s) {
    case NodeStatus::Success: return "Success";
    case NodeStatus::Failure: return "Failure";
    case NodeStatus::Running: return "Running";
  }
  return "?";
}

enum class NodeKind : std::uint8_t { Sequence, Selector, Action, Condition, Decorator };

inline constexpr std::string_view to_string(NodeKind k) noexcept {
  switch (k) {
    case NodeKind::Sequence: return "Sequence";
    case NodeKind::Selector: return "Selector";
    case NodeKind::Action: return "Action";
    case NodeKind::Condition: return "Condition";
    case NodeKind::Decorator: return "Decorator";
  }
  return "?";
}

struct DecoratorRule {
  enum class Kind : std::uint8_t { Inverter, ForceSuccess, RetryN };
  Kind kind = Kind::Inverter;
  int attempts = 1;  // RetryN only

  static DecoratorRule inverter() { return {Kind::Inverter, 1}; }
  static DecoratorRule force_success() { return {Kind::ForceSuccess, 1}; }
  static DecoratorRule retry(int n) { return {Kind::RetryN, n}; }

  friend bool operator==(const DecoratorRule&, const DecoratorRule&) = default;
};

/// Status transform for the single-shot rules. RetryN is handled in tick()
/// because it re-ticks its child.
inline NodeStatus apply_decorator(DecoratorRule rule, NodeStatus child) noexcept {
  switch (rule.kind) {
    case DecoratorRule::Kind::Inverter:
      if (child == NodeStatus::Success) return NodeStatus::Failure;
      if (child == NodeStatus::Failure) return NodeStatus::Success;
      return child;
    case DecoratorRule::Kind::ForceSuccess:
      return child == NodeStatus::Failure ? NodeStatus::Success : child;
    case DecoratorRule::Kind::RetryN:
      return child;
  }
  return child;
}

struct TraceEntry {
  int node_id = -1;
  NodeStatus status = NodeStatus::Failure;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

template <class World>
struct TickContext {
  World* world = nullptr;
  std::uint64_t tick_index = 0;
  std::vector<TraceEntry> trace;
  std::function<void(const World&)> on_step;  // optional observer for actions that integrate many steps
};

/// A behavior-tree node held by value. Leaves carry a binding name and JSON
/// arguments so that trees round-trip through the text format.
template <class World>
class Node {
 public:
  using ActionFn = std::function<NodeStatus(TickContext<World>&)>;
  using PredicateFn = std::function<bool(const World&)>;

  static Node sequence(std::string name, std::vector<Node> children) {
    return composite(NodeKind::Sequence, std::move(name), std::move(children));
  }

  static Node selector(std::string name, std::vector<Node> children) {
    return composite(NodeKind::Selector, std::move(name), std::move(children));
  }

  static Node action(std::string binding, nlohmann::json args, ActionFn fn) {
    Node n;
    n.kind_ = NodeKind::Action;
    n.name_ = binding;
    n.binding_ = std::move(binding);
    n.args_ = std::move(args);
    n.action_ = std::move(fn);
    return n;
  }

  static Node condition(std::string binding, nlohmann::json args, PredicateFn fn) {
    Node n;
    n.kind_ = NodeKind::Condition;
    n.name_ = binding;
    n.binding_ = std::move(binding);
    n.args_ = std::move(args);
    n.predicate_ = std::move(fn);
    return n;
  }

  static Node decorator(DecoratorRule rule, Node child) {
    std::vector<Node> c;
    c.push_back(std::move(child));
    return decorator(rule, std::move(c));
  }

  /// Unchecked form; a child count other than one is reported by tick().
  static Node decorator(DecoratorRule rule, std::vector<Node> children) {
    Node n = composite(NodeKind::Decorator, "", std::move(children));
    n.rule_ = rule;
    return n;
  }

  NodeKind kind() const noexcept { return kind_; }
  int id() const noexcept { return id_; }
  const std::string& name() const noexcept { return name_; }
  const std::string& binding() const noexcept { return binding_; }
  const nlohmann::json& args() const noexcept { return args_; }
  const std::vector<Node>& children() const noexcept { return children_; }
  DecoratorRule rule() const noexcept { return rule_; }
  const ActionFn& action_fn() const noexcept { return action_; }
  const PredicateFn& predicate_fn() const noexcept { return predicate_; }

  Node&& named(std::string name) && {
    name_ = std::move(name);
    return std::move(*this);
  }

  std::size_t size() const noexcept {
    std::size_t n = 1;
    for (const auto& c : children_) n += c.size();
    return n;
  }

  /// Preorder walk.
  template <class Fn>
  void visit(Fn&& fn) const {
    fn(*this);
    for (const auto& c : children_) c.visit(fn);
  }

 private:
  static Node composite(NodeKind kind, std::string name, std::vector<Node> children) {
    Node n;
    n.kind_ = kind;
    n.name_ = name.empty() ? std::string(to_string(kind)) : std::move(name);
    n.children_ = std::move(children);
    int next = 0;
    n.renumber(next);
    return n;
  }

  void renumber(int& next) {
    id_ = next++;
    for (auto& c : children_) c.renumber(next);
  }

  NodeKind kind_ = NodeKind::Action;
  int id_ = 0;
  std::string name_;
  std::string binding_;
  nlohmann::json args_;
  std::vector<Node> children_;
  DecoratorRule rule_{};
  ActionFn action_;
  PredicateFn predicate_;
};

template <class World>
void validate(const Node<World>& n) {
  switch (n.kind()) {
    case NodeKind::Sequence:
    case NodeKind::Selector:
      if (n.children().empty())
        throw Error(ErrorCode::MalformedTree, "composite '" + n.name() + "' has no children");
      break;
    case NodeKind::Decorator:
      if (n.children().size() != 1)
        throw Error(ErrorCode::MalformedTree,
                    "decorator has " + std::to_string(n.children().size()) + " children");
      if (n.rule().kind == DecoratorRule::Kind::RetryN && n.rule().attempts < 1)
        throw Error(ErrorCode::MalformedTree, "RetryN needs at least one attempt");
      break;
    case NodeKind::Action:
      if (!n.children().empty() || !n.action_fn())
        throw Error(ErrorCode::MalformedTree, "action '" + n.name() + "' is not a bound leaf");
      break;
    case NodeKind::Condition:
      if (!n.children().empty() || !n.predicate_fn())
        throw Error(ErrorCode::MalformedTree, "condition '" + n.name() + "' is not a bound leaf");
      break;
  }
}

template <class World>
void validate_tree(const Node<World>& root) {
  root.visit([](const Node<World>& n) { validate(n); });
}

/// One depth-first traversal. Composites are memoryless: every tick starts
/// from the first child.
template <class World>
NodeStatus tick(const Node<World>& n, TickContext<World>& ctx) {
  validate(n);
  NodeStatus out = NodeStatus::Failure;
  switch (n.kind()) {
    case NodeKind::Sequence:
      out = NodeStatus::Success;
      for (const auto& c : n.children()) {
        const NodeStatus s = tick(c, ctx);
        if (s != NodeStatus::Success) {
          out = s;
          break;
        }
      }
      break;
    case NodeKind::Selector:
      out = NodeStatus::Failure;
      for (const auto& c : n.children()) {
        const NodeStatus s = tick(c, ctx);
        if (s != NodeStatus::Failure) {
          out = s;
          break;
        }
      }
      break;
    case NodeKind::Action:
      out = n.action_fn()(ctx);
      break;
    case NodeKind::Condition:
      out = n.predicate_fn()(*ctx.world) ? NodeStatus::Success : NodeStatus::Failure;
      break;
    case NodeKind::Decorator: {
      const auto& child = n.children().front();
      if (n.rule().kind == DecoratorRule::Kind::RetryN) {
        out = tick(child, ctx);
        for (int attempt = 1; out == NodeStatus::Failure && attempt < n.rule().attempts; ++attempt)
          out = tick(child, ctx);
      } else {
        out = apply_decorator(n.rule(), tick(child, ctx));
      }
      break;
    }
  }
  ctx.trace.push_back({n.id(), out});
  return out;
}

}  // namespace rbt::bt
