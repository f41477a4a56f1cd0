#pragma once

#include <map>
#include <string>

#include "json.hpp"
#include "rbt/bt/node.hpp"

// Tree document schema (JSON):
//   {"kind": "Sequence" | "Selector", "name": str, "children": [node, ...]}
//   {"kind": "Decorator", "rule": "Inverter" | "ForceSuccess" | "RetryN",
//    "attempts": int (RetryN only), "child": node}
//   {"kind": "Action" | "Condition", "binding": str, "args": {...}}
// Leaves are re-bound by name through a Registry when loading.

namespace rbt::bt {

template <class World>
struct Registry {
  using ActionFactory = std::function<typename Node<World>::ActionFn(const nlohmann::json&)>;
  using ConditionFactory = std::function<typename Node<World>::PredicateFn(const nlohmann::json&)>;

  std::map<std::string, ActionFactory> actions;
  std::map<std::string, ConditionFactory> conditions;
};

inline std::string rule_name(DecoratorRule r) {
  switch (r.kind) {
    case DecoratorRule::Kind::Inverter: return "Inverter";
    case DecoratorRule::Kind::ForceSuccess: return "ForceSuccess";
    case DecoratorRule::Kind::RetryN: return "RetryN";
  }
  return "?";
}

template <class World>
nlohmann::json to_json(const Node<World>& n) {
  nlohmann::json j;
  j["kind"] = std::string(to_string(n.kind()));
  switch (n.kind()) {
    case NodeKind::Sequence:
    case NodeKind::Selector:
      j["name"] = n.name();
      j["children"] = nlohmann::json::array();
      for (const auto& c : n.children()) j["children"].push_back(to_json(c));
      break;
    case NodeKind::Decorator:
      j["rule"] = rule_name(n.rule());
      if (n.rule().kind == DecoratorRule::Kind::RetryN) j["attempts"] = n.rule().attempts;
      if (n.children().size() == 1) {
        j["child"] = to_json(n.children().front());
      } else {
        j["children"] = nlohmann::json::array();
        for (const auto& c : n.children()) j["children"].push_back(to_json(c));
      }
      break;
    case NodeKind::Action:
    case NodeKind::Condition:
      j["binding"] = n.binding();
      if (n.name() != n.binding()) j["name"] = n.name();
      j["args"] = n.args().is_null() ? nlohmann::json::object() : n.args();
      break;
  }
  return j;
}

template <class World>
Node<World> from_json(const nlohmann::json& j, const Registry<World>& reg) {
  if (!j.is_object() || !j.contains("kind"))
    throw Error(ErrorCode::MalformedTree, "node document without 'kind'");
  const std::string kind = j.at("kind").get<std::string>();

  auto load_children = [&](const nlohmann::json& arr) {
    std::vector<Node<World>> out;
    for (const auto& c : arr) out.push_back(from_json(c, reg));
    return out;
  };

  if (kind == "Sequence" || kind == "Selector") {
    auto children = j.contains("children") ? load_children(j.at("children")) : std::vector<Node<World>>{};
    const std::string name = j.value("name", kind);
    return kind == "Sequence" ? Node<World>::sequence(name, std::move(children))
                              : Node<World>::selector(name, std::move(children));
  }
  if (kind == "Decorator") {
    const std::string rule = j.at("rule").get<std::string>();
    DecoratorRule r;
    if (rule == "Inverter") {
      r = DecoratorRule::inverter();
    } else if (rule == "ForceSuccess") {
      r = DecoratorRule::force_success();
    } else if (rule == "RetryN") {
      r = DecoratorRule::retry(j.at("attempts").get<int>());
    } else {
      throw Error(ErrorCode::MalformedTree, "unknown decorator rule '" + rule + "'");
    }
    std::vector<Node<World>> children;
    if (j.contains("child")) children.push_back(from_json(j.at("child"), reg));
    if (j.contains("children")) children = load_children(j.at("children"));
    return Node<World>::decorator(r, std::move(children));
  }
  if (kind == "Action" || kind == "Condition") {
    const std::string binding = j.at("binding").get<std::string>();
    const nlohmann::json args = j.value("args", nlohmann::json::object());
    const std::string name = j.value("name", binding);
    if (kind == "Action") {
      auto it = reg.actions.find(binding);
      if (it == reg.actions.end()) throw Error(ErrorCode::UnknownBinding, "action '" + binding + "'");
      return Node<World>::action(binding, args, it->second(args)).named(name);
    }
    auto it = reg.conditions.find(binding);
    if (it == reg.conditions.end()) throw Error(ErrorCode::UnknownBinding, "condition '" + binding + "'");
    return Node<World>::condition(binding, args, it->second(args)).named(name);
  }
  throw Error(ErrorCode::MalformedTree, "unknown node kind '" + kind + "'");
}

}  // namespace rbt::bt
