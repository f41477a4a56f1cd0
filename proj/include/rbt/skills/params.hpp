#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rbt/plan/condition.hpp"
#include "rbt/skills/primitives.hpp"

namespace rbt::skills {

enum class ParamClass : std::uint8_t { Intrinsic, Extrinsic };
enum class ParamMode : std::uint8_t { Manual, Learned };

inline constexpr std::string_view to_string(ParamClass c) noexcept {
  return c == ParamClass::Intrinsic ? "intrinsic" : "extrinsic";
}
inline constexpr std::string_view to_string(ParamMode m) noexcept { return m == ParamMode::Manual ? "manual" : "learned"; }

inline ParamClass param_class_from_string(std::string_view s) {
  if (s == "intrinsic") return ParamClass::Intrinsic;
  if (s == "extrinsic") return ParamClass::Extrinsic;
  throw Error(ErrorCode::InvalidDescriptor, "unknown parameter class '" + std::string(s) + "'");
}
inline ParamMode param_mode_from_string(std::string_view s) {
  if (s == "manual") return ParamMode::Manual;
  if (s == "learned") return ParamMode::Learned;
  throw Error(ErrorCode::InvalidDescriptor, "unknown parameter mode '" + std::string(s) + "'");
}

struct ParamDescriptor {
  std::string name;
  std::string unit;
  double lo = 0.0;
  double hi = 1.0;
  ParamClass cls = ParamClass::Extrinsic;
  ParamMode mode = ParamMode::Manual;
  double default_value = 0.0;

  bool contains(double v) const { return v >= lo && v <= hi; }
  friend bool operator==(const ParamDescriptor&, const ParamDescriptor&) = default;
};

inline void validate(const ParamDescriptor& d) {
  if (!std::isfinite(d.lo) || !std::isfinite(d.hi) || !(d.lo < d.hi))
    throw Error(ErrorCode::InvalidDescriptor, d.name + ": need finite lo < hi");
  if (!d.contains(d.default_value)) throw Error(ErrorCode::InvalidDescriptor, d.name + ": default outside bounds");
  if (d.mode == ParamMode::Learned && d.cls != ParamClass::Extrinsic)
    throw Error(ErrorCode::InvalidDescriptor, d.name + ": only extrinsic parameters can be learned");
}

inline void to_json(nlohmann::json& j, const ParamDescriptor& d) {
  j = {{"name", d.name},
       {"unit", d.unit},
       {"bounds", {d.lo, d.hi}},
       {"class", std::string(to_string(d.cls))},
       {"mode", std::string(to_string(d.mode))},
       {"default", d.default_value}};
}

inline void from_json(const nlohmann::json& j, ParamDescriptor& d) {
  d.name = j.at("name").get<std::string>();
  d.unit = j.value("unit", std::string());
  d.lo = j.at("bounds").at(0).get<double>();
  d.hi = j.at("bounds").at(1).get<double>();
  d.cls = param_class_from_string(j.at("class").get<std::string>());
  d.mode = param_mode_from_string(j.at("mode").get<std::string>());
  d.default_value = j.at("default").get<double>();
}

using Bindings = std::map<std::string, double>;

/// Variable assignment for a skill's symbolic arguments ("arm", "obstacle",
/// "from", "to", ...). Condition templates refer to them as "?name".
using Grounding = std::map<std::string, std::string>;

inline plan::Condition ground(const plan::Condition& c, const Grounding& g) {
  plan::Condition out = c;
  for (auto& a : out.args) {
    if (a.empty() || a.front() != '?') continue;
    auto it = g.find(a.substr(1));
    if (it == g.end()) throw Error(ErrorCode::UnknownPredicate, "unbound variable " + a + " in " + c.str());
    a = it->second;
  }
  return out;
}

inline std::vector<plan::Condition> ground(const std::vector<plan::Condition>& cs, const Grounding& g) {
  std::vector<plan::Condition> out;
  out.reserve(cs.size());
  for (const auto& c : cs) out.push_back(ground(c, g));
  return out;
}

/// One disjunct of a skill's precondition, with the effects that follow from
/// executing the skill out of it.
struct ConditionSet {
  std::string label;
  std::vector<plan::Condition> pre;
  std::vector<plan::Condition> post;

  friend bool operator==(const ConditionSet&, const ConditionSet&) = default;
};

inline void to_json(nlohmann::json& j, const ConditionSet& c) {
  j = {{"label", c.label}, {"pre", c.pre}, {"post", c.post}};
}
inline void from_json(const nlohmann::json& j, ConditionSet& c) {
  c.label = j.value("label", std::string());
  c.pre = j.at("pre").get<std::vector<plan::Condition>>();
  c.post = j.at("post").get<std::vector<plan::Condition>>();
}

struct SkillSpec;

/// Builds the tree for a skill from a world snapshot, its grounding and fully
/// resolved bindings.
using TemplateFn =
    std::function<Tree(const WorldState&, const Grounding&, const Bindings&, const Config&)>;

struct SkillSpec {
  std::string name;
  std::vector<ParamDescriptor> params;
  std::vector<std::string> variables;  // symbolic arguments, e.g. {"arm", "obstacle"}
  std::vector<ConditionSet> variants;  // preconditions are the disjunction of variants
  TemplateFn build;

  const ParamDescriptor* param(std::string_view n) const {
    for (const auto& p : params)
      if (p.name == n) return &p;
    return nullptr;
  }

  std::vector<std::string> learned() const {
    std::vector<std::string> out;
    for (const auto& p : params)
      if (p.mode == ParamMode::Learned) out.push_back(p.name);
    return out;
  }

  SkillSpec with_mode(std::string_view n, ParamMode m) const {
    SkillSpec s = *this;
    bool found = false;
    for (auto& p : s.params)
      if (p.name == n) {
        p.mode = m;
        found = true;
      }
    if (!found) throw Error(ErrorCode::InvalidDescriptor, name + " has no parameter '" + std::string(n) + "'");
    for (const auto& p : s.params) validate(p);
    return s;
  }

  SkillSpec with_default(std::string_view n, double v) const {
    SkillSpec s = *this;
    bool found = false;
    for (auto& p : s.params)
      if (p.name == n) {
        p.default_value = v;
        found = true;
      }
    if (!found) throw Error(ErrorCode::InvalidDescriptor, name + " has no parameter '" + std::string(n) + "'");
    for (const auto& p : s.params) validate(p);
    return s;
  }
};

/// Metadata of a spec (without the template) for the catalog file.
inline nlohmann::json spec_to_json(const SkillSpec& s) {
  return {{"name", s.name}, {"params", s.params}, {"variables", s.variables}, {"variants", s.variants}};
}

/// Fills unset parameters with their defaults and checks every value against
/// its bounds.
inline Bindings resolve_bindings(const SkillSpec& spec, const Bindings& given) {
  for (const auto& [k, v] : given)
    if (spec.param(k) == nullptr) throw Error(ErrorCode::OutOfBounds, spec.name + " has no parameter '" + k + "'");
  Bindings out;
  for (const auto& p : spec.params) {
    validate(p);
    auto it = given.find(p.name);
    const double v = it == given.end() ? p.default_value : it->second;
    if (!std::isfinite(v) || !p.contains(v))
      throw Error(ErrorCode::OutOfBounds, spec.name + "." + p.name + " = " + fmt_num(v) + " outside [" +
                                              fmt_num(p.lo) + ", " + fmt_num(p.hi) + "]");
    out[p.name] = v;
  }
  return out;
}

struct GroundedSkill {
  SkillSpec spec;
  Grounding grounding;
  Bindings bindings;
  int variant = 0;
  Tree tree;

  const ConditionSet& conditions_template() const { return spec.variants.at(static_cast<std::size_t>(variant)); }
  std::vector<plan::Condition> preconditions() const { return ground(conditions_template().pre, grounding); }
  std::vector<plan::Condition> postconditions() const { return ground(conditions_template().post, grounding); }
};

/// Preconditions of one variant that are false on `w`, in declaration order.
inline std::vector<plan::Condition> unmet(const std::vector<plan::Condition>& pre, const WorldState& w) {
  std::vector<plan::Condition> out;
  for (const auto& c : pre)
    if (!plan::eval_condition(c, w)) out.push_back(c);
  return out;
}

/// Index of the variant with the fewest unmet preconditions (first on ties).
inline int best_variant(const SkillSpec& spec, const Grounding& g, const WorldState& w) {
  int best = 0;
  std::size_t best_n = static_cast<std::size_t>(-1);
  for (std::size_t i = 0; i < spec.variants.size(); ++i) {
    const std::size_t n = unmet(ground(spec.variants[i].pre, g), w).size();
    if (n < best_n) {
      best = static_cast<int>(i);
      best_n = n;
    }
  }
  return best;
}

inline GroundedSkill instantiate(const SkillSpec& spec, const Grounding& g, const Bindings& given, const WorldState& w,
                                 const Config& cfg) {
  for (const auto& v : spec.variables)
    if (!g.count(v)) throw Error(ErrorCode::InvalidDescriptor, spec.name + ": variable '" + v + "' is unbound");
  GroundedSkill gs{spec, g, resolve_bindings(spec, given), best_variant(spec, g, w), Tree{}};
  gs.tree = spec.build(w, gs.grounding, gs.bindings, cfg);
  bt::validate_tree(gs.tree);
  return gs;
}

}  // namespace rbt::skills
