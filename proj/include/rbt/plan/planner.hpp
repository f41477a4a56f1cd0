#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rbt/plan/condition.hpp"
#include "rbt/skills/skills.hpp"

namespace rbt::plan {

using skills::Grounding;
using skills::SkillSpec;

/// Preconditions of `spec` under `g` that are false on `w`, in declaration
/// order. For skills with several precondition variants the closest variant
/// is reported.
inline std::vector<Condition> unmet_preconditions(const SkillSpec& spec, const Grounding& g, const sim::WorldState& w) {
  const int v = skills::best_variant(spec, g, w);
  return skills::unmet(skills::ground(spec.variants.at(static_cast<std::size_t>(v)).pre, g), w);
}

/// A catalog entry with its symbolic arguments fixed.
struct GroundedAction {
  int catalog_index = 0;
  int ordinal = 0;  // position in the full grounding enumeration
  std::string skill;
  Grounding grounding;
  int variant = 0;
  std::vector<Condition> pre;
  std::vector<Condition> post;

  std::string str() const {
    std::vector<std::string> parts;
    for (const auto& [k, v] : grounding) parts.push_back(k + "=" + v);
    return skill + "(" + join(parts, " ") + ")";
  }
};

/// Enumerates every grounding of every catalog entry on `w`: obstacles in
/// world order, the helper arm (the one not running the production skill)
/// before the production arm.
inline std::vector<GroundedAction> ground_catalog(const std::vector<SkillSpec>& catalog, const sim::WorldState& w,
                                                  sim::ArmId production_arm) {
  const std::vector<sim::ArmId> arms{sim::other(production_arm), production_arm};
  std::vector<GroundedAction> out;
  for (std::size_t ci = 0; ci < catalog.size(); ++ci) {
    const SkillSpec& spec = catalog[ci];
    std::vector<Grounding> gs{{}};
    for (const auto& var : spec.variables) {
      std::vector<Grounding> next;
      if (var == "to") {
        // always the arm that is not "from"
        for (auto g : gs) {
          g["to"] = std::string(sim::to_string(sim::other(sim::arm_from_string(g.at("from")))));
          next.push_back(std::move(g));
        }
        gs = std::move(next);
        continue;
      }
      std::vector<std::string> values;
      if (var == "obstacle") {
        for (const auto& o : w.obstacles) values.push_back(o.id);
      } else if (var == "arm" || var == "from") {
        for (auto a : arms) values.emplace_back(sim::to_string(a));
      } else {
        throw Error(ErrorCode::UnknownPredicate, spec.name + ": cannot ground variable '" + var + "'");
      }
      for (const auto& g : gs)
        for (const auto& v : values) {
          Grounding h = g;
          h[var] = v;
          next.push_back(std::move(h));
        }
      gs = std::move(next);
    }
    for (const auto& g : gs)
      for (std::size_t vi = 0; vi < spec.variants.size(); ++vi) {
        GroundedAction a;
        a.catalog_index = static_cast<int>(ci);
        a.ordinal = static_cast<int>(out.size());
        a.skill = spec.name;
        a.grounding = g;
        a.variant = static_cast<int>(vi);
        a.pre = skills::ground(spec.variants[vi].pre, g);
        a.post = skills::ground(spec.variants[vi].post, g);
        out.push_back(std::move(a));
      }
  }
  return out;
}

/// World snapshot plus literal overrides written by symbolically applied
/// postconditions.
class SymbolicState {
 public:
  explicit SymbolicState(const sim::WorldState& w) : world_(&w) {}

  bool holds(const Condition& c) const {
    auto it = overrides_.find(c.atom());
    const bool v = it != overrides_.end() ? it->second : eval_atom(c, *world_);
    return v == c.positive;
  }

  bool holds_all(const std::vector<Condition>& cs) const {
    return std::all_of(cs.begin(), cs.end(), [&](const auto& c) { return holds(c); });
  }

  void apply(const GroundedAction& a) {
    for (const auto& c : a.post) overrides_[c.atom()] = c.positive;
  }

 private:
  const sim::WorldState* world_;
  std::map<std::string, bool> overrides_;
};

struct PlanStep {
  int catalog_index = 0;
  std::string skill;
  Grounding grounding;
  int variant = 0;
  std::vector<Condition> achieves;  // postconditions that were unmet when planned

  std::string str() const {
    std::vector<std::string> parts;
    for (const auto& [k, v] : grounding) parts.push_back(k + "=" + v);
    std::vector<std::string> ach;
    for (const auto& c : achieves) ach.push_back(c.str());
    return skill + "(" + join(parts, " ") + ") for " + join(ach, " & ");
  }
};

struct Plan {
  std::vector<PlanStep> steps;
  std::uint64_t expansions = 0;
};

struct PlannerOptions {
  int max_depth = 4;
  sim::ArmId production_arm = sim::ArmId::Left;
};

namespace detail {

class Regression {
 public:
  Regression(const std::vector<GroundedAction>& actions, const std::vector<Condition>& goals, int max_depth)
      : actions_(actions), goals_(goals), max_depth_(max_depth) {}

  std::vector<std::vector<int>> solve(const SymbolicState& s0) {
    std::vector<int> plan;
    achieve(goals_, s0, plan, 0, [&](const SymbolicState& s, const std::vector<int>& p) {
      if (s.holds_all(goals_)) found_.push_back(p);
    });
    return found_;
  }

  std::uint64_t expansions = 0;

 private:
  using Cont = std::function<void(const SymbolicState&, const std::vector<int>&)>;

  /// Makes every condition in `goals` true by choosing, for some false goal,
  /// an action that asserts it, first regressing through that action's own
  /// preconditions. `pending` counts actions chosen higher up the stack that
  /// still have to be appended.
  void achieve(const std::vector<Condition>& goals, const SymbolicState& s, std::vector<int>& plan, int pending,
               const Cont& k) {
    ++expansions;
    bool all = true;
    for (const auto& g : goals) {
      if (s.holds(g)) continue;
      all = false;
      if (static_cast<int>(plan.size()) + pending + 1 > max_depth_) continue;
      for (const auto& a : actions_) {
        if (std::find(a.post.begin(), a.post.end(), g) == a.post.end()) continue;
        achieve(a.pre, s, plan, pending + 1, [&](const SymbolicState& s1, const std::vector<int>& p1) {
          SymbolicState s2 = s1;
          s2.apply(a);
          std::vector<int> p2 = p1;
          p2.push_back(a.ordinal);
          achieve(goals, s2, p2, pending, k);
        });
      }
    }
    if (all) k(s, plan);
  }

  const std::vector<GroundedAction>& actions_;
  std::vector<Condition> goals_;
  int max_depth_;
  std::vector<std::vector<int>> found_;
};

}  // namespace detail

/// Backward-chaining recovery planner. `goals` are the production skill's
/// grounded preconditions. Candidate plans are checked by forward condition
/// simulation; plans with a proper subsequence that already reaches the goals
/// are discarded. Among the rest the shortest plan wins, then the
/// lexicographically smallest sequence of catalog positions, then grounding
/// order.
inline Plan plan_recovery(const std::vector<Condition>& goals, const std::vector<SkillSpec>& catalog,
                          const sim::WorldState& w, const PlannerOptions& opt = {}) {
  Plan out;
  const SymbolicState s0(w);
  if (s0.holds_all(goals)) return out;

  const auto actions = ground_catalog(catalog, w, opt.production_arm);
  detail::Regression search(actions, goals, opt.max_depth);
  auto candidates = search.solve(s0);
  out.expansions = search.expansions;

  auto reaches = [&](const std::vector<int>& p) {
    SymbolicState s(w);
    for (int o : p) {
      const auto& a = actions[static_cast<std::size_t>(o)];
      if (!s.holds_all(a.pre)) return false;
      s.apply(a);
    }
    return s.holds_all(goals);
  };
  // Irredundant: no proper subsequence (strict prefixes included) also works.
  auto valid = [&](const std::vector<int>& p) {
    if (p.empty() || static_cast<int>(p.size()) > opt.max_depth || !reaches(p)) return false;
    const unsigned full = (1u << p.size()) - 1;
    for (unsigned mask = 0; mask < full; ++mask) {
      std::vector<int> sub;
      for (std::size_t i = 0; i < p.size(); ++i)
        if (mask & (1u << i)) sub.push_back(p[i]);
      if (reaches(sub)) return false;
    }
    return true;
  };
  auto key = [&](const std::vector<int>& p) {
    std::vector<int> k{static_cast<int>(p.size())};
    for (int o : p) k.push_back(actions[static_cast<std::size_t>(o)].catalog_index);
    for (int o : p) k.push_back(o);
    return k;
  };

  std::optional<std::vector<int>> best;
  for (const auto& c : candidates) {
    if (!valid(c)) continue;
    if (!best || key(c) < key(*best)) best = c;
  }
  if (!best) {
    std::vector<std::string> u;
    for (const auto& g : goals)
      if (!s0.holds(g)) u.push_back(g.str());
    throw Error(ErrorCode::NoPlanFound, "no recovery for " + join(u, ", "));
  }

  SymbolicState s(w);
  for (int o : *best) {
    const auto& a = actions[static_cast<std::size_t>(o)];
    PlanStep step{a.catalog_index, a.skill, a.grounding, a.variant, {}};
    for (const auto& c : a.post)
      if (!s.holds(c)) step.achieves.push_back(c);
    s.apply(a);
    out.steps.push_back(std::move(step));
  }
  return out;
}

struct ExecutionProgram {
  std::vector<Condition> trigger;  // unmet production preconditions
  std::vector<PlanStep> recovery;
  std::string production;
  Grounding production_grounding;
  std::uint64_t expansions = 0;

  std::size_t size() const { return recovery.size() + 1; }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& s : recovery) out.push_back(s.skill);
    out.push_back(production);
    return out;
  }
};

/// Checks the production skill's preconditions and, only when some fail,
/// plans a recovery sequence to run ahead of it.
inline ExecutionProgram monitor_and_dispatch(const SkillSpec& production, const Grounding& g,
                                             const sim::WorldState& w, const std::vector<SkillSpec>& catalog,
                                             const PlannerOptions& opt = {}) {
  ExecutionProgram prog;
  prog.production = production.name;
  prog.production_grounding = g;
  prog.trigger = unmet_preconditions(production, g, w);
  if (prog.trigger.empty()) return prog;
  const auto goals = skills::ground(production.variants.front().pre, g);
  Plan p = plan_recovery(goals, catalog, w, opt);
  prog.recovery = std::move(p.steps);
  prog.expansions = p.expansions;
  return prog;
}

}  // namespace rbt::plan
