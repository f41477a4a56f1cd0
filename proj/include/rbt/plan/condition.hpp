#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rbt/format.hpp"
#include "rbt/sim/world.hpp"

namespace rbt::plan {

/// Closed predicate vocabulary shared by skill pre/postconditions and the planner.
enum class Predicate : std::uint8_t { Blocked, PegHeld, PegAt, GripperFree, AtApproach, Inserted, Graspable };

inline constexpr std::array<Predicate, 7> kPredicates{Predicate::Blocked,     Predicate::PegHeld,
                                                      Predicate::PegAt,       Predicate::GripperFree,
                                                      Predicate::AtApproach,  Predicate::Inserted,
                                                      Predicate::Graspable};

inline constexpr std::string_view to_string(Predicate p) noexcept {
  switch (p) {
    case Predicate::Blocked: return "blocked";
    case Predicate::PegHeld: return "pegHeld";
    case Predicate::PegAt: return "pegAt";
    case Predicate::GripperFree: return "gripperFree";
    case Predicate::AtApproach: return "atApproach";
    case Predicate::Inserted: return "inserted";
    case Predicate::Graspable: return "graspable";
  }
  return "?";
}

inline Predicate predicate_from_string(std::string_view s) {
  for (Predicate p : kPredicates)
    if (to_string(p) == s) return p;
  throw Error(ErrorCode::UnknownPredicate, std::string(s));
}

struct Condition {
  Predicate pred = Predicate::Blocked;
  std::vector<std::string> args;
  bool positive = true;

  static Condition of(Predicate p, std::vector<std::string> args) { return {p, std::move(args), true}; }
  static Condition is_not(Predicate p, std::vector<std::string> args) { return {p, std::move(args), false}; }

  Condition negated() const { return {pred, args, !positive}; }

  /// Atom identity, ignoring polarity.
  std::string atom() const { return std::string(to_string(pred)) + "(" + join(args, ",") + ")"; }
  std::string str() const { return (positive ? "" : "not ") + atom(); }

  friend bool operator==(const Condition&, const Condition&) = default;
};

inline void to_json(nlohmann::json& j, const Condition& c) {
  j = nlohmann::json{{"pred", std::string(to_string(c.pred))}, {"args", c.args}, {"positive", c.positive}};
}

inline void from_json(const nlohmann::json& j, Condition& c) {
  c.pred = predicate_from_string(j.at("pred").get<std::string>());
  c.args = j.value("args", std::vector<std::string>{});
  c.positive = j.value("positive", true);
}

namespace detail {
inline void expect_arity(const Condition& c, std::size_t lo, std::size_t hi) {
  if (c.args.size() < lo || c.args.size() > hi)
    throw Error(ErrorCode::UnknownPredicate, "wrong arity for " + c.atom());
}
}  // namespace detail

/// Truth value of the atom on a world snapshot, before polarity.
inline bool eval_atom(const Condition& c, const sim::WorldState& w) {
  using namespace sim;
  switch (c.pred) {
    case Predicate::Blocked:
      // blocked(hole) or blocked(hole, obstacle)
      detail::expect_arity(c, 1, 2);
      return c.args.size() == 2 ? blocked_by(w, c.args[1]) : blocked(w);
    case Predicate::PegHeld:
      detail::expect_arity(c, 1, 1);
      return w.peg.holder.held_by(arm_from_string(c.args[0]));
    case Predicate::PegAt:
      detail::expect_arity(c, 1, 1);
      if (c.args[0] != "table") throw Error(ErrorCode::UnknownPredicate, "pegAt supports only 'table'");
      return w.peg.holder.kind == PegHolder::Kind::Table;
    case Predicate::GripperFree: {
      detail::expect_arity(c, 1, 1);
      const auto& arm = w.arm(arm_from_string(c.args[0]));
      return arm.gripper == GripperState::Open && arm.held.empty();
    }
    case Predicate::AtApproach:
      detail::expect_arity(c, 1, 2);
      return at_approach_region(w, arm_from_string(c.args[0]));
    case Predicate::Inserted:
      detail::expect_arity(c, 0, 1);
      return w.peg.holder.kind == PegHolder::Kind::Inserted;
    case Predicate::Graspable:
      detail::expect_arity(c, 1, 1);
      return graspable(w, c.args[0]);
  }
  throw Error(ErrorCode::UnknownPredicate, c.atom());
}

inline bool eval_condition(const Condition& c, const sim::WorldState& w) { return eval_atom(c, w) == c.positive; }

}  // namespace rbt::plan
