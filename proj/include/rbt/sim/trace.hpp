#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "rbt/format.hpp"
#include "rbt/sim/world.hpp"

namespace rbt::sim {

// Episode trace CSV:
//   time,left_x,left_y,left_z,right_x,right_y,right_z,contact_force,force_integral,skill,flags
// flags is a '|'-separated list of events since the previous row. Plan lines
// are appended after the rows as "# plan,<step>,<skill>,<trigger>".

struct TraceRow {
  double time = 0.0;
  Pose left;
  Pose right;
  double contact_force = 0.0;
  double force_integral = 0.0;
  std::string skill;
  std::string flags;
};

/// Events between two consecutive snapshots.
inline std::string event_flags(const WorldState& prev, const WorldState& cur) {
  std::vector<std::string> ev;
  for (ArmId a : kArms) {
    const auto& p = prev.arm(a);
    const auto& c = cur.arm(a);
    if (p.gripper != c.gripper)
      ev.push_back(std::string(c.gripper == GripperState::Closed ? "close:" : "open:") + std::string(to_string(a)));
    if (p.held != c.held && c.held.kind != Held::Kind::None) ev.push_back("grasp:" + std::string(to_string(a)));
  }
  if (prev.peg.holder.kind != PegHolder::Kind::Inserted && cur.peg.holder.kind == PegHolder::Kind::Inserted)
    ev.emplace_back("inserted");
  for (std::size_t i = 0; i < cur.obstacles.size() && i < prev.obstacles.size(); ++i) {
    if (cur.obstacles[i].pose != prev.obstacles[i].pose) ev.push_back("moved:" + cur.obstacles[i].id);
  }
  if (blocked(prev) && !blocked(cur)) ev.emplace_back("unblocked");
  if (cur.contact_force > 0.0) ev.emplace_back("contact");
  return join(ev, "|");
}

class EpisodeTrace {
 public:
  void record(const WorldState& w, const std::string& skill) {
    TraceRow row;
    row.time = w.time;
    row.left = w.arm(ArmId::Left).ee;
    row.right = w.arm(ArmId::Right).ee;
    row.contact_force = w.contact_force;
    row.force_integral = w.force_integral;
    row.skill = skill;
    row.flags = last_ ? event_flags(*last_, w) : std::string();
    rows_.push_back(std::move(row));
    last_ = w;
  }

  void add_plan_line(std::string line) { plan_.push_back(std::move(line)); }

  const std::vector<TraceRow>& rows() const { return rows_; }
  const std::vector<std::string>& plan_lines() const { return plan_; }

  void write_csv(std::ostream& os) const {
    os << "time,left_x,left_y,left_z,right_x,right_y,right_z,contact_force,force_integral,skill,flags\n";
    for (const auto& r : rows_) {
      os << fmt_num(r.time) << ',' << fmt_num(r.left.x) << ',' << fmt_num(r.left.y) << ',' << fmt_num(r.left.z)
         << ',' << fmt_num(r.right.x) << ',' << fmt_num(r.right.y) << ',' << fmt_num(r.right.z) << ','
         << fmt_num(r.contact_force) << ',' << fmt_num(r.force_integral) << ',' << r.skill << ',' << r.flags << '\n';
    }
    for (std::size_t i = 0; i < plan_.size(); ++i) os << "# plan," << i << ',' << plan_[i] << '\n';
  }

 private:
  std::vector<TraceRow> rows_;
  std::vector<std::string> plan_;
  std::optional<WorldState> last_;
};

}  // namespace rbt::sim
