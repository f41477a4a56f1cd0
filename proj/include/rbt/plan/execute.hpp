#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rbt/plan/planner.hpp"
#include "rbt/sim/trace.hpp"

namespace rbt::plan {

using SkillBindings = std::map<std::string, skills::Bindings>;  // skill name -> bindings

struct StepRecord {
  std::string skill;
  bt::NodeStatus status = bt::NodeStatus::Failure;
  int ticks = 0;
};

struct EpisodeResult {
  bool success = false;
  sim::WorldState world;
  std::vector<std::string> plan_log;  // one line per dispatched program
  std::vector<StepRecord> steps;
  int dispatches = 0;
  std::string failure;  // empty on success
};

/// Ticks `tree` until it leaves Running or the episode budget is spent.
inline bt::NodeStatus tick_to_completion(const skills::Tree& tree, sim::WorldState& w, int& ticks,
                                         const std::function<void(const sim::WorldState&)>& on_step = {}) {
  bt::TickContext<sim::WorldState> ctx;
  ctx.world = &w;
  ctx.on_step = on_step;
  for (;;) {
    ctx.trace.clear();
    const bt::NodeStatus s = bt::tick(tree, ctx);
    ++ctx.tick_index;
    ++ticks;
    if (s != bt::NodeStatus::Running) return s;
    if (w.time >= w.physics.episode_cap || ticks >= w.physics.max_ticks) return bt::NodeStatus::Failure;
  }
}

inline std::string program_line(const ExecutionProgram& p) {
  std::vector<std::string> trig;
  for (const auto& c : p.trigger) trig.push_back(c.str());
  std::vector<std::string> steps;
  for (const auto& s : p.recovery) steps.push_back(s.skill);
  steps.push_back(p.production);
  return join(steps, ">") + (trig.empty() ? "" : " [" + join(trig, " & ") + "]");
}

struct EpisodeSetup {
  const SkillSpec* production = nullptr;
  Grounding production_grounding;
  const std::vector<SkillSpec>* catalog = nullptr;
  SkillBindings bindings;
  PlannerOptions planner;
  int max_dispatches = 2;  // the first dispatch plus one replan after a failed recovery
};

/// Dispatches and executes one episode. A failing recovery step triggers one
/// replan from the current world; a second failure, a failing production
/// skill or planning failure ends the episode unsuccessfully.
inline EpisodeResult run_episode(sim::WorldState w, const EpisodeSetup& setup, const Config& cfg,
                                 sim::EpisodeTrace* trace = nullptr) {
  EpisodeResult res;
  auto bindings_for = [&](const std::string& skill) {
    auto it = setup.bindings.find(skill);
    return it == setup.bindings.end() ? skills::Bindings{} : it->second;
  };
  auto spec_for = [&](const std::string& skill) -> const SkillSpec& {
    for (const auto& s : *setup.catalog)
      if (s.name == skill) return s;
    throw Error(ErrorCode::UnknownBinding, "skill '" + skill + "' is not in the catalog");
  };

  std::string current;
  std::function<void(const sim::WorldState&)> observe;
  if (trace != nullptr) {
    trace->record(w, "start");
    observe = [&](const sim::WorldState& s) { trace->record(s, current); };
  }

  auto run = [&](const skills::GroundedSkill& gs) {
    current = gs.spec.name;
    StepRecord rec{gs.spec.name, bt::NodeStatus::Failure, 0};
    rec.status = tick_to_completion(gs.tree, w, rec.ticks, observe);
    if (trace != nullptr) trace->record(w, current);
    res.steps.push_back(rec);
    return rec.status;
  };

  while (res.dispatches < setup.max_dispatches) {
    ++res.dispatches;
    ExecutionProgram prog;
    try {
      prog = monitor_and_dispatch(*setup.production, setup.production_grounding, w, *setup.catalog, setup.planner);
    } catch (const Error& e) {
      res.failure = e.what();
      break;
    }
    const std::string line = program_line(prog);
    res.plan_log.push_back(line);
    if (trace != nullptr) trace->add_plan_line(line);

    bool recovered = true;
    for (const auto& step : prog.recovery) {
      try {
        auto gs = skills::instantiate(spec_for(step.skill), step.grounding, bindings_for(step.skill), w, cfg);
        gs.variant = step.variant;
        if (run(gs) != bt::NodeStatus::Success) {
          recovered = false;
          res.failure = step.skill + " failed";
        }
      } catch (const Error& e) {
        recovered = false;
        res.failure = step.skill + ": " + e.what();
      }
      if (!recovered) break;
    }
    if (!recovered) continue;

    if (!unmet_preconditions(*setup.production, setup.production_grounding, w).empty()) {
      res.failure = "production preconditions still unmet after recovery";
      continue;
    }
    try {
      auto gs = skills::instantiate(*setup.production, setup.production_grounding,
                                    bindings_for(setup.production->name), w, cfg);
      res.success = run(gs) == bt::NodeStatus::Success;
      res.failure = res.success ? "" : setup.production->name + " failed";
    } catch (const Error& e) {
      res.failure = setup.production->name + ": " + e.what();
    }
    break;
  }
  res.world = std::move(w);
  return res;
}

}  // namespace rbt::plan
