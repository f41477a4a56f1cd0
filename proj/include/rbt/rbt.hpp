#pragma once

#include "rbt/bt/node.hpp"
#include "rbt/bt/serialize.hpp"
#include "rbt/config.hpp"
#include "rbt/error.hpp"
#include "rbt/harness/plot.hpp"
#include "rbt/harness/run_io.hpp"
#include "rbt/harness/scenario.hpp"
#include "rbt/opt/bayes_opt.hpp"
#include "rbt/opt/evaluate.hpp"
#include "rbt/opt/experiment.hpp"
#include "rbt/opt/pareto.hpp"
#include "rbt/plan/execute.hpp"
#include "rbt/plan/planner.hpp"
#include "rbt/sim/insertion.hpp"
#include "rbt/sim/motion.hpp"
#include "rbt/sim/randomize.hpp"
#include "rbt/sim/trace.hpp"
#include "rbt/skills/skills.hpp"
#include "rbt/version.hpp"
