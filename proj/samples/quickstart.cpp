// Learn insertion parameters for scenario 2 (light block on the hole) with a
// short optimizer run and print the resulting Pareto front.

#include <iomanip>
#include <iostream>

#include "rbt/rbt.hpp"

int main() {
  using namespace rbt;

  const auto sc = harness::load_scenario(2);
  const auto space = sc.space();

  // One randomized episode with the default parameters.
  const auto first = opt::evaluate_episode(sc.default_theta(), sc, /*seed=*/1);
  std::cout << "default policy: " << (first.success ? "success" : "failure") << ", program " << first.program
            << "\n";

  opt::ExperimentConfig cfg;
  cfg.iterations = 15;
  cfg.seed = 3;
  const auto rep = opt::run_repetition(sc, cfg, 0);

  std::cout << std::setprecision(4);
  std::cout << "front after " << rep.history.size() << " iterations:\n";
  for (const auto& r : rep.front) {
    std::cout << "  iter " << r.iteration << "  successes " << r.success_count << "/5  insertion "
              << r.mean.insertion << "  force " << r.mean.force << "  theta";
    for (std::size_t i = 0; i < space.dim(); ++i) std::cout << " " << space[i].name << "=" << r.theta[i];
    std::cout << "\n";
  }
  return rep.found_successful_policy ? 0 : 1;
}
