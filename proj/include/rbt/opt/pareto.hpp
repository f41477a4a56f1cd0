#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "rbt/opt/space.hpp"

namespace rbt::opt {

/// a dominates b: no worse in both objectives and better in one.
inline bool dominates(const Objectives& a, const Objectives& b) {
  return a.insertion >= b.insertion && a.force >= b.force && (a.insertion > b.insertion || a.force > b.force);
}

/// Indices of the non-dominated points, ordered by insertion reward
/// (descending), ties in input order.
inline std::vector<std::size_t> pareto_indices(const std::vector<Objectives>& pts) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  // Sweep in order of insertion desc, force desc; a point survives if its
  // force beats every point before it with strictly higher insertion, or
  // ties the best force with equal insertion.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pts[a].insertion != pts[b].insertion) return pts[a].insertion > pts[b].insertion;
    return pts[a].force > pts[b].force;
  });
  std::vector<std::size_t> front;
  double best_force = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  while (i < order.size()) {
    // group of equal insertion values
    std::size_t j = i;
    while (j < order.size() && pts[order[j]].insertion == pts[order[i]].insertion) ++j;
    const double group_best = pts[order[i]].force;
    if (group_best > best_force) {
      for (std::size_t k = i; k < j && pts[order[k]].force == group_best; ++k) front.push_back(order[k]);
      best_force = group_best;
    }
    i = j;
  }
  std::stable_sort(front.begin(), front.end(), [&](std::size_t a, std::size_t b) {
    if (pts[a].insertion != pts[b].insertion) return pts[a].insertion > pts[b].insertion;
    return a < b;
  });
  return front;
}

inline std::vector<EvaluationRecord> pareto_front(const std::vector<EvaluationRecord>& records) {
  std::vector<Objectives> pts;
  pts.reserve(records.size());
  for (const auto& r : records) pts.push_back(r.mean);
  std::vector<EvaluationRecord> out;
  for (auto i : pareto_indices(pts)) out.push_back(records[i]);
  return out;
}

}  // namespace rbt::opt
