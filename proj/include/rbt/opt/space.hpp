#pragma once

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "rbt/error.hpp"

namespace rbt::opt {

struct Dimension {
  std::string name;  // "<skill>.<param>"
  double lo = 0.0;
  double hi = 1.0;

  friend bool operator==(const Dimension&, const Dimension&) = default;
};

/// Box of learned parameters. Points are stored in natural units; the
/// optimizers work in the unit cube.
class ParamSpace {
 public:
  ParamSpace() = default;
  explicit ParamSpace(std::vector<Dimension> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw Error(ErrorCode::InvalidDescriptor, "parameter space needs at least one dimension");
    std::set<std::string> names;
    for (const auto& d : dims_) {
      if (!std::isfinite(d.lo) || !std::isfinite(d.hi) || !(d.lo < d.hi))
        throw Error(ErrorCode::InvalidDescriptor, d.name + ": need finite lo < hi");
      if (!names.insert(d.name).second) throw Error(ErrorCode::InvalidDescriptor, "duplicate dimension " + d.name);
    }
  }

  std::size_t dim() const { return dims_.size(); }
  const std::vector<Dimension>& dims() const { return dims_; }
  const Dimension& operator[](std::size_t i) const { return dims_[i]; }

  std::vector<double> from_unit(const std::vector<double>& u) const {
    std::vector<double> x(dims_.size());
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      const double t = std::clamp(u[i], 0.0, 1.0);
      x[i] = std::clamp(dims_[i].lo + t * (dims_[i].hi - dims_[i].lo), dims_[i].lo, dims_[i].hi);
    }
    return x;
  }

  std::vector<double> to_unit(const std::vector<double>& x) const {
    std::vector<double> u(dims_.size());
    for (std::size_t i = 0; i < dims_.size(); ++i) u[i] = (x[i] - dims_[i].lo) / (dims_[i].hi - dims_[i].lo);
    return u;
  }

  bool contains(const std::vector<double>& x) const {
    if (x.size() != dims_.size()) return false;
    for (std::size_t i = 0; i < dims_.size(); ++i)
      if (!(x[i] >= dims_[i].lo && x[i] <= dims_[i].hi)) return false;
    return true;
  }

  friend bool operator==(const ParamSpace&, const ParamSpace&) = default;

 private:
  std::vector<Dimension> dims_;
};

struct Objectives {
  double insertion = 0.0;  // higher is better
  double force = 0.0;      // higher is better, in [-1, 0]

  friend bool operator==(const Objectives&, const Objectives&) = default;
};

struct EvalOutcome {
  std::uint64_t seed = 0;
  bool success = false;
  Objectives rewards;
  double min_lateral_error = 0.0;
  double force_integral = 0.0;
  int start_pose = -1;
  double offset_x = 0.0;  // peg axis minus true hole center when the spiral starts
  double offset_y = 0.0;
  std::string program;  // dispatched skill sequence
  std::string failure;

  friend bool operator==(const EvalOutcome&, const EvalOutcome&) = default;
};

struct EvaluationRecord {
  int iteration = 0;
  std::uint64_t iteration_seed = 0;
  std::vector<double> theta;
  std::vector<EvalOutcome> evals;
  Objectives mean;
  int success_count = 0;

  bool policy_successful(int needed = 3) const { return success_count >= needed; }
  friend bool operator==(const EvaluationRecord&, const EvaluationRecord&) = default;
};

/// Weighted sum used by random scalarization; both terms are mapped to [0, 1].
inline double scalarize(const Objectives& o, double w_insertion, double max_insertion = 175.0) {
  return w_insertion * (o.insertion / max_insertion) + (1.0 - w_insertion) * (o.force + 1.0);
}

}  // namespace rbt::opt
