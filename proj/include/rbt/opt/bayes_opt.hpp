#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rbt/opt/gp.hpp"
#include "rbt/opt/qmc.hpp"
#include "rbt/opt/space.hpp"
#include "rbt/rng.hpp"

namespace rbt::opt {

/// Black-box optimizer over a ParamSpace. propose() sees the full history.
class Optimizer {
 public:
  virtual ~Optimizer() = default;
  virtual std::vector<double> propose(const std::vector<EvaluationRecord>& history) = 0;
  virtual std::string kind() const = 0;
};

class RandomSearch final : public Optimizer {
 public:
  RandomSearch(ParamSpace space, std::uint64_t seed) : space_(std::move(space)), rng_(seed) {}

  std::vector<double> propose(const std::vector<EvaluationRecord>&) override {
    std::vector<double> u(space_.dim());
    for (auto& v : u) v = rng_.uniform();
    return space_.from_unit(u);
  }
  std::string kind() const override { return "random"; }

 private:
  ParamSpace space_;
  Rng rng_;
};

struct BoOptions {
  int initial_points = 10;
  int candidates = 2048;
  double xi = 0.01;
  double max_insertion = 175.0;
  GaussianProcess::Options gp;
};

/// Multi-objective BO by random scalarization: every proposal draws a weight
/// on the 1-simplex, fits a GP to the weighted objectives and maximizes
/// expected improvement over shifted Halton candidates.
class BayesOpt final : public Optimizer {
 public:
  BayesOpt(ParamSpace space, std::uint64_t seed, BoOptions opt = {})
      : space_(std::move(space)), opt_(std::move(opt)), rng_(seed) {
    shift_.resize(space_.dim());
    for (auto& s : shift_) s = rng_.uniform();
  }

  std::vector<double> propose(const std::vector<EvaluationRecord>& history) override {
    const auto n = history.size();
    if (static_cast<int>(n) < opt_.initial_points) return space_.from_unit(halton(n + 1, space_.dim(), shift_));
    const double w = rng_.uniform();
    last_weight_ = w;
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (const auto& r : history) {
      x.push_back(space_.to_unit(r.theta));
      y.push_back(scalarize(r.mean, w, opt_.max_insertion));
    }
    return propose_scalar(x, y);
  }

  /// Single-objective step on unit-cube data; exposed for benchmarking.
  std::vector<double> propose_scalar(const std::vector<std::vector<double>>& x, const std::vector<double>& y) {
    GaussianProcess gp(opt_.gp);
    try {
      gp.fit(x, y);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateHistory) throw;
      ++fallbacks_;
      std::vector<double> u(space_.dim());
      for (auto& v : u) v = rng_.uniform();
      return space_.from_unit(u);
    }
    std::vector<double> cshift(space_.dim());
    for (auto& s : cshift) s = rng_.uniform();
    const double best = gp.best_standardized();
    double best_ei = -1.0;
    std::vector<double> arg;
    for (int i = 0; i < opt_.candidates; ++i) {
      auto u = halton(static_cast<std::uint64_t>(i) + 1, space_.dim(), cshift);
      const double ei = expected_improvement(gp.predict_standardized(u), best, opt_.xi);
      if (ei > best_ei) {
        best_ei = ei;
        arg = std::move(u);
      }
    }
    return space_.from_unit(arg);
  }

  std::string kind() const override { return "bo"; }
  int fallbacks() const { return fallbacks_; }
  double last_weight() const { return last_weight_; }

 private:
  ParamSpace space_;
  BoOptions opt_;
  Rng rng_;
  std::vector<double> shift_;
  int fallbacks_ = 0;
  double last_weight_ = 0.5;
};

inline std::unique_ptr<Optimizer> make_optimizer(const std::string& kind, const ParamSpace& space, std::uint64_t seed) {
  if (kind == "bo") return std::make_unique<BayesOpt>(space, seed);
  if (kind == "random") return std::make_unique<RandomSearch>(space, seed);
  throw Error(ErrorCode::InvalidDescriptor, "unknown optimizer '" + kind + "'");
}

}  // namespace rbt::opt
