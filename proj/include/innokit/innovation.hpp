#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "innokit/common.hpp"
#include "innokit/shaping_cdf.hpp"

namespace innokit::continuous {

// Conditional law of the next sample given the recent past. `history` holds
// the previous values in chronological order, already truncated to at most
// `order()` entries; it is empty for the first sample.
class ConditionalModel {
 public:
  virtual ~ConditionalModel() = default;
  virtual std::size_t order() const = 0;
  virtual ShapingCdf resolve(std::span<const double> history) const = 0;
};

// Table-backed model over a finite state alphabet. Histories are matched to
// states within `state_tol`, keyed by comma-joined state indices with the
// most recent value first ("" keys the law of the first sample).
class FiniteStateModel final : public ConditionalModel {
 public:
  FiniteStateModel(std::size_t order, std::vector<double> states, ShapingCdf initial,
                   std::map<std::string, ShapingCdf> table,
                   double state_tol = kDefaultTol);

  std::size_t order() const override { return order_; }
  ShapingCdf resolve(std::span<const double> history) const override;

  static std::string key_of(std::span<const std::size_t> state_indices);

 private:
  std::size_t state_index(double value) const;

  std::size_t order_;
  std::vector<double> states_;
  ShapingCdf initial_;
  std::map<std::string, ShapingCdf> table_;
  double state_tol_;
};

// Adapter for models computed on the fly (autoregressive laws in tests, ...).
class CallbackModel final : public ConditionalModel {
 public:
  using Fn = std::function<ShapingCdf(std::span<const double>)>;
  CallbackModel(std::size_t order, Fn fn) : order_(order), fn_(std::move(fn)) {}
  std::size_t order() const override { return order_; }
  ShapingCdf resolve(std::span<const double> history) const override { return fn_(history); }

 private:
  std::size_t order_;
  Fn fn_;
};

struct InnovationResult {
  std::vector<double> ys;
  std::vector<double> thetas;  // one draw per step
  bool used_atoms = false;     // true when any resolved law carried atoms
};

// Sequentially shape xs into an i.i.d. sequence with the target law:
// y_k = target_quantile( shifted-cdf of x_k given its history ). The theta
// stream is returned so atom realizations stay recoverable. The target law
// must be continuous (atom-free).
InnovationResult innovate(std::span<const double> xs, const ConditionalModel& model,
                          const ShapingCdf& target, RngSeed seed);

// Exact inverse of innovate given the same model, target and theta stream.
std::vector<double> recover(std::span<const double> ys, const ConditionalModel& model,
                            const ShapingCdf& target,
                            std::span<const double> thetas = {});

}  // namespace innokit::continuous
