#include "innokit/innovation.hpp"

#include <algorithm>
#include <cmath>

namespace innokit::continuous {

namespace {

std::span<const double> history_window(std::span<const double> xs, std::size_t k,
                                       std::size_t order) {
  const std::size_t len = std::min(order, k);
  return xs.subspan(k - len, len);
}

// Identify the sample behind a recovered uniform value. The generalized
// inverse is the decision rule; when a theta draw is available it settles
// values that float rounding pushed onto an atom boundary.
double invert_sample(const ShapingCdf& model, double u, const double* theta) {
  u = std::clamp(u, 0.0, 1.0);
  double x = model.quantile(u);
  if (theta == nullptr || !model.has_atoms()) return x;

  auto mismatch = [&](double candidate) {
    const double mass = model.atom_mass(candidate);
    const double shifted =
        mass > 0.0 ? model.cdf(candidate) - *theta * mass : model.cdf(candidate);
    return std::abs(shifted - u);
  };
  double best = x;
  double best_err = mismatch(x);
  if (best_err > 1e-9) {
    for (const Atom& a : model.atoms()) {
      const double err = mismatch(a.x);
      if (err < best_err) {
        best = a.x;
        best_err = err;
      }
    }
  }
  return best;
}

}  // namespace

FiniteStateModel::FiniteStateModel(std::size_t order, std::vector<double> states,
                                   ShapingCdf initial, std::map<std::string, ShapingCdf> table,
                                   double state_tol)
    : order_(order),
      states_(std::move(states)),
      initial_(std::move(initial)),
      table_(std::move(table)),
      state_tol_(state_tol) {
  if (order_ > 0 && states_.empty())
    throw ValidationError("a history-dependent model needs a state alphabet");
}

std::string FiniteStateModel::key_of(std::span<const std::size_t> state_indices) {
  std::string key;
  for (std::size_t i = 0; i < state_indices.size(); ++i) {
    if (i) key += ',';
    key += std::to_string(state_indices[i]);
  }
  return key;
}

std::size_t FiniteStateModel::state_index(double value) const {
  for (std::size_t s = 0; s < states_.size(); ++s)
    if (std::abs(states_[s] - value) <= state_tol_) return s;
  throw ValidationError("history value " + std::to_string(value) +
                        " matches no model state");
}

ShapingCdf FiniteStateModel::resolve(std::span<const double> history) const {
  if (history.empty() || order_ == 0) return initial_;
  std::vector<std::size_t> indices;
  indices.reserve(history.size());
  for (auto it = history.rbegin(); it != history.rend(); ++it)  // most recent first
    indices.push_back(state_index(*it));
  const std::string key = key_of(indices);
  auto found = table_.find(key);
  if (found == table_.end())
    throw ValidationError("model has no conditional law for history '" + key + "'");
  return found->second;
}

InnovationResult innovate(std::span<const double> xs, const ConditionalModel& model,
                          const ShapingCdf& target, RngSeed seed) {
  if (target.has_atoms())
    throw ValidationError("target law must be continuous for unique recovery");
  UniformSource rng(seed);
  InnovationResult result;
  result.ys.reserve(xs.size());
  result.thetas.reserve(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const ShapingCdf law = model.resolve(history_window(xs, k, model.order()));
    const double theta = rng.next();
    result.thetas.push_back(theta);
    result.used_atoms = result.used_atoms || law.has_atoms();
    result.ys.push_back(target.quantile(to_uniform(xs[k], law, theta)));
  }
  return result;
}

std::vector<double> recover(std::span<const double> ys, const ConditionalModel& model,
                            const ShapingCdf& target, std::span<const double> thetas) {
  if (!thetas.empty() && thetas.size() != ys.size())
    throw ValidationError("theta stream length does not match the sample count");
  std::vector<double> xs;
  xs.reserve(ys.size());
  for (std::size_t k = 0; k < ys.size(); ++k) {
    const ShapingCdf law =
        model.resolve(history_window(std::span<const double>(xs), k, model.order()));
    const double u = target.cdf(ys[k]);
    const double* theta = thetas.empty() ? nullptr : &thetas[k];
    xs.push_back(invert_sample(law, u, theta));
  }
  return xs;
}

}  // namespace innokit::continuous
