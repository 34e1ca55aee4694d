#include "innokit/lossy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "innokit/pmf.hpp"

namespace innokit::lossy {

namespace {

void check_prob(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ValidationError(std::string(name) + " must lie in [0, 1]");
}

// Channel for canonical parameters a <= 1/2, b <= 1/2. For b <= a the zero
// symbol of Y draws only from X=0; for b >= a the X=0 row maps to Y=0
// entirely. Both reduce to the identity at b == a.
BinaryChannel canonical_channel(double a, double b) {
  BinaryChannel ch;
  if (b == a) {
    ch.mi = binary_entropy(a);
    ch.cond = {{{1.0, 0.0}, {0.0, 1.0}}};
  } else if (b < a) {
    const double q = b / a;  // a > 0 here since b >= 0 and b < a
    ch.mi = binary_entropy(b) - a * binary_entropy(q);
    ch.cond = {{{q, 1.0 - q}, {0.0, 1.0}}};
  } else {
    const double q = (b - a) / (1.0 - a);  // a <= 1/2 keeps the denominator positive
    ch.mi = binary_entropy(b) - (1.0 - a) * binary_entropy(q);
    ch.cond = {{{1.0, 0.0}, {q, 1.0 - q}}};
  }
  return ch;
}

}  // namespace

BinaryChannel max_mi_binary(double alpha, double beta) {
  check_prob(alpha, "alpha");
  check_prob(beta, "beta");
  const bool flip_x = alpha > 0.5;
  const bool flip_y = beta > 0.5;
  const double a = flip_x ? 1.0 - alpha : alpha;
  const double b = flip_y ? 1.0 - beta : beta;

  BinaryChannel ch = canonical_channel(a, b);
  ch.x_relabeled = flip_x;
  ch.y_relabeled = flip_y;
  if (flip_x) std::swap(ch.cond[0], ch.cond[1]);
  if (flip_y) {
    std::swap(ch.cond[0][0], ch.cond[0][1]);
    std::swap(ch.cond[1][0], ch.cond[1][1]);
  }
  return ch;
}

MarkovSpec::MarkovSpec(std::vector<double> alphas_in, std::vector<double> gammas_in,
                       double tol)
    : alphas(std::move(alphas_in)), gammas(std::move(gammas_in)) {
  if (alphas.empty() || alphas.size() != gammas.size())
    throw ValidationError("markov spec needs matching nonempty alpha and gamma lists");
  for (double a : alphas) check_prob(a, "alpha");
  double sum = 0.0;
  for (double g : gammas) {
    check_prob(g, "gamma");
    sum += g;
  }
  if (std::abs(sum - 1.0) > tol)
    throw ValidationError("history weights sum to " + std::to_string(sum));
}

MarkovSpec MarkovSpec::canonical() const {
  std::vector<std::size_t> order(alphas.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return alphas[l] < alphas[r]; });
  std::vector<double> a, g;
  a.reserve(order.size());
  g.reserve(order.size());
  for (std::size_t idx : order) {
    a.push_back(alphas[idx]);
    g.push_back(gammas[idx]);
  }
  return MarkovSpec(std::move(a), std::move(g));
}

double objective(const MarkovSpec& spec, double beta) {
  check_prob(beta, "beta");
  double value = 0.0;
  for (std::size_t j = 0; j < spec.size(); ++j)
    if (spec.gammas[j] > 0.0) value += spec.gammas[j] * max_mi_binary(spec.alphas[j], beta).mi;
  return value;
}

BetaChoice optimal_beta(const MarkovSpec& spec_in) {
  if (spec_in.size() < 2)
    throw ValidationError("optimal_beta needs at least two history states");
  const MarkovSpec spec = spec_in.canonical();
  BetaChoice best{spec.alphas[0], objective(spec, spec.alphas[0])};
  for (std::size_t j = 1; j < spec.size(); ++j) {
    const double value = objective(spec, spec.alphas[j]);
    if (value > best.mi) best = {spec.alphas[j], value};
  }
  return best;
}

double markov1_objective(double alpha1, double alpha2, double gamma, double beta) {
  return objective(MarkovSpec({alpha1, alpha2}, {gamma, 1.0 - gamma}), beta);
}

BetaChoice markov1_optimal_beta(double alpha1, double alpha2, double gamma) {
  return optimal_beta(MarkovSpec({alpha1, alpha2}, {gamma, 1.0 - gamma}));
}

double stationary_weight(double alpha1, double alpha2) {
  check_prob(alpha1, "alpha1");
  check_prob(alpha2, "alpha2");
  const double denom = 1.0 - alpha1 + alpha2;
  if (denom <= kDefaultTol)
    throw ValidationError("chain with absorbing states has no unique stationary law");
  return alpha2 / denom;
}

double stationary_optimal_beta(double alpha1, double alpha2) {
  const double gamma = stationary_weight(alpha1, alpha2);  // also validates the chain
  (void)gamma;
  const double candidates[4] = {alpha1, alpha2, 1.0 - alpha1, 1.0 - alpha2};
  double best = candidates[0];
  for (double c : candidates)
    if (std::abs(0.5 - c) < std::abs(0.5 - best)) best = c;
  return best;
}

double decision_threshold(double alpha1, double alpha2) {
  if (!(0.0 < alpha1 && alpha1 < alpha2 && alpha2 < 0.5))
    throw ValidationError("decision_threshold requires 0 < alpha1 < alpha2 < 1/2");
  const double cross = alpha2 * binary_entropy(alpha1 / alpha2);
  const double mixed = (1.0 - alpha1) * binary_entropy((alpha2 - alpha1) / (1.0 - alpha1));
  return (binary_entropy(alpha2) - binary_entropy(alpha1) + cross) / (cross + mixed);
}

bool stationary_below_threshold(double alpha1, double alpha2) {
  return stationary_weight(alpha1, alpha2) < decision_threshold(alpha1, alpha2);
}

}  // namespace innokit::lossy
