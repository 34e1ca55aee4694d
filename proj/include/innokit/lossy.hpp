#pragma once

#include <array>
#include <vector>

#include "innokit/common.hpp"

namespace innokit::lossy {

// Maximizing channel between binary marginals P(X=0)=alpha and P(Y=0)=beta.
// `cond[x][y]` is P(Y=y | X=x). The closed form is derived for parameters at
// or below 1/2; inputs beyond that are handled by relabeling symbols
// internally, and the flags record which side was flipped.
struct BinaryChannel {
  double mi = 0.0;  // bits
  std::array<std::array<double, 2>, 2> cond{{{1.0, 0.0}, {0.0, 1.0}}};
  bool x_relabeled = false;
  bool y_relabeled = false;
};

// Maximal mutual information between binary variables with the given
// marginals, together with a channel achieving it.
BinaryChannel max_mi_binary(double alpha, double beta);

// Conditional description of a binary Markov source: alphas[j] = P(X_k = 0 |
// history = j) and gammas[j] = P(history = j). A first-order chain has two
// entries; an r-order chain has 2^r.
struct MarkovSpec {
  std::vector<double> alphas;
  std::vector<double> gammas;

  MarkovSpec(std::vector<double> alphas_in, std::vector<double> gammas_in,
             double tol = kDefaultTol);

  // Same spec with (alpha, gamma) pairs sorted by ascending alpha.
  MarkovSpec canonical() const;

  std::size_t size() const { return alphas.size(); }
};

struct BetaChoice {
  double beta = 0.0;
  double mi = 0.0;  // bits, value of the history-averaged objective at beta
};

// History-averaged maximal mutual information sum_j gamma_j * Imax(alpha_j, beta).
double objective(const MarkovSpec& spec, double beta);

// Best memoryless output parameter. The objective is piecewise smooth with
// its maximum on one of the conditional parameters, so only beta in
// {alpha_j} is evaluated; ties go to the smaller index.
BetaChoice optimal_beta(const MarkovSpec& spec);

// First-order chain conveniences: alpha1 = P(0|0), alpha2 = P(0|1),
// gamma = P(previous symbol = 0).
double markov1_objective(double alpha1, double alpha2, double gamma, double beta);
BetaChoice markov1_optimal_beta(double alpha1, double alpha2, double gamma);

// Stationary probability of symbol 0: alpha2 / (1 - alpha1 + alpha2).
// Rejects the absorbing alpha1=1, alpha2=0 configuration.
double stationary_weight(double alpha1, double alpha2);

// At stationarity the best beta is the member of
// {alpha1, alpha2, 1-alpha1, 1-alpha2} closest to 1/2 (ties to smaller index).
double stationary_optimal_beta(double alpha1, double alpha2);

// Weight threshold at which beta = alpha1 and beta = alpha2 tie; weights
// strictly below it prefer alpha2. Requires 0 < alpha1 < alpha2 < 1/2.
double decision_threshold(double alpha1, double alpha2);

// True when the stationary weight falls strictly below decision_threshold,
// i.e. the stationary chain always picks the larger parameter.
bool stationary_below_threshold(double alpha1, double alpha2);

}  // namespace innokit::lossy
