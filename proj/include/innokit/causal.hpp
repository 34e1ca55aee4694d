#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "innokit/common.hpp"
#include "innokit/mec.hpp"

namespace innokit::causal {

// Cross-tabulated paired observations. Rows index the first variable, columns
// the second, labels ordered by first appearance in the data.
struct ContingencyTable {
  std::vector<std::vector<std::int64_t>> counts;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;

  std::int64_t total() const;
  ContingencyTable transposed() const;
};

ContingencyTable estimate_joint(
    const std::vector<std::pair<std::string, std::string>>& pairs);

enum class GivenAxis { Rows, Cols };

// One pmf per conditioning value: P(col | row = i) for GivenAxis::Rows,
// P(row | col = j) for GivenAxis::Cols. Conditioning values with zero count
// are dropped (their labels reported through `dropped` when non-null) unless
// add-one smoothing is requested.
mec::MarginalSet conditionals(const ContingencyTable& table, GivenAxis given,
                              bool add_one_smoothing = false,
                              std::vector<std::string>* dropped = nullptr);

enum class Method { Auto, Greedy, Exact };
enum class Statistic { EntropyOfE, EntropyPlusCause };
enum class Direction { XtoY, YtoX, Undecided };

// Entropy in bits of the innovation variable implied by the conditional set:
// the output entropy of its minimum-entropy coupling. Greedy upper-bounds the
// exact value; Auto picks Exact for R*A <= 12 and falls back to Greedy when
// the oracle hits its work limit.
double innovation_entropy(const mec::MarginalSet& set, Method method = Method::Auto,
                          std::uint64_t work_limit = kDefaultWorkLimit,
                          double tol = kDefaultTol);

struct CausalVerdict {
  Direction direction = Direction::Undecided;
  double h_e_forward = 0.0;   // bits, innovation entropy for X -> Y
  double h_e_backward = 0.0;  // bits, innovation entropy for Y -> X
  Statistic statistic = Statistic::EntropyOfE;
  double margin = 0.0;        // bits, |forward statistic - backward statistic|
  std::vector<std::string> warnings;
};

// Compare the innovation entropies of both factorizations; the direction with
// the smaller statistic wins, ties within `decision_tol` are undecided.
CausalVerdict infer_direction(const ContingencyTable& table,
                              Method method = Method::Auto,
                              Statistic statistic = Statistic::EntropyOfE,
                              bool add_one_smoothing = false,
                              double decision_tol = 1e-6,
                              std::uint64_t work_limit = kDefaultWorkLimit,
                              double tol = kDefaultTol);

std::string to_string(Direction d);
std::string to_string(Statistic s);

}  // namespace innokit::causal
