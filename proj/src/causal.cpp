#include "innokit/causal.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "innokit/pmf.hpp"

namespace innokit::causal {

namespace {

Pmf axis_marginal(const ContingencyTable& table, GivenAxis axis) {
  const double total = static_cast<double>(table.total());
  std::vector<double> masses;
  if (axis == GivenAxis::Rows) {
    for (const auto& row : table.counts) {
      std::int64_t s = 0;
      for (std::int64_t c : row) s += c;
      masses.push_back(static_cast<double>(s) / total);
    }
  } else {
    masses.assign(table.col_labels.size(), 0.0);
    for (const auto& row : table.counts)
      for (std::size_t j = 0; j < row.size(); ++j)
        masses[j] += static_cast<double>(row[j]) / total;
  }
  return Pmf(std::move(masses));
}

bool conditionals_identical(const mec::MarginalSet& set, double tol) {
  const auto& sources = set.sources();
  for (std::size_t i = 1; i < sources.size(); ++i)
    for (std::size_t a = 0; a < set.cardinality(); ++a)
      if (std::abs(sources[i][a] - sources[0][a]) > tol) return false;
  return true;
}

}  // namespace

std::int64_t ContingencyTable::total() const {
  std::int64_t t = 0;
  for (const auto& row : counts)
    for (std::int64_t c : row) t += c;
  return t;
}

ContingencyTable ContingencyTable::transposed() const {
  ContingencyTable out;
  out.row_labels = col_labels;
  out.col_labels = row_labels;
  out.counts.assign(col_labels.size(), std::vector<std::int64_t>(row_labels.size(), 0));
  for (std::size_t r = 0; r < counts.size(); ++r)
    for (std::size_t c = 0; c < counts[r].size(); ++c) out.counts[c][r] = counts[r][c];
  return out;
}

ContingencyTable estimate_joint(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  if (pairs.empty()) throw ValidationError("no observation pairs given");
  ContingencyTable table;
  std::map<std::string, std::size_t> row_index, col_index;
  for (const auto& [x, y] : pairs) {
    auto [rit, rnew] = row_index.try_emplace(x, table.row_labels.size());
    if (rnew) {
      table.row_labels.push_back(x);
      table.counts.emplace_back(table.col_labels.size(), 0);
    }
    auto [cit, cnew] = col_index.try_emplace(y, table.col_labels.size());
    if (cnew) {
      table.col_labels.push_back(y);
      for (auto& row : table.counts) row.push_back(0);
    }
    ++table.counts[rit->second][cit->second];
  }
  return table;
}

mec::MarginalSet conditionals(const ContingencyTable& table, GivenAxis given,
                              bool add_one_smoothing, std::vector<std::string>* dropped) {
  ContingencyTable flipped;
  const ContingencyTable* view = &table;
  if (given == GivenAxis::Cols) {
    flipped = table.transposed();
    view = &flipped;
  }
  if (view->total() <= 0) throw ValidationError("contingency table has no observations");

  std::vector<Pmf> sources;
  for (std::size_t r = 0; r < view->counts.size(); ++r) {
    std::vector<double> row(view->counts[r].size());
    double row_total = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) {
      row[c] = static_cast<double>(view->counts[r][c]) + (add_one_smoothing ? 1.0 : 0.0);
      row_total += row[c];
    }
    if (row_total <= 0.0) {
      if (dropped) dropped->push_back(view->row_labels[r]);
      continue;
    }
    for (double& v : row) v /= row_total;
    sources.emplace_back(std::move(row));
  }
  if (sources.empty()) throw ValidationError("every conditioning value has zero count");
  return mec::MarginalSet(std::move(sources));
}

double innovation_entropy(const mec::MarginalSet& set, Method method,
                          std::uint64_t work_limit, double tol) {
  if (set.cardinality() == 1) return 0.0;  // every conditional is the same point mass
  const std::size_t b = mec::min_output_cardinality(set.cardinality(), set.source_count());
  switch (method) {
    case Method::Greedy:
      return mec::greedy_mec(set, tol).entropy_bits;
    case Method::Exact:
      return mec::exhaustive_mec(set, b, work_limit, tol).entropy_bits;
    case Method::Auto:
      if (set.source_count() * set.cardinality() <= 12) {
        try {
          return mec::exhaustive_mec(set, b, work_limit, tol).entropy_bits;
        } catch (const WorkLimitError&) {
          // fall through to greedy
        }
      }
      return mec::greedy_mec(set, tol).entropy_bits;
  }
  throw ValidationError("unknown coupling method");
}

CausalVerdict infer_direction(const ContingencyTable& table, Method method,
                              Statistic statistic, bool add_one_smoothing,
                              double decision_tol, std::uint64_t work_limit, double tol) {
  CausalVerdict verdict;
  verdict.statistic = statistic;

  std::vector<std::string> dropped_rows, dropped_cols;
  const mec::MarginalSet forward =
      conditionals(table, GivenAxis::Rows, add_one_smoothing, &dropped_rows);
  const mec::MarginalSet backward =
      conditionals(table, GivenAxis::Cols, add_one_smoothing, &dropped_cols);
  for (const auto& label : dropped_rows)
    verdict.warnings.push_back("dropped zero-count row '" + label + "'");
  for (const auto& label : dropped_cols)
    verdict.warnings.push_back("dropped zero-count column '" + label + "'");

  verdict.h_e_forward = innovation_entropy(forward, method, work_limit, tol);
  verdict.h_e_backward = innovation_entropy(backward, method, work_limit, tol);

  double stat_fwd = verdict.h_e_forward;
  double stat_bwd = verdict.h_e_backward;
  if (statistic == Statistic::EntropyPlusCause) {
    stat_fwd += entropy(axis_marginal(table, GivenAxis::Rows));
    stat_bwd += entropy(axis_marginal(table, GivenAxis::Cols));
  }
  verdict.margin = std::abs(stat_fwd - stat_bwd);
  if (verdict.margin <= decision_tol)
    verdict.direction = Direction::Undecided;
  else
    verdict.direction = stat_fwd < stat_bwd ? Direction::XtoY : Direction::YtoX;

  if (conditionals_identical(forward, tol) || conditionals_identical(backward, tol))
    verdict.warnings.push_back(
        "variables appear independent; innovation entropies reduce to plain marginals");
  return verdict;
}

std::string to_string(Direction d) {
  switch (d) {
    case Direction::XtoY: return "X->Y";
    case Direction::YtoX: return "Y->X";
    case Direction::Undecided: return "undecided";
  }
  return "undecided";
}

std::string to_string(Statistic s) {
  return s == Statistic::EntropyOfE ? "entropy_of_e" : "entropy_plus_cause";
}

}  // namespace innokit::causal
