#include "innokit/ikea.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace innokit::ikea {

namespace {

// Residues below the square of the load tolerance count as an exact fit.
constexpr double kResidueFloor = 1e-18;

struct Piece {
  std::size_t parent;  // index into the coupling's enumeration-order symbols
  std::size_t column;
  double mass;
};

struct Assignment {
  double residue = std::numeric_limits<double>::infinity();
  std::vector<Piece> pieces;
};

double clamp_residue(double r) { return r < kResidueFloor ? 0.0 : r; }

// Exact assignment search for one coupling: every symbol picks a nonempty
// column set (splitting across |set|-1 extra shelves), constrained to stay a
// forest over columns. Cycles never help: shifting mass around a cycle leaves
// every column load unchanged, so an optimal solution exists on a forest, and
// on forests the equality-constrained least squares below is nonsingular.
class AssignmentSearch {
 public:
  AssignmentSearch(const std::vector<double>& masses, std::size_t columns,
                   std::size_t split_budget, std::uint64_t work_limit)
      : masses_(masses),
        columns_(columns),
        budget_(split_budget),
        work_limit_(work_limit),
        parent_(columns),
        column_sets_(masses.size(), 0u) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    base_.assign(columns_, 0.0);
    target_ = 1.0 / static_cast<double>(columns_);
  }

  Assignment run() {
    descend(0);
    return std::move(best_);
  }

 private:
  std::size_t find_root(std::vector<std::size_t>& parent, std::size_t v) const {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }

  void descend(std::size_t symbol) {
    if (best_.residue == 0.0) return;
    if (symbol == masses_.size()) {
      evaluate_leaf();
      return;
    }
    const std::size_t max_size = std::min(columns_, budget_ + 1);
    for (std::uint32_t mask = 1; mask < (1u << columns_); ++mask) {
      if (++work_ > work_limit_)
        throw WorkLimitError("partition search exceeded work limit of " +
                             std::to_string(work_limit_));
      const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
      if (size > max_size) continue;

      // forest check: the chosen columns must lie in distinct components
      auto saved_parent = parent_;
      bool acyclic = true;
      std::size_t first_root = columns_;
      for (std::size_t l = 0; l < columns_ && acyclic; ++l) {
        if (!(mask & (1u << l))) continue;
        const std::size_t root = find_root(parent_, l);
        if (first_root == columns_) {
          first_root = root;
        } else if (root == first_root) {
          acyclic = false;
        } else {
          parent_[root] = first_root;
        }
      }
      if (acyclic) {
        column_sets_[symbol] = mask;
        budget_ -= size - 1;
        if (size == 1)
          base_[static_cast<std::size_t>(__builtin_ctz(mask))] += masses_[symbol];
        descend(symbol + 1);
        if (size == 1)
          base_[static_cast<std::size_t>(__builtin_ctz(mask))] -= masses_[symbol];
        budget_ += size - 1;
      }
      parent_ = std::move(saved_parent);
    }
  }

  void evaluate_leaf() {
    std::vector<std::pair<std::size_t, std::size_t>> vars;  // (symbol, column)
    std::vector<std::size_t> split_symbols;
    for (std::size_t b = 0; b < masses_.size(); ++b) {
      const std::uint32_t mask = column_sets_[b];
      if (__builtin_popcount(mask) < 2) continue;
      split_symbols.push_back(b);
      for (std::size_t l = 0; l < columns_; ++l)
        if (mask & (1u << l)) vars.emplace_back(b, l);
    }

    double residue = 0.0;
    std::vector<Piece> pieces;
    if (vars.empty()) {
      for (std::size_t l = 0; l < columns_; ++l) {
        const double d = base_[l] - target_;
        residue += d * d;
      }
      residue = clamp_residue(residue);
      if (residue >= best_.residue) return;
      for (std::size_t b = 0; b < masses_.size(); ++b)
        pieces.push_back({b, static_cast<std::size_t>(__builtin_ctz(column_sets_[b])),
                          masses_[b]});
      best_ = {residue, std::move(pieces)};
      return;
    }

    // minimize sum_l (base_l + sum_{vars in l} f - target)^2
    // s.t. per split symbol, its fractions sum to the symbol mass
    const auto n = static_cast<Eigen::Index>(vars.size());
    const auto c = static_cast<Eigen::Index>(split_symbols.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + c, n + c);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + c);
    for (Eigen::Index u = 0; u < n; ++u) {
      for (Eigen::Index v = 0; v < n; ++v)
        if (vars[static_cast<std::size_t>(u)].second == vars[static_cast<std::size_t>(v)].second)
          kkt(u, v) = 2.0;
      rhs[u] = 2.0 * (target_ - base_[vars[static_cast<std::size_t>(u)].second]);
    }
    for (Eigen::Index s = 0; s < c; ++s) {
      const std::size_t b = split_symbols[static_cast<std::size_t>(s)];
      for (Eigen::Index u = 0; u < n; ++u)
        if (vars[static_cast<std::size_t>(u)].first == b) {
          kkt(n + s, u) = 1.0;
          kkt(u, n + s) = 1.0;
        }
      rhs[n + s] = masses_[b];
    }
    Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
    if ((kkt * sol - rhs).cwiseAbs().maxCoeff() > 1e-7) return;

    std::vector<double> loads = base_;
    for (Eigen::Index u = 0; u < n; ++u) {
      const double f = sol[u];
      if (f < -kDefaultTol) return;  // optimum with this support appears without the edge
      loads[vars[static_cast<std::size_t>(u)].second] += f;
    }
    for (std::size_t l = 0; l < columns_; ++l) {
      const double d = loads[l] - target_;
      residue += d * d;
    }
    residue = clamp_residue(residue);
    if (residue >= best_.residue) return;

    std::size_t var_index = 0;
    for (std::size_t b = 0; b < masses_.size(); ++b) {
      const std::uint32_t mask = column_sets_[b];
      if (__builtin_popcount(mask) < 2) {
        pieces.push_back({b, static_cast<std::size_t>(__builtin_ctz(mask)), masses_[b]});
        continue;
      }
      for (std::size_t l = 0; l < columns_; ++l)
        if (mask & (1u << l)) {
          const double f = std::max(sol[static_cast<Eigen::Index>(var_index)], 0.0);
          ++var_index;
          if (f > kDefaultTol) pieces.push_back({b, l, f});
        }
    }
    best_ = {residue, std::move(pieces)};
  }

  const std::vector<double>& masses_;
  std::size_t columns_;
  std::size_t budget_;
  std::uint64_t work_limit_;
  std::uint64_t work_ = 0;
  double target_ = 0.0;

  std::vector<std::size_t> parent_;       // union-find over columns
  std::vector<std::uint32_t> column_sets_;  // per symbol, bitmask of columns
  std::vector<double> base_;                // loads from unsplit symbols
  Assignment best_;
};

// First-fit-decreasing with split repair, for shelf counts past the exact
// search range: place symbols into the least loaded column, then spend the
// split budget shaving the most loaded column into the least loaded one.
Assignment ffd_assignment(const std::vector<double>& masses, std::size_t columns,
                          std::size_t split_budget) {
  const double target = 1.0 / static_cast<double>(columns);
  std::vector<std::size_t> order(masses.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return masses[l] > masses[r]; });

  std::vector<double> loads(columns, 0.0);
  std::vector<Piece> pieces;
  for (std::size_t b : order) {
    const auto l = static_cast<std::size_t>(
        std::min_element(loads.begin(), loads.end()) - loads.begin());
    pieces.push_back({b, l, masses[b]});
    loads[l] += masses[b];
  }

  while (split_budget > 0) {
    const auto over = static_cast<std::size_t>(
        std::max_element(loads.begin(), loads.end()) - loads.begin());
    const auto under = static_cast<std::size_t>(
        std::min_element(loads.begin(), loads.end()) - loads.begin());
    const double excess = loads[over] - target;
    const double deficit = target - loads[under];
    double move = std::min(excess, deficit);
    if (move <= kDefaultTol) break;

    std::size_t biggest = pieces.size();
    for (std::size_t p = 0; p < pieces.size(); ++p)
      if (pieces[p].column == over &&
          (biggest == pieces.size() || pieces[p].mass > pieces[biggest].mass))
        biggest = p;
    if (biggest == pieces.size()) break;

    if (pieces[biggest].mass <= move) {
      pieces[biggest].column = under;  // whole relocation, costs no shelf
      loads[over] -= pieces[biggest].mass;
      loads[under] += pieces[biggest].mass;
    } else {
      pieces[biggest].mass -= move;
      pieces.push_back({pieces[biggest].parent, under, move});
      loads[over] -= move;
      loads[under] += move;
      --split_budget;
    }
  }

  double residue = 0.0;
  for (double l : loads) {
    const double d = l - target;
    residue += d * d;
  }
  return {clamp_residue(residue), std::move(pieces)};
}

PartitionPlan finish_plan(const mec::MarginalSet& set,
                          const std::vector<std::vector<std::size_t>>& cells,
                          const Assignment& assignment, std::size_t columns,
                          double tol) {
  std::vector<std::vector<std::size_t>> piece_cells;
  std::vector<double> piece_masses;
  std::vector<std::size_t> piece_columns;
  for (const Piece& p : assignment.pieces) {
    piece_cells.push_back(cells[p.parent]);
    piece_masses.push_back(p.mass);
    piece_columns.push_back(p.column);
  }

  PartitionPlan plan{mec::assemble_coupling(set, piece_cells, piece_masses, tol), {}, {}, 0.0};
  plan.assignment.resize(assignment.pieces.size());
  plan.column_loads.assign(columns, 0.0);
  for (std::size_t b = 0; b < plan.assignment.size(); ++b) {
    plan.assignment[b] = piece_columns[plan.coupling.emission_order[b]];
    plan.column_loads[plan.assignment[b]] += plan.coupling.output[b];
  }
  const double target = 1.0 / static_cast<double>(columns);
  for (double l : plan.column_loads) plan.residue += (l - target) * (l - target);
  plan.residue = clamp_residue(plan.residue);
  return plan;
}

}  // namespace

PartitionPlan best_partition(const mec::MarginalSet& set, std::size_t columns,
                             std::size_t shelves, std::uint64_t work_limit, double tol) {
  if (columns < 1) throw ValidationError("need at least one column");
  if (columns > 31) throw ValidationError("column counts above 31 are not supported");
  const std::size_t floor_shelves =
      set.cardinality() >= 2
          ? mec::min_output_cardinality(set.cardinality(), set.source_count())
          : 1;
  if (shelves < floor_shelves)
    throw ValidationError("shelf count below the minimum output cardinality");

  struct BestCandidate {
    double residue = std::numeric_limits<double>::infinity();
    std::vector<std::vector<std::size_t>> cells;
    Assignment assignment;
  } best;

  mec::enumerate_couplings(
      set, shelves,
      [&](const std::vector<std::vector<std::size_t>>& cells,
          const std::vector<double>& masses) {
        if (best.residue == 0.0) return;
        const std::size_t budget = shelves - masses.size();
        Assignment a = shelves <= 12
                           ? AssignmentSearch(masses, columns, budget, work_limit).run()
                           : ffd_assignment(masses, columns, budget);
        if (a.residue < best.residue) best = {a.residue, cells, std::move(a)};
      },
      work_limit, tol);

  if (!std::isfinite(best.residue))
    throw InfeasibleError("no feasible coupling with " + std::to_string(shelves) +
                          " output symbols");
  return finish_plan(set, best.cells, best.assignment, columns, tol);
}

std::size_t min_shelves(const mec::MarginalSet& set, std::size_t columns, double epsilon,
                        std::uint64_t work_limit, double tol) {
  if (epsilon < 0.0) throw ValidationError("epsilon must be nonnegative");
  constexpr std::size_t kShelfCap = 4096;

  std::map<std::size_t, double> cache;
  auto residue_at = [&](std::size_t n) {
    auto it = cache.find(n);
    if (it == cache.end())
      it = cache.emplace(n, best_partition(set, columns, n, work_limit, tol).residue).first;
    return it->second;
  };

  const std::size_t floor_shelves =
      set.cardinality() >= 2
          ? mec::min_output_cardinality(set.cardinality(), set.source_count())
          : 1;
  std::size_t lo = floor_shelves;
  std::size_t hi = floor_shelves;
  while (residue_at(hi) > epsilon) {
    if (hi >= kShelfCap)
      throw InfeasibleError("no shelf count within the work budget reaches the target residue");
    lo = hi;  // residue(lo) > epsilon
    hi = std::min(hi * 2, kShelfCap);
  }
  if (hi == floor_shelves) return hi;

  while (lo + 1 < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (residue_at(mid) <= epsilon)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace innokit::ikea
