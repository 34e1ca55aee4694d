#include "innokit/mec.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace innokit::mec {

namespace {

// Flattened constraint rows: one per (source, nonzero canonical symbol).
struct ConstraintGrid {
  std::size_t sources = 0;
  std::vector<std::vector<std::size_t>> nonzero;   // [i] -> canonical symbols with mass > tol
  std::vector<std::vector<std::size_t>> row_of;    // [i][nz position] -> flat row index
  std::vector<double> rhs;                         // flat row -> canonical mass
  std::size_t rows = 0;

  ConstraintGrid(const MarginalSet& set, double tol) {
    sources = set.source_count();
    nonzero.resize(sources);
    row_of.resize(sources);
    const auto& canon = set.canonical();
    for (std::size_t i = 0; i < sources; ++i) {
      for (std::size_t a = 0; a < canon[i].size(); ++a) {
        if (canon[i][a] > tol) {
          nonzero[i].push_back(a);
          row_of[i].push_back(rows++);
          rhs.push_back(canon[i][a]);
        }
      }
      if (nonzero[i].empty())
        throw ValidationError("source has no positive mass");
    }
  }
};

// A cell is one output symbol candidate: a choice of nonzero symbol per source.
struct CellTable {
  std::vector<std::vector<std::size_t>> symbol;  // [cell][source] -> canonical symbol
  std::vector<std::vector<std::size_t>> row;     // [cell][source] -> flat constraint row

  CellTable(const ConstraintGrid& grid) {
    std::vector<std::size_t> pos(grid.sources, 0);
    while (true) {
      std::vector<std::size_t> syms(grid.sources), rows(grid.sources);
      for (std::size_t i = 0; i < grid.sources; ++i) {
        syms[i] = grid.nonzero[i][pos[i]];
        rows[i] = grid.row_of[i][pos[i]];
      }
      symbol.push_back(std::move(syms));
      row.push_back(std::move(rows));
      // next tuple, lexicographic with the last source fastest
      std::size_t i = grid.sources;
      while (i > 0) {
        --i;
        if (++pos[i] < grid.nonzero[i].size()) break;
        pos[i] = 0;
        if (i == 0) return;
      }
    }
  }

  std::size_t size() const { return symbol.size(); }
};

class CouplingEnumerator {
 public:
  CouplingEnumerator(const MarginalSet& set, std::size_t max_outputs,
                     const CouplingVisitor& visit, std::uint64_t work_limit, double tol)
      : grid_(set, tol),
        cells_(grid_),
        visit_(visit),
        max_outputs_(max_outputs),
        work_limit_(work_limit),
        tol_(tol) {
    std::size_t widest = 0;
    for (const auto& nz : grid_.nonzero) widest = std::max(widest, nz.size());
    if (max_outputs_ < widest)
      throw InfeasibleError("output alphabet smaller than a source alphabet");

    rows_ = grid_.rows;
    depth_cap_ = std::min(max_outputs_, rows_);  // supports never exceed the rank

    // Last cell index covering each constraint row, for dead-branch pruning.
    last_cover_.assign(rows_, 0);
    for (std::size_t c = 0; c < cells_.size(); ++c)
      for (std::size_t r : cells_.row[c]) last_cover_[r] = c;

    cover_count_.assign(rows_, 0);
    uncovered_per_source_.resize(grid_.sources);
    for (std::size_t i = 0; i < grid_.sources; ++i)
      uncovered_per_source_[i] = grid_.nonzero[i].size();

    basis_.assign(depth_cap_ * rows_, 0.0);
    rmat_.assign(depth_cap_ * depth_cap_, 0.0);
    proj_.assign(depth_cap_, 0.0);
    scratch_.assign(rows_, 0.0);
    residual_.assign(rows_, 0.0);
    solution_.assign(depth_cap_, 0.0);
    chosen_.reserve(depth_cap_);
  }

  void run() { extend(0); }

 private:
  // Gram-Schmidt insert of the cell's incidence column, maintaining Q, the
  // triangular coefficients and the projected right-hand side. Returns false
  // when the column is dependent on the current basis; no extreme coupling
  // can use it then, since extreme supports have independent columns.
  bool push_basis(std::size_t cell) {
    const std::size_t d = chosen_.size();
    double* v = scratch_.data();
    std::fill(v, v + rows_, 0.0);
    for (std::size_t r : cells_.row[cell]) v[r] = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double* q = &basis_[j * rows_];
      double dot = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) dot += q[r] * v[r];
      rmat_[j * depth_cap_ + d] = dot;
      for (std::size_t r = 0; r < rows_; ++r) v[r] -= dot * q[r];
    }
    double norm2 = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) norm2 += v[r] * v[r];
    if (norm2 < 1e-14) return false;
    const double norm = std::sqrt(norm2);
    rmat_[d * depth_cap_ + d] = norm;
    double* q = &basis_[d * rows_];
    double dot_rhs = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      q[r] = v[r] / norm;
      dot_rhs += q[r] * grid_.rhs[r];
    }
    proj_[d] = dot_rhs;
    return true;
  }

  void add_cell(std::size_t cell) {
    chosen_.push_back(cell);
    for (std::size_t i = 0; i < grid_.sources; ++i) {
      const std::size_t r = cells_.row[cell][i];
      if (cover_count_[r]++ == 0) --uncovered_per_source_[i];
    }
  }

  void remove_cell() {
    const std::size_t cell = chosen_.back();
    chosen_.pop_back();
    for (std::size_t i = 0; i < grid_.sources; ++i) {
      const std::size_t r = cells_.row[cell][i];
      if (--cover_count_[r] == 0) ++uncovered_per_source_[i];
    }
  }

  bool covered() const {
    for (std::size_t n : uncovered_per_source_)
      if (n != 0) return false;
    return true;
  }

  // Cells below `from` are decided; uncovered rows must still be reachable.
  bool branch_alive(std::size_t from) const {
    std::size_t need = 0;
    for (std::size_t n : uncovered_per_source_) need = std::max(need, n);
    if (chosen_.size() + need > depth_cap_) return false;
    if (need == 0) return true;
    if (from >= cells_.size()) return false;
    for (std::size_t r = 0; r < rows_; ++r)
      if (cover_count_[r] == 0 && last_cover_[r] < from) return false;
    return true;
  }

  void solve_and_visit() {
    const std::size_t d = chosen_.size();
    // The system M x = rhs is consistent iff rhs lies in the column span,
    // i.e. the orthogonal residual vanishes.
    double* res = residual_.data();
    std::copy(grid_.rhs.begin(), grid_.rhs.end(), res);
    for (std::size_t j = 0; j < d; ++j) {
      const double* q = &basis_[j * rows_];
      for (std::size_t r = 0; r < rows_; ++r) res[r] -= proj_[j] * q[r];
    }
    for (std::size_t r = 0; r < rows_; ++r)
      if (std::abs(res[r]) > tol_) return;

    for (std::size_t j = d; j-- > 0;) {
      double acc = proj_[j];
      for (std::size_t k = j + 1; k < d; ++k) acc -= rmat_[j * depth_cap_ + k] * solution_[k];
      solution_[j] = acc / rmat_[j * depth_cap_ + j];
    }
    std::vector<double> masses(d);
    for (std::size_t c = 0; c < d; ++c) {
      if (solution_[c] <= tol_) return;  // boundary solutions reappear under a smaller support
      masses[c] = solution_[c];
    }
    std::vector<std::vector<std::size_t>> cell_symbols(d);
    for (std::size_t c = 0; c < d; ++c) cell_symbols[c] = cells_.symbol[chosen_[c]];
    visit_(cell_symbols, masses);
  }

  void extend(std::size_t from) {
    if (!branch_alive(from)) return;
    for (std::size_t cell = from; cell < cells_.size(); ++cell) {
      if (++work_ > work_limit_)
        throw WorkLimitError("coupling enumeration exceeded work limit of " +
                             std::to_string(work_limit_));
      if (!push_basis(cell)) continue;
      add_cell(cell);
      if (covered()) solve_and_visit();
      if (chosen_.size() < depth_cap_) extend(cell + 1);
      remove_cell();
    }
  }

  ConstraintGrid grid_;
  CellTable cells_;
  const CouplingVisitor& visit_;
  std::size_t max_outputs_;
  std::uint64_t work_limit_;
  double tol_;
  std::uint64_t work_ = 0;

  std::size_t rows_ = 0;
  std::size_t depth_cap_ = 0;
  std::vector<std::size_t> chosen_;
  std::vector<double> basis_;     // orthonormal columns, [depth][row]
  std::vector<double> rmat_;      // triangular coefficients, [j][depth]
  std::vector<double> proj_;      // basis . rhs
  std::vector<double> scratch_;
  std::vector<double> residual_;
  std::vector<double> solution_;
  std::vector<std::size_t> cover_count_;
  std::vector<std::size_t> last_cover_;
  std::vector<std::size_t> uncovered_per_source_;
};
}  // namespace

Coupling assemble_coupling(const MarginalSet& set,
                           const std::vector<std::vector<std::size_t>>& cells,
                           const std::vector<double>& masses, double tol) {
  std::vector<std::size_t> order(masses.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    if (masses[l] != masses[r]) return masses[l] > masses[r];
    return cells[l] < cells[r];
  });

  std::vector<double> sorted(masses.size());
  for (std::size_t b = 0; b < order.size(); ++b) sorted[b] = masses[order[b]];

  Coupling coupling{Pmf(sorted, {}, std::max(tol, 1e-7)), {}, order, 0.0};
  coupling.entropy_bits = entropy(coupling.output);
  coupling.recovery_maps.assign(set.source_count(),
                                std::vector<std::size_t>(masses.size(), 0));
  for (std::size_t i = 0; i < set.source_count(); ++i) {
    const std::size_t orig_source = set.original_source(i);
    for (std::size_t b = 0; b < order.size(); ++b)
      coupling.recovery_maps[orig_source][b] =
          set.original_symbol(i, cells[order[b]][i]);
  }
  return coupling;
}

MarginalSet::MarginalSet(std::vector<Pmf> sources, double tol) : sources_(std::move(sources)) {
  if (sources_.empty()) throw ValidationError("marginal set needs at least one source");
  for (const Pmf& p : sources_) cardinality_ = std::max(cardinality_, p.size());
  for (Pmf& p : sources_) {
    if (p.size() < cardinality_) {
      std::vector<double> padded = p.masses();
      padded.resize(cardinality_, 0.0);
      p = Pmf(std::move(padded), {}, tol);
    }
  }

  symbol_order_.resize(sources_.size());
  canonical_.resize(sources_.size());
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    symbol_order_[i].resize(cardinality_);
    std::iota(symbol_order_[i].begin(), symbol_order_[i].end(), std::size_t{0});
    const auto& m = sources_[i].masses();
    std::stable_sort(symbol_order_[i].begin(), symbol_order_[i].end(),
                     [&](std::size_t l, std::size_t r) { return m[l] < m[r]; });
    canonical_[i].resize(cardinality_);
    for (std::size_t a = 0; a < cardinality_; ++a)
      canonical_[i][a] = m[symbol_order_[i][a]];
  }

  source_order_.resize(sources_.size());
  std::iota(source_order_.begin(), source_order_.end(), std::size_t{0});
  std::stable_sort(source_order_.begin(), source_order_.end(),
                   [&](std::size_t l, std::size_t r) {
                     return canonical_[l][0] < canonical_[r][0];
                   });
  std::vector<std::vector<double>> canon_sorted(sources_.size());
  std::vector<std::vector<std::size_t>> symbol_sorted(sources_.size());
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    canon_sorted[i] = std::move(canonical_[source_order_[i]]);
    symbol_sorted[i] = std::move(symbol_order_[source_order_[i]]);
  }
  canonical_ = std::move(canon_sorted);
  symbol_order_ = std::move(symbol_sorted);
}

double Coupling::conditional(std::size_t source, std::size_t symbol,
                             std::size_t output_symbol, const MarginalSet& set) const {
  if (recovery_maps.at(source).at(output_symbol) != symbol) return 0.0;
  const double alpha = set.sources()[source][symbol];
  return alpha > 0.0 ? output[output_symbol] / alpha : 0.0;
}

std::size_t min_output_cardinality(std::size_t cardinality, std::size_t source_count) {
  if (cardinality < 2 || source_count < 1)
    throw ValidationError("min_output_cardinality requires A >= 2 and R >= 1");
  return source_count * (cardinality - 1) + 1;
}

Coupling greedy_mec(const MarginalSet& set, double tol) {
  const auto& canon = set.canonical();
  const std::size_t sources = set.source_count();
  std::vector<std::vector<double>> residual = canon;
  std::vector<double> remaining(sources, 1.0);

  struct Emission {
    double mass;
    std::vector<std::size_t> symbol;  // canonical, per source
  };
  std::vector<Emission> emissions;
  const std::size_t emission_cap = sources * set.cardinality() + 1;

  while (true) {
    std::vector<std::size_t> arg(sources, 0);
    double emit = 2.0;
    for (std::size_t i = 0; i < sources; ++i) {
      std::size_t best = 0;
      for (std::size_t a = 1; a < residual[i].size(); ++a)
        if (residual[i][a] > residual[i][best]) best = a;
      arg[i] = best;
      emit = std::min(emit, residual[i][best]);
    }
    if (emit <= tol) break;

    for (std::size_t i = 0; i < sources; ++i) {
      residual[i][arg[i]] -= emit;
      if (residual[i][arg[i]] < tol) residual[i][arg[i]] = 0.0;
      remaining[i] -= emit;
    }
    emissions.push_back({emit, std::move(arg)});

    const auto [lo, hi] = std::minmax_element(remaining.begin(), remaining.end());
    if (*hi - *lo > 1e-7)
      throw NumericsError("greedy residual bookkeeping drifted past 1e-7");
    if (emissions.size() > emission_cap)
      throw NumericsError("greedy emitted more symbols than the alphabet admits");
  }
  for (double left : remaining)
    if (std::abs(left) > 1e-7)
      throw NumericsError("greedy terminated with unassigned mass");

  std::vector<std::vector<std::size_t>> cells(emissions.size());
  std::vector<double> masses(emissions.size());
  for (std::size_t e = 0; e < emissions.size(); ++e) {
    cells[e] = emissions[e].symbol;
    masses[e] = emissions[e].mass;
  }
  return assemble_coupling(set, cells, masses, tol);
}

void enumerate_couplings(const MarginalSet& set, std::size_t max_outputs,
                         const CouplingVisitor& visit, std::uint64_t work_limit,
                         double tol) {
  CouplingEnumerator(set, max_outputs, visit, work_limit, tol).run();
}

Coupling exhaustive_mec(const MarginalSet& set, std::size_t max_outputs,
                        std::uint64_t work_limit, double tol) {
  struct Best {
    double entropy = std::numeric_limits<double>::infinity();
    std::vector<std::vector<std::size_t>> cells;
    std::vector<double> masses;
  } best;

  enumerate_couplings(
      set, max_outputs,
      [&](const std::vector<std::vector<std::size_t>>& cells,
          const std::vector<double>& masses) {
        const double h = entropy(std::span<const double>(masses));
        if (h > best.entropy) return;
        if (h == best.entropy) {
          // Deterministic reduction: keep the lexicographically smaller
          // (sorted masses, cells) pair.
          auto key = [](const std::vector<double>& m,
                        const std::vector<std::vector<std::size_t>>& c) {
            std::vector<std::size_t> order(m.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
              if (m[l] != m[r]) return m[l] > m[r];
              return c[l] < c[r];
            });
            std::vector<std::pair<double, std::vector<std::size_t>>> k;
            k.reserve(m.size());
            for (std::size_t b : order) k.emplace_back(-m[b], c[b]);
            return k;
          };
          if (key(masses, cells) >= key(best.masses, best.cells)) return;
        }
        best = {h, cells, masses};
      },
      work_limit, tol);

  if (!std::isfinite(best.entropy))
    throw InfeasibleError("no feasible coupling with " + std::to_string(max_outputs) +
                          " output symbols");
  return assemble_coupling(set, best.cells, best.masses, tol);
}

BoxBounds::BoxBounds(std::vector<double> lower_in, std::vector<double> upper_in, double tol)
    : lower(std::move(lower_in)), upper(std::move(upper_in)) {
  if (lower.empty() || lower.size() != upper.size())
    throw ValidationError("box bounds need matching nonempty lower/upper lists");
  double lo_sum = 0.0, hi_sum = 0.0;
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(lower[i] >= -tol) || lower[i] > upper[i] + tol)
      throw ValidationError("box bounds must satisfy 0 <= lower <= upper");
    if (i + 1 < lower.size() && (lower[i] > lower[i + 1] + tol || upper[i] > upper[i + 1] + tol))
      throw ValidationError("box bounds must be sorted ascending");
    lo_sum += lower[i];
    hi_sum += upper[i];
  }
  if (lo_sum > 1.0 + tol || hi_sum < 1.0 - tol)
    throw InfeasibleError("box bounds admit no probability vector");
}

BoxBounds beta_bounds(const MarginalSet& set, std::size_t max_outputs,
                      std::uint64_t work_limit, double tol) {
  std::vector<double> lower(max_outputs, std::numeric_limits<double>::infinity());
  std::vector<double> upper(max_outputs, 0.0);
  bool any = false;
  enumerate_couplings(
      set, max_outputs,
      [&](const std::vector<std::vector<std::size_t>>&, const std::vector<double>& masses) {
        any = true;
        // ascending convention with leading zero padding
        std::vector<double> asc(max_outputs, 0.0);
        std::copy(masses.begin(), masses.end(),
                  asc.begin() + static_cast<std::ptrdiff_t>(max_outputs - masses.size()));
        std::sort(asc.begin(), asc.end());
        for (std::size_t b = 0; b < max_outputs; ++b) {
          lower[b] = std::min(lower[b], asc[b]);
          upper[b] = std::max(upper[b], asc[b]);
        }
      },
      work_limit, tol);
  if (!any)
    throw InfeasibleError("no feasible coupling with " + std::to_string(max_outputs) +
                          " output symbols");
  return BoxBounds(std::move(lower), std::move(upper), tol);
}

Pmf min_entropy_box(const BoxBounds& bounds, double tol) {
  const std::size_t n = bounds.size();
  std::vector<double> beta(n, 0.0);
  std::vector<double> lower_prefix(n, 0.0);  // sum of lower bounds strictly below i
  for (std::size_t i = 1; i < n; ++i) lower_prefix[i] = lower_prefix[i - 1] + bounds.lower[i - 1];

  double remaining = 1.0;
  for (std::size_t i = n; i-- > 0;) {
    const double cap = remaining - lower_prefix[i];
    beta[i] = std::min(bounds.upper[i], cap);
    if (beta[i] < bounds.lower[i] - tol)
      throw InfeasibleError("box bounds admit no probability vector");
    remaining -= beta[i];
  }
  if (std::abs(remaining) > tol)
    throw InfeasibleError("box bounds admit no probability vector");
  return Pmf(std::move(beta), {}, std::max(tol, 1e-9));
}

double mec_lower_bound(const MarginalSet& set, std::uint64_t work_limit, double tol) {
  const std::size_t b = min_output_cardinality(set.cardinality(), set.source_count());
  return entropy(min_entropy_box(beta_bounds(set, b, work_limit, tol), tol));
}

}  // namespace innokit::mec
