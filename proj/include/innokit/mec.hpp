#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "innokit/common.hpp"
#include "innokit/pmf.hpp"

namespace innokit::mec {

// R source pmfs over a common alphabet size A; ragged inputs are padded with
// zero masses. Carries a canonical view (masses ascending within each source,
// sources ordered by their smallest mass) with the permutations recorded so
// results can be reported against the original symbol order.
class MarginalSet {
 public:
  explicit MarginalSet(std::vector<Pmf> sources, double tol = kDefaultTol);

  std::size_t source_count() const { return sources_.size(); }       // R
  std::size_t cardinality() const { return cardinality_; }           // A
  const std::vector<Pmf>& sources() const { return sources_; }

  // Canonical masses: canonical()[i][a] ascending in a, sources ordered by
  // canonical()[i][0].
  const std::vector<std::vector<double>>& canonical() const { return canonical_; }

  // Map a canonical (source, symbol) position back to the original indexing.
  std::size_t original_source(std::size_t canon_source) const {
    return source_order_[canon_source];
  }
  std::size_t original_symbol(std::size_t canon_source, std::size_t canon_symbol) const {
    return symbol_order_[canon_source][canon_symbol];
  }

 private:
  std::vector<Pmf> sources_;  // zero-padded to the common cardinality
  std::size_t cardinality_ = 0;
  std::vector<std::vector<double>> canonical_;
  std::vector<std::size_t> source_order_;               // canon source -> original source
  std::vector<std::vector<std::size_t>> symbol_order_;  // [canon source][canon symbol] -> original symbol
};

// Lossless coupling: one output pmf plus, per source, a deterministic map
// from output symbol to the unique source symbol it came from. Output masses
// are stored sorted descending; `emission_order[b]` is the step at which the
// producing algorithm emitted symbol b.
struct Coupling {
  Pmf output;
  std::vector<std::vector<std::size_t>> recovery_maps;  // [source][output symbol] -> source symbol
  std::vector<std::size_t> emission_order;
  double entropy_bits = 0.0;

  // Conditional P(Y = y_b | X_i = x_a); nonzero for exactly one a per (i, b).
  double conditional(std::size_t source, std::size_t symbol, std::size_t output_symbol,
                     const MarginalSet& set) const;
};

// Smallest output alphabet that leaves enough free parameters for unique
// recovery: R*(A-1) + 1.
std::size_t min_output_cardinality(std::size_t cardinality, std::size_t source_count);

// Greedy coupling: repeatedly emit the largest mass all sources can still
// supply, i.e. min over sources of the current maximum residual. Ties pick
// the lowest source index, then the lowest symbol index. Entropy of the
// result upper-bounds the optimum.
Coupling greedy_mec(const MarginalSet& set, double tol = kDefaultTol);

// Exact minimum-entropy coupling with at most B output symbols, by exhaustive
// enumeration of candidate supports (each output symbol is a tuple of source
// symbols; tuples with linearly dependent incidence columns cannot be part of
// an extreme solution and are pruned). Throws InfeasibleError when no valid
// coupling exists at this B and WorkLimitError past `work_limit` search nodes.
Coupling exhaustive_mec(const MarginalSet& set, std::size_t max_outputs,
                        std::uint64_t work_limit = kDefaultWorkLimit,
                        double tol = kDefaultTol);

// Per-coordinate envelope of the output masses over every coupling found by
// the exhaustive enumeration, in ascending-sorted convention.
struct BoxBounds {
  std::vector<double> lower;  // a_b, ascending
  std::vector<double> upper;  // b_b, ascending

  BoxBounds(std::vector<double> lower_in, std::vector<double> upper_in,
            double tol = kDefaultTol);
  std::size_t size() const { return lower.size(); }
};

BoxBounds beta_bounds(const MarginalSet& set, std::size_t max_outputs,
                      std::uint64_t work_limit = kDefaultWorkLimit,
                      double tol = kDefaultTol);

// Minimum-entropy pmf inside box bounds: walking from the largest coordinate
// down, each coordinate takes min(upper bound, mass still assignable while
// honoring the remaining lower bounds). Result saturates upper bounds above
// some pivot, lower bounds below it.
Pmf min_entropy_box(const BoxBounds& bounds, double tol = kDefaultTol);

// Entropy of the box minimizer at B = min_output_cardinality; never exceeds
// the entropy of the optimal coupling.
double mec_lower_bound(const MarginalSet& set,
                       std::uint64_t work_limit = kDefaultWorkLimit,
                       double tol = kDefaultTol);

// Enumeration hook shared by the exact solver, the bounds, and tests.
// Visits every extreme coupling with at most `max_outputs` symbols:
// `cells[c][i]` is the canonical symbol of source i that output symbol c
// draws from, `masses[c]` its probability (all strictly positive).
using CouplingVisitor =
    std::function<void(const std::vector<std::vector<std::size_t>>& cells,
                       const std::vector<double>& masses)>;
void enumerate_couplings(const MarginalSet& set, std::size_t max_outputs,
                         const CouplingVisitor& visit,
                         std::uint64_t work_limit = kDefaultWorkLimit,
                         double tol = kDefaultTol);

// Sorted-descending Coupling view, in original indexing, of an enumerated
// (cells, masses) pair. `emission_order[b]` recovers the input position of
// sorted symbol b.
Coupling assemble_coupling(const MarginalSet& set,
                           const std::vector<std::vector<std::size_t>>& cells,
                           const std::vector<double>& masses,
                           double tol = kDefaultTol);

}  // namespace innokit::mec
