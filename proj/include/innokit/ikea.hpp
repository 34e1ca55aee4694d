#pragma once

#include <cstdint>
#include <vector>

#include "innokit/common.hpp"
#include "innokit/mec.hpp"

namespace innokit::ikea {

// A coupling stretched to exactly N output symbols (splitting preserves
// per-customer recovery) with every symbol assigned to one column.
struct PartitionPlan {
  mec::Coupling coupling;              // N output symbols, sorted descending
  std::vector<std::size_t> assignment; // [output symbol] -> column
  std::vector<double> column_loads;    // delta_l
  double residue = 0.0;                // sum_l (delta_l - 1/L)^2
};

// Minimize the residue over couplings with at most `shelves` output symbols
// (reusing the coupling enumeration; symbols may be split to spend the
// remaining shelf budget) crossed with all column assignments. Assignments
// are searched exactly for shelves <= 12 and by a first-fit-decreasing
// heuristic above that.
PartitionPlan best_partition(const mec::MarginalSet& set, std::size_t columns,
                             std::size_t shelves,
                             std::uint64_t work_limit = kDefaultWorkLimit,
                             double tol = kDefaultTol);

// Smallest shelf count whose best partition has residue <= epsilon; binary
// search over N after doubling up from the minimum output cardinality. The
// residue is non-increasing in N, which makes the bisection sound.
std::size_t min_shelves(const mec::MarginalSet& set, std::size_t columns,
                        double epsilon,
                        std::uint64_t work_limit = kDefaultWorkLimit,
                        double tol = kDefaultTol);

}  // namespace innokit::ikea
