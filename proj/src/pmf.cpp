#include "innokit/pmf.hpp"

#include <cmath>
#include <numeric>

namespace innokit {

Pmf::Pmf(std::vector<double> masses, std::vector<std::string> labels, double tol)
    : masses_(std::move(masses)), labels_(std::move(labels)) {
  if (masses_.empty()) throw ValidationError("pmf needs at least one symbol");
  if (!labels_.empty() && labels_.size() != masses_.size())
    throw ValidationError("pmf label count does not match mass count");
  double sum = 0.0;
  for (double m : masses_) {
    if (!(m >= -tol) || !std::isfinite(m))
      throw ValidationError("pmf mass is negative or not finite");
    sum += m;
  }
  if (std::abs(sum - 1.0) > tol)
    throw ValidationError("pmf masses sum to " + std::to_string(sum) +
                          ", outside tolerance of 1");
  for (double& m : masses_) {
    if (m < 0.0) m = 0.0;
    m /= sum;
  }
}

double entropy(std::span<const double> masses) {
  double h = 0.0;
  for (double p : masses)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

double entropy(const Pmf& p) { return entropy(std::span<const double>(p.masses())); }

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("binary_entropy argument outside [0, 1]");
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

double mutual_information(const std::vector<std::vector<double>>& joint, double tol) {
  if (joint.empty() || joint.front().empty())
    throw ValidationError("joint distribution must be a nonempty matrix");
  const std::size_t rows = joint.size();
  const std::size_t cols = joint.front().size();
  double total = 0.0;
  std::vector<double> row_marginal(rows, 0.0), col_marginal(cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    if (joint[r].size() != cols) throw ValidationError("joint distribution matrix is ragged");
    for (std::size_t c = 0; c < cols; ++c) {
      const double p = joint[r][c];
      if (!(p >= -tol) || !std::isfinite(p))
        throw ValidationError("joint entry is negative or not finite");
      row_marginal[r] += p;
      col_marginal[c] += p;
      total += p;
    }
  }
  if (std::abs(total - 1.0) > tol)
    throw ValidationError("joint entries sum to " + std::to_string(total));

  double mi = 0.0;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const double p = joint[r][c];
      if (p <= 0.0) continue;
      mi += p * std::log2(p / (row_marginal[r] * col_marginal[c]));
    }
  // Rounding can push an independent joint a hair below zero.
  if (mi < 0.0 && mi > -1e-9) mi = 0.0;
  return mi;
}

}  // namespace innokit
