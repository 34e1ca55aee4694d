#pragma once

#include <span>
#include <string>
#include <vector>

#include "innokit/common.hpp"

namespace innokit {

// Finite probability mass function over an ordered symbol alphabet.
//
// Construction normalizes inputs whose sum deviates from 1 by at most `tol`
// and rejects anything farther off; masses must be nonnegative (within tol).
// Instances are immutable after construction.
class Pmf {
 public:
  explicit Pmf(std::vector<double> masses, std::vector<std::string> labels = {},
               double tol = kDefaultTol);

  const std::vector<double>& masses() const { return masses_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return masses_.size(); }
  double operator[](std::size_t i) const { return masses_[i]; }

 private:
  std::vector<double> masses_;
  std::vector<std::string> labels_;  // empty when symbols are unnamed
};

// Shannon entropy in bits, -sum p log2 p with 0 log 0 := 0.
double entropy(const Pmf& p);
double entropy(std::span<const double> masses);

// Binary entropy h_b(p) in bits; p must lie in [0, 1].
double binary_entropy(double p);

// Mutual information in bits of a joint distribution given as a rectangular
// matrix of cell probabilities (rows = first variable, columns = second).
double mutual_information(const std::vector<std::vector<double>>& joint,
                          double tol = kDefaultTol);

}  // namespace innokit
