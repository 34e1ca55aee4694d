#pragma once

#include <vector>

#include "innokit/common.hpp"

namespace innokit::continuous {

struct CdfKnot {
  double x;
  double f;  // value of the continuous part at x
};

struct Atom {
  double x;
  double mass;
};

// Mixed distribution described by a piecewise-linear continuous part (the
// knots) plus point masses (the atoms). The full CDF is the knot
// interpolation plus the mass of every atom at or below x, right continuous.
class ShapingCdf {
 public:
  explicit ShapingCdf(std::vector<CdfKnot> knots, std::vector<Atom> atoms = {},
                      double tol = kDefaultTol);

  static ShapingCdf uniform01();
  static ShapingCdf from_atoms(std::vector<Atom> atoms, double tol = kDefaultTol);

  double cdf(double x) const;
  double atom_mass(double x) const;  // 0 when x carries no atom

  // Generalized inverse inf{x : cdf(x) >= u}; u = 0 maps to the support
  // minimum so the map is total on [0, 1].
  double quantile(double u) const;

  bool has_atoms() const { return !atoms_.empty(); }
  double support_min() const { return support_min_; }
  double support_max() const { return support_max_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<CdfKnot>& knots() const { return knots_; }

 private:
  // One monotone stretch of the CDF: a linear segment or an atom jump at x0.
  struct Event {
    double x0, x1;
    double f_start, f_end;
    bool jump;
  };

  std::vector<CdfKnot> knots_;
  std::vector<Atom> atoms_;
  std::vector<double> atom_prefix_;  // cumulative atom mass, aligned with atoms_
  std::vector<Event> events_;        // ordered by x, f_end nondecreasing
  double support_min_ = 0.0;
  double support_max_ = 0.0;

  double continuous_part(double x) const;
};

// Shape a sample of the model law to Unif[0,1]: cdf(x) at continuity points,
// cdf(x) - theta * mass at atoms, with theta an independent Unif[0,1] draw.
double to_uniform(double x, const ShapingCdf& model, double theta);

// Push a uniform sample through the generalized inverse, giving the model law.
double from_uniform(double u, const ShapingCdf& model);

}  // namespace innokit::continuous
