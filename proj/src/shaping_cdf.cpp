#include "innokit/shaping_cdf.hpp"

#include <algorithm>
#include <cmath>

namespace innokit::continuous {

ShapingCdf::ShapingCdf(std::vector<CdfKnot> knots, std::vector<Atom> atoms, double tol)
    : knots_(std::move(knots)), atoms_(std::move(atoms)) {
  if (knots_.empty() && atoms_.empty())
    throw ValidationError("distribution needs knots or atoms");
  if (knots_.size() == 1) throw ValidationError("a single cdf knot is meaningless");

  double continuous_total = 0.0;
  if (!knots_.empty()) {
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
      if (!(knots_[i].x < knots_[i + 1].x))
        throw ValidationError("cdf knots must have strictly increasing x");
      if (knots_[i].f > knots_[i + 1].f + tol)
        throw ValidationError("cdf knots must be nondecreasing");
    }
    if (std::abs(knots_.front().f) > tol)
      throw ValidationError("continuous part must start at 0");
    knots_.front().f = 0.0;
    continuous_total = knots_.back().f;
  }

  double atom_total = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].mass <= 0.0) throw ValidationError("atom masses must be positive");
    if (i > 0 && !(atoms_[i - 1].x < atoms_[i].x))
      throw ValidationError("atoms must have strictly increasing positions");
    atom_total += atoms_[i].mass;
    atom_prefix_.push_back(atom_total);
  }
  if (std::abs(continuous_total + atom_total - 1.0) > tol)
    throw ValidationError("total probability is " +
                          std::to_string(continuous_total + atom_total));

  // Breakpoints: every knot and atom position, in order.
  std::vector<double> points;
  for (const auto& k : knots_) points.push_back(k.x);
  for (const auto& a : atoms_) points.push_back(a.x);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  support_min_ = points.front();
  support_max_ = points.back();

  double prev_x = points.front();
  double run = 0.0;
  for (std::size_t p = 0; p < points.size(); ++p) {
    const double x = points[p];
    const double mass = atom_mass(x);
    // Tolerance-level dips in user-provided knot values become flats.
    const double left_limit = std::max(cdf(x) - mass, run);
    if (p > 0) events_.push_back({prev_x, x, run, left_limit, false});
    if (mass > 0.0) events_.push_back({x, x, left_limit, left_limit + mass, true});
    run = left_limit + mass;
    prev_x = x;
  }
}

ShapingCdf ShapingCdf::uniform01() { return ShapingCdf({{0.0, 0.0}, {1.0, 1.0}}); }

ShapingCdf ShapingCdf::from_atoms(std::vector<Atom> atoms, double tol) {
  return ShapingCdf({}, std::move(atoms), tol);
}

double ShapingCdf::continuous_part(double x) const {
  if (knots_.empty()) return 0.0;
  if (x < knots_.front().x) return 0.0;
  if (x >= knots_.back().x) return knots_.back().f;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                             [](double v, const CdfKnot& k) { return v < k.x; });
  const CdfKnot& hi = *it;
  const CdfKnot& lo = *(it - 1);
  return lo.f + (x - lo.x) * (hi.f - lo.f) / (hi.x - lo.x);
}

double ShapingCdf::cdf(double x) const {
  double atoms_below = 0.0;
  auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x,
                             [](double v, const Atom& a) { return v < a.x; });
  if (it != atoms_.begin())
    atoms_below = atom_prefix_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
  return continuous_part(x) + atoms_below;
}

double ShapingCdf::atom_mass(double x) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                             [](const Atom& a, double v) { return a.x < v; });
  if (it != atoms_.end() && it->x == x) return it->mass;
  return 0.0;
}

double ShapingCdf::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw ValidationError("quantile argument outside [0, 1]");
  auto it = std::lower_bound(events_.begin(), events_.end(), u,
                             [](const Event& e, double v) { return e.f_end < v; });
  if (it == events_.end()) return support_max_;
  const Event& e = *it;
  if (e.jump) return e.x0;
  if (e.f_end > e.f_start && u > e.f_start)
    return e.x0 + (u - e.f_start) * (e.x1 - e.x0) / (e.f_end - e.f_start);
  return e.x0;
}

double to_uniform(double x, const ShapingCdf& model, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw ValidationError("theta must lie in [0, 1]");
  if (!(x >= model.support_min() && x <= model.support_max()))
    throw ValidationError("sample outside the model support");
  const double mass = model.atom_mass(x);
  double u = model.cdf(x);
  if (mass > 0.0) u -= theta * mass;
  return std::clamp(u, 0.0, 1.0);
}

double from_uniform(double u, const ShapingCdf& model) {
  if (!(u >= 0.0 && u <= 1.0))
    throw ValidationError("uniform sample outside [0, 1]");
  return model.quantile(u);
}

}  // namespace innokit::continuous
