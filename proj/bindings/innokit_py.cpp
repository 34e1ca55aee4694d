#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "innokit/causal.hpp"
#include "innokit/ikea.hpp"
#include "innokit/innovation.hpp"
#include "innokit/lossy.hpp"
#include "innokit/mec.hpp"
#include "innokit/pmf.hpp"
#include "innokit/shaping_cdf.hpp"

namespace py = pybind11;
using namespace innokit;

namespace {

mec::MarginalSet make_set(const std::vector<std::vector<double>>& sources) {
  std::vector<Pmf> pmfs;
  pmfs.reserve(sources.size());
  for (const auto& masses : sources) pmfs.emplace_back(masses);
  return mec::MarginalSet(std::move(pmfs));
}

py::dict coupling_dict(const mec::Coupling& c) {
  py::dict d;
  d["output"] = c.output.masses();
  d["recovery_maps"] = c.recovery_maps;
  d["entropy"] = c.entropy_bits;
  d["emission_order"] = c.emission_order;
  return d;
}

causal::ContingencyTable table_from_pairs(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  return causal::estimate_joint(pairs);
}

causal::Method method_from_name(const std::string& name) {
  if (name == "greedy") return causal::Method::Greedy;
  if (name == "exact") return causal::Method::Exact;
  if (name == "auto") return causal::Method::Auto;
  throw ValidationError("method must be greedy, exact or auto");
}

}  // namespace

PYBIND11_MODULE(_innokit, m) {
  m.doc() = "memoryless innovation representations: entropy tools, minimum "
            "entropy coupling, causal direction tests and shelf design";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
  py::register_exception<WorkLimitError>(m, "WorkLimitError", PyExc_RuntimeError);

  m.def("entropy",
        [](const std::vector<double>& masses) { return entropy(Pmf(masses)); },
        py::arg("masses"), "Shannon entropy in bits of a pmf.");
  m.def("binary_entropy", &binary_entropy, py::arg("p"));
  m.def("mutual_information",
        [](const std::vector<std::vector<double>>& joint) {
          return mutual_information(joint);
        },
        py::arg("joint"), "Mutual information in bits of a joint matrix.");

  m.def("max_mi_binary",
        [](double alpha, double beta) {
          const auto ch = lossy::max_mi_binary(alpha, beta);
          py::dict d;
          d["mi"] = ch.mi;
          d["conditionals"] = std::vector<std::vector<double>>{
              {ch.cond[0][0], ch.cond[0][1]}, {ch.cond[1][0], ch.cond[1][1]}};
          d["x_relabeled"] = ch.x_relabeled;
          d["y_relabeled"] = ch.y_relabeled;
          return d;
        },
        py::arg("alpha"), py::arg("beta"));
  m.def("markov1_objective", &lossy::markov1_objective, py::arg("alpha1"), py::arg("alpha2"),
        py::arg("gamma"), py::arg("beta"));
  m.def("markov1_optimal_beta",
        [](double a1, double a2, double g) {
          const auto c = lossy::markov1_optimal_beta(a1, a2, g);
          return py::make_tuple(c.beta, c.mi);
        },
        py::arg("alpha1"), py::arg("alpha2"), py::arg("gamma"));
  m.def("markov_r_optimal_beta",
        [](const std::vector<double>& alphas, const std::vector<double>& gammas) {
          const auto c = lossy::optimal_beta(lossy::MarkovSpec(alphas, gammas));
          return py::make_tuple(c.beta, c.mi);
        },
        py::arg("alphas"), py::arg("gammas"));
  m.def("stationary_weight", &lossy::stationary_weight, py::arg("alpha1"), py::arg("alpha2"));
  m.def("stationary_optimal_beta", &lossy::stationary_optimal_beta, py::arg("alpha1"),
        py::arg("alpha2"));

  m.def("min_output_cardinality",
        [](std::size_t a, std::size_t r) { return mec::min_output_cardinality(a, r); },
        py::arg("cardinality"), py::arg("sources"));
  m.def("greedy_mec",
        [](const std::vector<std::vector<double>>& sources) {
          return coupling_dict(mec::greedy_mec(make_set(sources)));
        },
        py::arg("marginals"));
  m.def("exhaustive_mec",
        [](const std::vector<std::vector<double>>& sources, std::size_t max_outputs,
           std::uint64_t work_limit) {
          const auto set = make_set(sources);
          const std::size_t b = max_outputs > 0
                                    ? max_outputs
                                    : mec::min_output_cardinality(set.cardinality(),
                                                                  set.source_count());
          return coupling_dict(mec::exhaustive_mec(set, b, work_limit));
        },
        py::arg("marginals"), py::arg("max_outputs") = 0,
        py::arg("work_limit") = kDefaultWorkLimit);
  m.def("beta_bounds",
        [](const std::vector<std::vector<double>>& sources, std::size_t max_outputs,
           std::uint64_t work_limit) {
          const auto set = make_set(sources);
          const std::size_t b = max_outputs > 0
                                    ? max_outputs
                                    : mec::min_output_cardinality(set.cardinality(),
                                                                  set.source_count());
          const auto bounds = mec::beta_bounds(set, b, work_limit);
          return py::make_tuple(bounds.lower, bounds.upper);
        },
        py::arg("marginals"), py::arg("max_outputs") = 0,
        py::arg("work_limit") = kDefaultWorkLimit);
  m.def("min_entropy_box",
        [](const std::vector<double>& lower, const std::vector<double>& upper) {
          return mec::min_entropy_box(mec::BoxBounds(lower, upper)).masses();
        },
        py::arg("lower"), py::arg("upper"));
  m.def("mec_lower_bound",
        [](const std::vector<std::vector<double>>& sources, std::uint64_t work_limit) {
          return mec::mec_lower_bound(make_set(sources), work_limit);
        },
        py::arg("marginals"), py::arg("work_limit") = kDefaultWorkLimit);

  m.def("infer_direction",
        [](const std::vector<std::pair<std::string, std::string>>& pairs,
           const std::string& method, const std::string& statistic, bool smoothing) {
          const auto verdict = causal::infer_direction(
              table_from_pairs(pairs), method_from_name(method),
              statistic == "entropy_plus_cause" ? causal::Statistic::EntropyPlusCause
                                                : causal::Statistic::EntropyOfE,
              smoothing);
          py::dict d;
          d["direction"] = causal::to_string(verdict.direction);
          d["h_e_forward"] = verdict.h_e_forward;
          d["h_e_backward"] = verdict.h_e_backward;
          d["statistic"] = causal::to_string(verdict.statistic);
          d["margin"] = verdict.margin;
          d["warnings"] = verdict.warnings;
          return d;
        },
        py::arg("pairs"), py::arg("method") = "auto",
        py::arg("statistic") = "entropy_of_e", py::arg("smoothing") = false);

  m.def("best_partition",
        [](const std::vector<std::vector<double>>& sources, std::size_t columns,
           std::size_t shelves, std::uint64_t work_limit) {
          const auto plan = ikea::best_partition(make_set(sources), columns, shelves,
                                                 work_limit);
          py::dict d;
          d["coupling"] = coupling_dict(plan.coupling);
          d["assignment"] = plan.assignment;
          d["column_loads"] = plan.column_loads;
          d["residue"] = plan.residue;
          return d;
        },
        py::arg("customers"), py::arg("columns"), py::arg("shelves"),
        py::arg("work_limit") = kDefaultWorkLimit);
  m.def("min_shelves",
        [](const std::vector<std::vector<double>>& sources, std::size_t columns,
           double epsilon, std::uint64_t work_limit) {
          return ikea::min_shelves(make_set(sources), columns, epsilon, work_limit);
        },
        py::arg("customers"), py::arg("columns"), py::arg("epsilon") = 1e-9,
        py::arg("work_limit") = kDefaultWorkLimit);

  py::class_<continuous::ShapingCdf>(m, "ShapingCdf")
      .def(py::init([](const std::vector<std::pair<double, double>>& knots,
                       const std::vector<std::pair<double, double>>& atoms) {
             std::vector<continuous::CdfKnot> ks;
             for (const auto& [x, f] : knots) ks.push_back({x, f});
             std::vector<continuous::Atom> as;
             for (const auto& [x, mass] : atoms) as.push_back({x, mass});
             return continuous::ShapingCdf(std::move(ks), std::move(as));
           }),
           py::arg("knots") = std::vector<std::pair<double, double>>{},
           py::arg("atoms") = std::vector<std::pair<double, double>>{})
      .def_static("uniform01", &continuous::ShapingCdf::uniform01)
      .def("cdf", &continuous::ShapingCdf::cdf, py::arg("x"))
      .def("quantile", &continuous::ShapingCdf::quantile, py::arg("u"))
      .def("atom_mass", &continuous::ShapingCdf::atom_mass, py::arg("x"))
      .def_property_readonly("has_atoms", &continuous::ShapingCdf::has_atoms);

  m.def("to_uniform", &continuous::to_uniform, py::arg("x"), py::arg("model"),
        py::arg("theta"));
  m.def("from_uniform", &continuous::from_uniform, py::arg("u"), py::arg("model"));

  m.def("innovate",
        [](const std::vector<double>& xs, std::size_t order,
           const std::vector<double>& states, const continuous::ShapingCdf& initial,
           const std::map<std::string, continuous::ShapingCdf>& conditional,
           const continuous::ShapingCdf& target, RngSeed seed) {
          continuous::FiniteStateModel model(order, states, initial, conditional);
          const auto result = continuous::innovate(xs, model, target, seed);
          return py::make_tuple(result.ys, result.thetas, result.used_atoms);
        },
        py::arg("xs"), py::arg("order"), py::arg("states"), py::arg("initial"),
        py::arg("conditional"), py::arg("target"), py::arg("seed"));
  m.def("recover",
        [](const std::vector<double>& ys, std::size_t order,
           const std::vector<double>& states, const continuous::ShapingCdf& initial,
           const std::map<std::string, continuous::ShapingCdf>& conditional,
           const continuous::ShapingCdf& target, const std::vector<double>& thetas) {
          continuous::FiniteStateModel model(order, states, initial, conditional);
          return continuous::recover(ys, model, target, thetas);
        },
        py::arg("ys"), py::arg("order"), py::arg("states"), py::arg("initial"),
        py::arg("conditional"), py::arg("target"),
        py::arg("thetas") = std::vector<double>{});
}
