#include "innokit/json_io.hpp"

#include <fstream>

namespace innokit::io {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("cannot parse " + path + ": " + e.what());
  }
  return j;
}

Pmf pmf_from_json(const json& j, double tol) {
  if (!j.is_object() || !j.contains("masses"))
    throw ValidationError("pmf JSON needs a 'masses' list");
  std::vector<double> masses = j.at("masses").get<std::vector<double>>();
  std::vector<std::string> labels;
  if (j.contains("labels") && !j.at("labels").is_null())
    labels = j.at("labels").get<std::vector<std::string>>();
  return Pmf(std::move(masses), std::move(labels), tol);
}

json pmf_to_json(const Pmf& p) {
  json j;
  j["masses"] = p.masses();
  if (!p.labels().empty()) j["labels"] = p.labels();
  return j;
}

mec::MarginalSet marginals_from_json(const json& j, double tol) {
  if (!j.is_array() || j.empty())
    throw ValidationError("marginals JSON must be a nonempty list of pmfs");
  std::vector<Pmf> sources;
  for (const auto& item : j) sources.push_back(pmf_from_json(item, tol));
  return mec::MarginalSet(std::move(sources), tol);
}

json coupling_to_json(const mec::Coupling& c) {
  json j;
  j["output"] = c.output.masses();
  j["recovery_maps"] = c.recovery_maps;
  j["entropy"] = c.entropy_bits;
  j["emission_order"] = c.emission_order;
  return j;
}

json box_bounds_to_json(const mec::BoxBounds& b) {
  json j;
  j["lower"] = b.lower;
  j["upper"] = b.upper;
  return j;
}

json channel_to_json(const lossy::BinaryChannel& ch) {
  json j;
  j["mi"] = ch.mi;
  j["conditionals"] = {{ch.cond[0][0], ch.cond[0][1]}, {ch.cond[1][0], ch.cond[1][1]}};
  j["x_relabeled"] = ch.x_relabeled;
  j["y_relabeled"] = ch.y_relabeled;
  return j;
}

lossy::MarkovSpec markov_spec_from_json(const json& j, double tol) {
  if (!j.is_object() || !j.contains("alphas") || !j.contains("gammas"))
    throw ValidationError("markov spec JSON needs 'alphas' and 'gammas' lists");
  return lossy::MarkovSpec(j.at("alphas").get<std::vector<double>>(),
                           j.at("gammas").get<std::vector<double>>(), tol);
}

continuous::ShapingCdf shaping_cdf_from_json(const json& j, double tol) {
  std::vector<continuous::CdfKnot> knots;
  std::vector<continuous::Atom> atoms;
  if (j.contains("knots"))
    for (const auto& k : j.at("knots"))
      knots.push_back({k.at(0).get<double>(), k.at(1).get<double>()});
  if (j.contains("atoms"))
    for (const auto& a : j.at("atoms"))
      atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
  return continuous::ShapingCdf(std::move(knots), std::move(atoms), tol);
}

json shaping_cdf_to_json(const continuous::ShapingCdf& cdf) {
  json j;
  json knots = json::array();
  for (const auto& k : cdf.knots()) knots.push_back({k.x, k.f});
  json atoms = json::array();
  for (const auto& a : cdf.atoms()) atoms.push_back({a.x, a.mass});
  j["knots"] = knots;
  j["atoms"] = atoms;
  return j;
}

continuous::FiniteStateModel finite_state_model_from_json(const json& j, double tol) {
  if (!j.is_object() || !j.contains("initial"))
    throw ValidationError("model JSON needs at least an 'initial' law");
  const std::size_t order = j.value("order", 0);
  std::vector<double> states;
  if (j.contains("states")) states = j.at("states").get<std::vector<double>>();
  continuous::ShapingCdf initial = shaping_cdf_from_json(j.at("initial"), tol);
  std::map<std::string, continuous::ShapingCdf> table;
  if (j.contains("conditional"))
    for (const auto& [key, value] : j.at("conditional").items())
      table.emplace(key, shaping_cdf_from_json(value, tol));
  return continuous::FiniteStateModel(order, std::move(states), std::move(initial),
                                      std::move(table), tol);
}

json verdict_to_json(const causal::CausalVerdict& v) {
  json j;
  j["direction"] = causal::to_string(v.direction);
  j["h_e_forward"] = v.h_e_forward;
  j["h_e_backward"] = v.h_e_backward;
  j["statistic"] = causal::to_string(v.statistic);
  j["margin"] = v.margin;
  j["warnings"] = v.warnings;
  return j;
}

json plan_to_json(const ikea::PartitionPlan& plan, std::size_t columns) {
  json j;
  j["coupling"] = coupling_to_json(plan.coupling);
  j["assignment"] = plan.assignment;
  j["column_loads"] = plan.column_loads;
  j["residue"] = plan.residue;
  j["columns"] = columns;
  j["shelves"] = plan.coupling.output.size();
  return j;
}

}  // namespace innokit::io
