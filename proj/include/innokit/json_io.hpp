#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "innokit/causal.hpp"
#include "innokit/ikea.hpp"
#include "innokit/innovation.hpp"
#include "innokit/lossy.hpp"
#include "innokit/mec.hpp"
#include "innokit/pmf.hpp"
#include "innokit/shaping_cdf.hpp"

namespace innokit::io {

using json = nlohmann::ordered_json;

json read_json_file(const std::string& path);

// {"masses": [...], "labels": [...]} — labels optional.
Pmf pmf_from_json(const json& j, double tol = kDefaultTol);
json pmf_to_json(const Pmf& p);

// A marginal set is a JSON list of pmfs.
mec::MarginalSet marginals_from_json(const json& j, double tol = kDefaultTol);

json coupling_to_json(const mec::Coupling& c);
json box_bounds_to_json(const mec::BoxBounds& b);
json channel_to_json(const lossy::BinaryChannel& ch);

// {"alphas": [...], "gammas": [...]}
lossy::MarkovSpec markov_spec_from_json(const json& j, double tol = kDefaultTol);

// {"knots": [[x, f], ...], "atoms": [[x, mass], ...]}
continuous::ShapingCdf shaping_cdf_from_json(const json& j, double tol = kDefaultTol);
json shaping_cdf_to_json(const continuous::ShapingCdf& cdf);

// {"order": r, "states": [...], "initial": {cdf}, "conditional": {"0": {cdf}, ...}}
continuous::FiniteStateModel finite_state_model_from_json(const json& j,
                                                          double tol = kDefaultTol);

json verdict_to_json(const causal::CausalVerdict& v);
json plan_to_json(const ikea::PartitionPlan& plan, std::size_t columns);

}  // namespace innokit::io
