// innokit: innovation representations of stochastic processes.
//
// Exit codes: 0 success, 1 validation error (bad flags, files, inputs),
// 2 infeasible request or exhausted work limit.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "innokit/causal.hpp"
#include "innokit/ikea.hpp"
#include "innokit/innovation.hpp"
#include "innokit/json_io.hpp"
#include "innokit/lossy.hpp"
#include "innokit/mec.hpp"
#include "innokit/pmf.hpp"

namespace {

using innokit::io::json;

struct RunConfig {
  double tolerance = innokit::kDefaultTol;
  innokit::RngSeed seed = 0;
  std::uint64_t work_limit = innokit::kDefaultWorkLimit;
  std::string output_format = "json";
};

void apply_config_file(RunConfig& cfg, const std::string& path) {
  const json j = innokit::io::read_json_file(path);
  cfg.tolerance = j.value("tolerance", cfg.tolerance);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.work_limit = j.value("work_limit", cfg.work_limit);
  cfg.output_format = j.value("output_format", cfg.output_format);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void emit_csv(const json& j, std::ostream& out, const std::string& prefix = "") {
  // flattened key,value rows; containers recurse with dotted keys
  if (j.is_object()) {
    for (const auto& [key, value] : j.items())
      emit_csv(value, out, prefix.empty() ? key : prefix + "." + key);
  } else if (j.is_array()) {
    std::size_t i = 0;
    for (const auto& value : j) emit_csv(value, out, prefix + "." + std::to_string(i++));
  } else if (j.is_number_float()) {
    out << prefix << "," << format_double(j.get<double>()) << "\n";
  } else {
    out << prefix << "," << j.dump() << "\n";
  }
}

void emit(const json& j, const RunConfig& cfg) {
  if (cfg.output_format == "csv")
    emit_csv(j, std::cout);
  else
    std::cout << j.dump(2) << "\n";
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  return rows;
}

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

// Numeric single/multi-column samples; a non-numeric first row is a header.
std::vector<std::vector<double>> read_numeric_csv(std::istream& in) {
  auto rows = read_csv(in);
  std::vector<std::vector<double>> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<double> values(rows[r].size());
    bool numeric = true;
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      numeric = numeric && parse_double(rows[r][c], values[c]);
    if (!numeric) {
      if (r == 0) continue;  // header
      throw innokit::ValidationError("non-numeric value on data row " + std::to_string(r + 1));
    }
    out.push_back(std::move(values));
  }
  return out;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw innokit::ValidationError("cannot open file: " + path);
  return f;
}

int run_continuous(const std::string& verb, const std::string& model_path,
                   const std::string& target_path, const std::string& input_path,
                   const std::string& output_path, const RunConfig& cfg) {
  const innokit::continuous::FiniteStateModel model =
      innokit::io::finite_state_model_from_json(innokit::io::read_json_file(model_path),
                                                cfg.tolerance);
  const innokit::continuous::ShapingCdf target = innokit::io::shaping_cdf_from_json(
      innokit::io::read_json_file(target_path), cfg.tolerance);

  std::ifstream file_in;
  if (!input_path.empty()) file_in = open_or_throw(input_path);
  std::istream& in = input_path.empty() ? std::cin : file_in;
  std::ofstream file_out;
  if (!output_path.empty()) {
    file_out.open(output_path);
    if (!file_out) throw innokit::ValidationError("cannot open file: " + output_path);
  }
  std::ostream& out = output_path.empty() ? std::cout : file_out;

  const auto table = read_numeric_csv(in);
  if (verb == "innovate") {
    std::vector<double> xs;
    for (const auto& row : table) {
      if (row.empty()) continue;
      xs.push_back(row[0]);
    }
    const auto result = innokit::continuous::innovate(xs, model, target, cfg.seed);
    out << "# seed=" << cfg.seed << "\n";
    if (result.used_atoms) {
      out << "y,theta\n";
      for (std::size_t k = 0; k < result.ys.size(); ++k)
        out << format_double(result.ys[k]) << "," << format_double(result.thetas[k]) << "\n";
    } else {
      out << "y\n";
      for (double y : result.ys) out << format_double(y) << "\n";
    }
  } else {
    std::vector<double> ys, thetas;
    for (const auto& row : table) {
      if (row.empty()) continue;
      ys.push_back(row[0]);
      if (row.size() > 1) thetas.push_back(row[1]);
    }
    if (!thetas.empty() && thetas.size() != ys.size())
      throw innokit::ValidationError("theta column is present on only some rows");
    const auto xs = innokit::continuous::recover(ys, model, target, thetas);
    out << "x\n";
    for (double x : xs) out << format_double(x) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"innovation representations of stochastic processes"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  RunConfig cfg;
  if (const char* env = std::getenv("INNOKIT_WORK_LIMIT")) {
    try {
      cfg.work_limit = std::stoull(env);
    } catch (...) {
      std::cerr << "invalid INNOKIT_WORK_LIMIT value\n";
      return 1;
    }
  }
  std::string config_path;
  app.add_option("--config", config_path, "JSON file overriding run configuration");
  app.add_option("--tolerance", cfg.tolerance, "absolute probability tolerance");
  app.add_option("--seed", cfg.seed, "seed for randomized operations");
  app.add_option("--work-limit", cfg.work_limit, "enumeration work limit");
  app.add_option("--output-format", cfg.output_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  // continuous
  auto* continuous_cmd =
      app.add_subcommand("continuous", "exact innovation for continuous/mixed laws");
  std::string cont_verb, model_path, target_path, cont_in, cont_out;
  continuous_cmd->add_option("verb", cont_verb, "innovate or recover")
      ->required()
      ->check(CLI::IsMember({"innovate", "recover"}));
  continuous_cmd->add_option("--model", model_path, "conditional model JSON")->required();
  continuous_cmd->add_option("--target", target_path, "target law JSON")->required();
  continuous_cmd->add_option("--input", cont_in, "input CSV (default stdin)");
  continuous_cmd->add_option("--output", cont_out, "output CSV (default stdout)");

  // lossy
  auto* lossy_cmd =
      app.add_subcommand("lossy", "best memoryless approximation of binary Markov sources");
  lossy_cmd->require_subcommand(1);
  auto* markov1_cmd = lossy_cmd->add_subcommand("markov1", "first-order chain");
  double alpha1 = 0.0, alpha2 = 0.0, gamma = 0.5;
  bool stationary = false;
  markov1_cmd->add_option("--alpha1", alpha1, "P(X=0 | prev=0)")->required();
  markov1_cmd->add_option("--alpha2", alpha2, "P(X=0 | prev=1)")->required();
  auto* gamma_opt = markov1_cmd->add_option("--gamma", gamma, "P(prev=0)");
  markov1_cmd->add_flag("--stationary", stationary, "use the stationary history weight");
  auto* markovr_cmd = lossy_cmd->add_subcommand("markov-r", "r-order chain from a spec file");
  std::string spec_path;
  markovr_cmd->add_option("--spec", spec_path, "JSON {alphas, gammas}")->required();

  // mec
  auto* mec_cmd = app.add_subcommand("mec", "minimum entropy coupling");
  std::string mec_verb, marginals_path;
  std::size_t b_flag = 0;
  mec_cmd->add_option("verb", mec_verb, "greedy, exact or bound")
      ->required()
      ->check(CLI::IsMember({"greedy", "exact", "bound"}));
  mec_cmd->add_option("--marginals", marginals_path, "JSON list of pmfs")->required();
  mec_cmd->add_option("--B", b_flag, "output cardinality (default R(A-1)+1)");

  // causal
  auto* causal_cmd =
      app.add_subcommand("causal", "entropic causal direction from paired samples");
  std::string pairs_path, method_name = "auto", statistic_name = "entropy-of-e",
              smoothing_name;
  causal_cmd->add_option("--input", pairs_path, "CSV with header and two columns")->required();
  causal_cmd->add_option("--method", method_name, "greedy, exact or auto")
      ->check(CLI::IsMember({"greedy", "exact", "auto"}));
  causal_cmd->add_option("--statistic", statistic_name, "entropy-of-e or entropy-plus-cause")
      ->check(CLI::IsMember({"entropy-of-e", "entropy-plus-cause"}));
  causal_cmd->add_option("--smoothing", smoothing_name, "add-one")
      ->check(CLI::IsMember({"add-one"}));

  // ikea
  auto* ikea_cmd = app.add_subcommand("ikea", "rectangular storage-unit design");
  std::string customers_path;
  std::size_t columns = 0, shelves = 0;
  double epsilon = 1e-9;
  ikea_cmd->add_option("--customers", customers_path, "JSON list of pmfs")->required();
  ikea_cmd->add_option("--columns", columns, "number of columns L")->required();
  auto* shelves_opt = ikea_cmd->add_option("--shelves", shelves, "fixed shelf count N");
  auto* epsilon_opt = ikea_cmd->add_option("--epsilon", epsilon, "residue target for min shelves");

  try {
    app.parse(argc, argv);
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    if (cfg.tolerance <= 0.0) throw innokit::ValidationError("tolerance must be positive");
    if (cfg.work_limit == 0) throw innokit::ValidationError("work_limit must be positive");

    if (continuous_cmd->parsed())
      return run_continuous(cont_verb, model_path, target_path, cont_in, cont_out, cfg);

    if (markov1_cmd->parsed()) {
      json out;
      out["alpha1"] = alpha1;
      out["alpha2"] = alpha2;
      double beta;
      if (stationary) {
        if (*gamma_opt) throw innokit::ValidationError("--gamma and --stationary are exclusive");
        const double g = innokit::lossy::stationary_weight(alpha1, alpha2);
        beta = innokit::lossy::stationary_optimal_beta(alpha1, alpha2);
        out["gamma"] = g;
        out["beta_opt"] = beta;
        out["mi"] = innokit::lossy::markov1_objective(alpha1, alpha2, g, beta);
      } else {
        const auto choice = innokit::lossy::markov1_optimal_beta(alpha1, alpha2, gamma);
        beta = choice.beta;
        out["gamma"] = gamma;
        out["beta_opt"] = choice.beta;
        out["mi"] = choice.mi;
      }
      json channels = json::array();
      for (double a : {alpha1, alpha2})
        channels.push_back(
            innokit::io::channel_to_json(innokit::lossy::max_mi_binary(a, beta)));
      out["channel"] = channels;
      emit(out, cfg);
      return 0;
    }

    if (markovr_cmd->parsed()) {
      const auto spec = innokit::io::markov_spec_from_json(
          innokit::io::read_json_file(spec_path), cfg.tolerance);
      const auto choice = innokit::lossy::optimal_beta(spec);
      json out;
      out["beta_opt"] = choice.beta;
      out["mi"] = choice.mi;
      emit(out, cfg);
      return 0;
    }

    if (mec_cmd->parsed()) {
      const auto set = innokit::io::marginals_from_json(
          innokit::io::read_json_file(marginals_path), cfg.tolerance);
      const std::size_t b =
          b_flag > 0 ? b_flag
                     : innokit::mec::min_output_cardinality(set.cardinality(),
                                                            set.source_count());
      json out;
      if (mec_verb == "greedy") {
        out = innokit::io::coupling_to_json(innokit::mec::greedy_mec(set, cfg.tolerance));
      } else if (mec_verb == "exact") {
        out = innokit::io::coupling_to_json(
            innokit::mec::exhaustive_mec(set, b, cfg.work_limit, cfg.tolerance));
      } else {
        const auto bounds = innokit::mec::beta_bounds(set, b, cfg.work_limit, cfg.tolerance);
        const auto beta = innokit::mec::min_entropy_box(bounds, cfg.tolerance);
        out = innokit::io::box_bounds_to_json(bounds);
        out["B"] = b;
        out["beta"] = beta.masses();
        out["entropy"] = innokit::entropy(beta);
      }
      emit(out, cfg);
      return 0;
    }

    if (causal_cmd->parsed()) {
      auto file = open_or_throw(pairs_path);
      auto rows = read_csv(file);
      if (rows.size() < 2)
        throw innokit::ValidationError("pairs CSV needs a header row and data rows");
      std::vector<std::pair<std::string, std::string>> pairs;
      for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != 2)
          throw innokit::ValidationError("pairs CSV row " + std::to_string(r + 1) +
                                         " does not have two columns");
        pairs.emplace_back(rows[r][0], rows[r][1]);
      }
      const auto table = innokit::causal::estimate_joint(pairs);
      const auto method = method_name == "greedy"  ? innokit::causal::Method::Greedy
                          : method_name == "exact" ? innokit::causal::Method::Exact
                                                   : innokit::causal::Method::Auto;
      const auto statistic = statistic_name == "entropy-plus-cause"
                                 ? innokit::causal::Statistic::EntropyPlusCause
                                 : innokit::causal::Statistic::EntropyOfE;
      const auto verdict = innokit::causal::infer_direction(
          table, method, statistic, smoothing_name == "add-one", 1e-6, cfg.work_limit,
          cfg.tolerance);
      emit(innokit::io::verdict_to_json(verdict), cfg);
      return 0;
    }

    if (ikea_cmd->parsed()) {
      const auto set = innokit::io::marginals_from_json(
          innokit::io::read_json_file(customers_path), cfg.tolerance);
      if (*shelves_opt && *epsilon_opt)
        throw innokit::ValidationError("--shelves and --epsilon are exclusive");
      std::size_t n = shelves;
      if (!*shelves_opt)
        n = innokit::ikea::min_shelves(set, columns, epsilon, cfg.work_limit, cfg.tolerance);
      const auto plan =
          innokit::ikea::best_partition(set, columns, n, cfg.work_limit, cfg.tolerance);
      emit(innokit::io::plan_to_json(plan, columns), cfg);
      return 0;
    }

    std::cerr << app.help() << "\n";
    return 1;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const innokit::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const innokit::WorkLimitError& e) {
    std::cerr << "work limit: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
