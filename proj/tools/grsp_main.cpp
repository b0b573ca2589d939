#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "grsp/approx_optimizer.hpp"
#include "grsp/circuit.hpp"
#include "grsp/errors.hpp"
#include "grsp/exact_optimizer.hpp"
#include "grsp/fidelity_bound.hpp"
#include "grsp/harness.hpp"
#include "grsp/simulator.hpp"
#include "grsp/state.hpp"

namespace {

using nlohmann::json;

int exit_code_for(grsp::ErrorCategory category) {
  switch (category) {
    case grsp::ErrorCategory::io_error:
      return 4;
    case grsp::ErrorCategory::internal:
      return 5;
    default:
      return 3;
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) grsp::fail(grsp::ErrorCategory::io_error, "cannot write file: " + path);
  out << text;
}

json merge_log_json(const std::vector<grsp::MergeEvent>& log) {
  json events = json::array();
  for (const auto& event : log) {
    json before = json::array();
    for (const auto& pattern : event.before) before.push_back(pattern.trits());
    events.push_back({{"layer", event.layer},
                      {"kind", event.kind == grsp::MoveKind::strip ? "STRIP" : "NEIGHBOR"},
                      {"before", before},
                      {"after", event.after.trits()}});
  }
  return events;
}

json accepted_log_json(const std::vector<grsp::AcceptedMove>& log) {
  json events = json::array();
  for (const auto& move : log) {
    json sources = json::array();
    sources.push_back(move.candidate.source_a.trits());
    if (move.candidate.kind == grsp::MoveKind::neighbor)
      sources.push_back(move.candidate.source_b.trits());
    events.push_back({{"layer", move.candidate.layer},
                      {"kind", move.candidate.kind == grsp::MoveKind::strip ? "STRIP" : "NEIGHBOR"},
                      {"sources", sources},
                      {"result", move.candidate.result.trits()},
                      {"theta", move.candidate.theta},
                      {"f_est", move.f_est_after}});
  }
  return events;
}

struct PipelineInputs {
  grsp::SparseState state;
  grsp::PreparationTree tree;
  grsp::BaselineCircuit baseline;
};

PipelineInputs load_inputs(const std::string& state_path) {
  PipelineInputs inputs;
  inputs.state = grsp::read_state_file(state_path);
  inputs.tree = grsp::build_preparation_tree(inputs.state);
  inputs.baseline = grsp::compute_baseline_angles(inputs.tree);
  return inputs;
}

int run(int argc, char** argv) {
  CLI::App app{"Grover-Rudolph sparse state preparation compiler"};
  app.require_subcommand(1);
  std::string emit_log;
  app.add_option("--emit-log", emit_log, "write the optimizer move log to this JSON file");

  // prepare
  auto* prepare = app.add_subcommand("prepare", "synthesize the unoptimized circuit for a state");
  std::string prepare_state, prepare_out;
  prepare->add_option("state-file", prepare_state, "target state (text or JSON)")->required();
  prepare->add_option("--out", prepare_out, "circuit JSON output path");

  // optimize-exact
  auto* exact = app.add_subcommand("optimize-exact", "strip and merge without changing the state");
  std::string exact_state, exact_out;
  exact->add_option("state-file", exact_state, "target state (text or JSON)")->required();
  exact->add_option("--out", exact_out, "circuit JSON output path");

  // optimize-approx
  auto* approx = app.add_subcommand("optimize-approx", "merge within a fidelity budget");
  std::string approx_state, approx_out;
  double f_min = 0.95;
  int intervals = 20;
  approx->add_option("state-file", approx_state, "target state (text or JSON)")->required();
  approx->add_option("--fmin", f_min, "minimum allowed overlap, in (0, 1]")->required();
  approx->add_option("--intervals", intervals, "number of threshold intervals (M)");
  approx->add_option("--out", approx_out, "circuit JSON output path");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "apply a circuit JSON to |0...0>");
  std::string sim_circuit, sim_out, sim_format = "text";
  simulate->add_option("circuit-file", sim_circuit, "circuit JSON path")->required();
  simulate->add_option("--out", sim_out, "state output path (stdout when omitted)");
  simulate->add_option("--format", sim_format, "state output format: text | json")
      ->check(CLI::IsMember({"text", "json"}));

  // experiment
  auto* experiment = app.add_subcommand("experiment", "run a benchmark sweep and write CSV");
  std::string experiment_name, experiment_out;
  grsp::ExperimentConfig config;
  double sparsity = 0.0;
  std::uint64_t support = 0;
  experiment
      ->add_option("id", experiment_name,
                   "merge_ratio | cost_comparison | estimator_gap | approx_vs_exact | m_sweep")
      ->required();
  experiment->add_option("--n", config.n, "qubit count");
  auto* sparsity_opt = experiment->add_option("--sparsity", sparsity, "fixed sparsity D = d / 2^n");
  auto* support_opt = experiment->add_option("--d", support, "fixed support size (overrides --sparsity)");
  experiment->add_option("--fmin", config.f_min, "minimum allowed overlap");
  experiment->add_option("--intervals", config.intervals, "number of threshold intervals (M)");
  experiment->add_option("--reps", config.repetitions, "repetitions per parameter point");
  experiment->add_option("--seed", config.seed, "master seed");
  experiment->add_option("--out", experiment_out, "CSV output path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  if (prepare->parsed()) {
    auto inputs = load_inputs(prepare_state);
    const grsp::Circuit circuit = grsp::to_circuit(inputs.baseline);
    const auto cost = grsp::circuit_cost(circuit);
    if (!prepare_out.empty()) grsp::write_circuit_file(circuit, prepare_out);
    json summary = {{"n", inputs.state.n},
                    {"d", inputs.state.support_size()},
                    {"singles_cnots", cost.total_singles_cnots},
                    {"ucr_only_cnots", grsp::ucr_only_cnots(inputs.baseline)}};
    std::cout << summary.dump(2) << "\n";
    if (prepare_out.empty()) std::cout << grsp::serialize_circuit(circuit);
    return 0;
  }

  if (exact->parsed()) {
    auto inputs = load_inputs(exact_state);
    const grsp::ExactResult result = grsp::optimize_exact(inputs.baseline, inputs.tree);
    if (!exact_out.empty()) grsp::write_circuit_file(result.optimized, exact_out);
    if (!emit_log.empty()) write_text_file(emit_log, merge_log_json(result.log).dump(2) + "\n");
    json summary = {{"n", inputs.state.n},
                    {"d", inputs.state.support_size()},
                    {"cnots", result.cost.total_cnots},
                    {"singles_cnots", result.cost.total_singles_cnots},
                    {"moves", result.log.size()}};
    std::cout << summary.dump(2) << "\n";
    if (exact_out.empty()) std::cout << grsp::serialize_circuit(result.optimized);
    return 0;
  }

  if (approx->parsed()) {
    auto inputs = load_inputs(approx_state);
    const grsp::ApproxResult result =
        grsp::optimize_approx(inputs.baseline, inputs.tree, f_min, intervals);
    if (!approx_out.empty()) grsp::write_circuit_file(result.optimized, approx_out);
    if (!emit_log.empty()) write_text_file(emit_log, accepted_log_json(result.accepted).dump(2) + "\n");
    const auto table = grsp::amplification_table(inputs.baseline, result.optimized, inputs.state);
    const double f_lb = grsp::lower_bound(result.clusters, table);
    const double f_true = grsp::overlap(grsp::simulate(result.optimized), inputs.state);
    json summary = {{"n", inputs.state.n},
                    {"d", inputs.state.support_size()},
                    {"cnots", result.cost.total_cnots},
                    {"f_est", result.f_est},
                    {"f_lb", f_lb},
                    {"f_true", f_true},
                    {"accepted_moves", result.accepted.size()}};
    std::cout << summary.dump(2) << "\n";
    if (approx_out.empty()) std::cout << grsp::serialize_circuit(result.optimized);
    return 0;
  }

  if (simulate->parsed()) {
    const grsp::Circuit circuit = grsp::read_circuit_file(sim_circuit);
    const grsp::SparseState state = grsp::simulate(circuit);
    const bool as_json = sim_format == "json";
    if (!sim_out.empty())
      grsp::write_state_file(state, sim_out, as_json);
    else
      std::cout << (as_json ? grsp::to_json_text(state) : grsp::to_text(state));
    return 0;
  }

  if (experiment->parsed()) {
    const auto id = grsp::parse_experiment_id(experiment_name);
    if (!id)
      grsp::fail(grsp::ErrorCategory::invalid_argument,
                 "unknown experiment id: " + experiment_name);
    config.id = *id;
    if (*sparsity_opt) config.sparsity = sparsity;
    if (*support_opt) config.d = support;
    const std::string csv = grsp::run_experiment(config);
    if (!experiment_out.empty())
      write_text_file(experiment_out, csv);
    else
      std::cout << csv;
    return 0;
  }

  return 0;
}

} // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const grsp::Error& e) {
    json err = {{"error", {{"category", grsp::to_string(e.category())}, {"message", e.what()}}}};
    std::cerr << err.dump() << "\n";
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    json err = {{"error", {{"category", "internal"}, {"message", e.what()}}}};
    std::cerr << err.dump() << "\n";
    return 5;
  }
}
