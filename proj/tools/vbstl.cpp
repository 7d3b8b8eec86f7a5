// vbstl: temporal-logic monitoring, specification translation and
// falsification from the command line.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vbstl/falsify.hpp"
#include "vbstl/graph_exec.hpp"
#include "vbstl/laws.hpp"
#include "vbstl/parser.hpp"
#include "vbstl/robust_eval.hpp"
#include "vbstl/transform.hpp"

namespace {

using nlohmann::json;
using namespace vbstl;

std::map<std::string, std::string> parse_param_list(const std::vector<std::string>& raw) {
  std::map<std::string, std::string> params;
  for (const auto& entry : raw) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::runtime_error("--param expects NAME=VALUE, got '" + entry + "'");
    }
    params[entry.substr(0, eq)] = entry.substr(eq + 1);
  }
  return params;
}

struct MonitorArgs {
  std::string spec_path;
  std::string trace_path;
  std::string semantics = "max";
  std::size_t at = 0;
  std::vector<std::string> params;
  bool json_output = false;
  double eq_constant = 100.0;
  double implication_scale = 10.0;
  double magnitude = 100.0;
  std::uint64_t seed = 0;
};

int run_monitor(const MonitorArgs& args) {
  const FormulaPtr formula =
      parse_spec_file(args.spec_path, parse_param_list(args.params));
  const Trace trace = read_trace_csv_file(args.trace_path);

  SemanticsConfig cfg;
  cfg.default_connective = semantics_mode_from_string(args.semantics);
  cfg.eq_constant = args.eq_constant;
  cfg.implication_scale = args.implication_scale;
  cfg.constant_magnitude = args.magnitude;
  cfg.rng_seed = args.seed;

  const VBool verdict = eval_robust(formula, trace, args.at, cfg);
  const double signed_rob = signed_robustness(verdict);

  if (args.json_output) {
    json out;
    out["formula"] = to_string(formula);
    out["semantics"] = to_string(cfg.default_connective);
    out["at"] = args.at;
    out["truth"] = verdict.truth;
    out["robustness"] = verdict.robustness;
    out["signed"] = signed_rob;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "formula:    " << to_string(formula) << "\n";
    std::cout << "semantics:  " << to_string(cfg.default_connective) << "\n";
    std::cout << "truth:      " << (verdict.truth ? "true" : "false") << "\n";
    std::cout << "robustness: " << verdict.robustness << "\n";
    std::cout << "signed:     " << signed_rob << "\n";
  }
  return verdict.truth ? 0 : 1;
}

struct TranslateArgs {
  std::string graph_path;
  std::string mode = "auto";
  std::string encoding = "implicative";
  double horizon = std::numeric_limits<double>::quiet_NaN();
  std::size_t samples = 0;
  std::size_t entry_limit = 4096;
  bool json_output = false;
};

int run_translate(const TranslateArgs& args) {
  const BlockGraph graph = load_block_graph_file(args.graph_path);
  TranslateOptions options;
  options.loop_mode = loop_mode_from_string(args.mode);
  options.encoding = switch_encoding_from_string(args.encoding);
  options.horizon = args.horizon;
  options.unroll_samples = args.samples;
  options.entry_limit = args.entry_limit;
  const TranslationResult result = translate(graph, options);

  if (args.json_output) {
    json out;
    out["formula"] = to_string(result.formula);
    out["manifest"] = json::array();
    for (const auto& entry : result.manifest) {
      out["manifest"].push_back({{"signal", entry.signal},
                                 {"block", entry.block},
                                 {"reason", to_string(entry.reason)}});
    }
    out["warnings"] = result.warnings;
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::cout << to_string(result.formula) << "\n";
  if (!result.manifest.empty()) {
    std::cout << "\nlogged signals:\n";
    for (const auto& entry : result.manifest) {
      std::cout << "  " << entry.signal << "  (block " << entry.block << ", "
                << to_string(entry.reason) << ")\n";
    }
  }
  for (const auto& warning : result.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
  return 0;
}

struct FalsifyArgs {
  std::string config_path;
  std::string results_path;
  std::string summary_path;
  std::string trace_dir;
  std::size_t jobs = 1;
};

int run_falsify(const FalsifyArgs& args) {
  const Campaign campaign = load_campaign_file(args.config_path);
  const Falsifier falsifier(campaign);
  const CampaignOutcome outcome = falsifier.run_campaign(args.jobs);

  if (!args.results_path.empty()) {
    std::ofstream out(args.results_path);
    if (!out) throw std::runtime_error("cannot open '" + args.results_path + "'");
    write_results_csv(outcome, campaign.seed, out);
  } else {
    write_results_csv(outcome, campaign.seed, std::cout);
    std::cout << "\n";
  }
  if (!args.summary_path.empty()) {
    std::ofstream out(args.summary_path);
    if (!out) throw std::runtime_error("cannot open '" + args.summary_path + "'");
    write_summary_csv(outcome.summary, out);
  }
  if (!args.trace_dir.empty()) {
    std::filesystem::create_directories(args.trace_dir);
    for (std::size_t i = 0; i < outcome.runs.size(); ++i) {
      if (outcome.runs[i].falsifying_trace) {
        const std::string path =
            args.trace_dir + "/run" + std::to_string(i) + ".csv";
        write_trace_csv_file(*outcome.runs[i].falsifying_trace, path);
      }
    }
  }
  write_summary_table(outcome.summary, std::cout);
  return 0;
}

int run_laws(std::size_t trials, std::uint64_t seed) {
  const auto reports = check_vbool_laws(trials, seed);
  std::size_t width = 0;
  for (const auto& r : reports) width = std::max(width, r.name.size());
  for (const auto& r : reports) {
    std::string line = r.name;
    line.resize(width + 2, ' ');
    std::cout << line << (r.passed() ? "ok" : "FAILED") << "  (" << r.trials
              << " trials, " << r.failures << " failures)\n";
  }
  return all_passed(reports) ? 0 : 1;
}

int run_fig5(const std::string& out_path, const std::string& isobar_path,
             std::size_t grid) {
  std::ostringstream csv;
  csv << "trace,max_signed,additive_signed\n";
  for (const auto& row : semantics_ordering_demo()) {
    csv << row.trace << ',' << row.max_signed << ',' << row.additive_signed << "\n";
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open '" + out_path + "'");
    out << csv.str();
  }
  if (!isobar_path.empty()) {
    std::ofstream out(isobar_path);
    if (!out) throw std::runtime_error("cannot open '" + isobar_path + "'");
    out << "x,y,max_signed,additive_signed\n";
    for (const auto& p : isobar_grid(-5.0, 5.0, grid)) {
      out << p.x << ',' << p.y << ',' << p.max_signed << ',' << p.additive_signed
          << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Valued-Boolean STL monitoring, translation and falsification"};
  app.require_subcommand(1);

  MonitorArgs monitor_args;
  auto* monitor = app.add_subcommand(
      "monitor", "Evaluate a specification against a trace CSV");
  monitor->add_option("--spec", monitor_args.spec_path, "Spec file")->required();
  monitor->add_option("--trace", monitor_args.trace_path, "Trace CSV")->required();
  monitor->add_option("--semantics", monitor_args.semantics,
                      "max | additive | constant | random");
  monitor->add_option("--at", monitor_args.at, "Evaluation sample index");
  monitor->add_option("--param", monitor_args.params,
                      "Spec parameter NAME=VALUE (repeatable)");
  monitor->add_flag("--json", monitor_args.json_output, "Machine-readable output");
  monitor->add_option("--eq-constant", monitor_args.eq_constant,
                      "Robustness of equality comparisons");
  monitor->add_option("--implication-scale", monitor_args.implication_scale,
                      "Antecedent scale of additive implication");
  monitor->add_option("--magnitude", monitor_args.magnitude,
                      "Constant-semantics robustness magnitude");
  monitor->add_option("--seed", monitor_args.seed, "Random-semantics seed");

  TranslateArgs translate_args;
  auto* translate_cmd = app.add_subcommand(
      "translate", "Compile a block-graph specification into a formula");
  translate_cmd->add_option("--graph", translate_args.graph_path, "Graph JSON")
      ->required();
  translate_cmd->add_option("--mode", translate_args.mode,
                            "auto | templates | unroll | blackbox");
  translate_cmd->add_option("--encoding", translate_args.encoding,
                            "disjunctive | implicative");
  translate_cmd->add_option("--horizon", translate_args.horizon,
                            "Simulation horizon (unroll / windowed templates)");
  translate_cmd->add_option("--samples", translate_args.samples,
                            "Sample count for unroll mode");
  translate_cmd->add_option("--entry-limit", translate_args.entry_limit,
                            "Table entry limit");
  translate_cmd->add_flag("--json", translate_args.json_output,
                          "Machine-readable output");

  FalsifyArgs falsify_args;
  auto* falsify_cmd =
      app.add_subcommand("falsify", "Run a falsification campaign");
  falsify_cmd->add_option("--config", falsify_args.config_path, "Campaign JSON")
      ->required();
  falsify_cmd->add_option("--out", falsify_args.results_path,
                          "Per-run results CSV (default: stdout)");
  falsify_cmd->add_option("--summary-out", falsify_args.summary_path,
                          "Summary CSV path");
  falsify_cmd->add_option("--save-traces", falsify_args.trace_dir,
                          "Directory for falsifying traces");
  falsify_cmd->add_option("--jobs", falsify_args.jobs, "Parallel runs");

  std::size_t law_trials = 100000;
  std::uint64_t law_seed = 0;
  auto* laws_cmd =
      app.add_subcommand("laws", "Run the connective-law property suite");
  laws_cmd->add_option("--trials", law_trials, "Random trials per law");
  laws_cmd->add_option("--seed", law_seed, "Generator seed");

  std::string fig5_out, fig5_isobars;
  std::size_t fig5_grid = 41;
  auto* fig5_cmd = app.add_subcommand(
      "fig5", "Emit the semantics-ordering demo (and optional isobar grid) as CSV");
  fig5_cmd->add_option("--out", fig5_out, "Ordering CSV path (default: stdout)");
  fig5_cmd->add_option("--isobars", fig5_isobars, "Isobar grid CSV path");
  fig5_cmd->add_option("--grid", fig5_grid, "Isobar grid points per axis");

  CLI11_PARSE(app, argc, argv);

  try {
    if (monitor->parsed()) return run_monitor(monitor_args);
    if (translate_cmd->parsed()) return run_translate(translate_args);
    if (falsify_cmd->parsed()) return run_falsify(falsify_args);
    if (laws_cmd->parsed()) return run_laws(law_trials, law_seed);
    if (fig5_cmd->parsed()) return run_fig5(fig5_out, fig5_isobars, fig5_grid);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
