#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "vbstl/formula.hpp"
#include "vbstl/robust_eval.hpp"
#include "vbstl/sut.hpp"
#include "vbstl/transform.hpp"

namespace vbstl {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct OptimizerSettings {
  double initial_temperature = 1.0;
  double cooling = 0.97;            // geometric, applied per iteration
  std::size_t restart_after = 100;  // stagnant iterations before a restart
};

/// A falsification campaign: a model, a specification (parsed formula), the
/// robustness semantics, and the budget/repetition protocol.
struct Campaign {
  std::string model_name;
  std::map<std::string, double> model_params;

  // External models only.
  std::string external_command;
  std::vector<InputParam> external_inputs;
  double external_horizon = 0.0;
  double external_step = 0.0;

  std::string spec_path;  // exactly one of spec_path / graph_path
  std::map<std::string, std::string> spec_params;
  std::string graph_path;
  LoopMode graph_loop_mode = LoopMode::Auto;
  SwitchEncoding graph_encoding = SwitchEncoding::Implicative;

  SemanticsConfig semantics;
  std::size_t max_iterations = 1000;
  std::size_t repetitions = 20;
  std::uint64_t seed = 0;
  OptimizerSettings optimizer;
};

Campaign load_campaign_file(const std::string& path);
Campaign load_campaign_text(const std::string& json_text,
                            const std::string& base_dir = ".");

struct RunResult {
  bool falsified = false;
  std::size_t iterations_used = 0;
  std::vector<double> best_point;
  double best_signed_robustness = 0.0;
  std::size_t failed_simulations = 0;
  std::optional<Trace> falsifying_trace;
};

struct CampaignSummary {
  std::size_t succ = 0;
  std::size_t repetitions = 0;
  double iter_mean = 0.0;                 // over all runs
  std::optional<double> iter_per_succ;    // over successful runs; "-" when none

  std::string iter_per_succ_text() const;
};

struct CampaignOutcome {
  std::vector<RunResult> runs;
  CampaignSummary summary;
  std::vector<std::string> parameter_labels;
};

CampaignSummary summarize(const std::vector<RunResult>& runs);

/// Gaussian proposal with per-dimension sigma = temperature * range width,
/// reflected into the box. Zero temperature returns the current point.
std::vector<double> anneal_step(std::span<const double> current, double temperature,
                                std::span<const double> lower, std::span<const double> upper,
                                std::mt19937_64& rng);

/// Metropolis rule on the objective difference: improvements are always
/// accepted, a zero difference is accepted with probability one, and a
/// worsening of delta is accepted when u < exp(-delta / temperature)
/// (u uniform in [0, 1)).
bool metropolis_accept(double delta, double temperature, double u);

/// Owns the resolved model + formula for one campaign and runs the annealing
/// loop. Runs are deterministic functions of their seed; one simulation is
/// one iteration (failed simulations consume budget and are logged); the
/// search stops at the first false verdict.
class Falsifier {
public:
  explicit Falsifier(const Campaign& campaign);

  const FormulaPtr& formula() const { return formula_; }
  const SutModel& model() const { return *model_; }
  const std::vector<std::string>& labels() const { return labels_; }

  RunResult falsify_once(std::uint64_t run_seed) const;
  /// repetitions runs with seeds seed+0 .. seed+R-1, aggregated in run order.
  /// jobs > 1 distributes runs over threads (results stay ordered).
  CampaignOutcome run_campaign(std::size_t jobs = 1) const;

private:
  Campaign campaign_;
  std::unique_ptr<SutModel> model_;
  FormulaPtr formula_;
  std::vector<InputParam> params_;
  std::vector<std::string> labels_;
  std::vector<double> lower_;
  std::vector<double> upper_;
};

/// One row per run: run,seed,falsified,iterations,failed_simulations,
/// best_objective,<parameter labels...>.
void write_results_csv(const CampaignOutcome& outcome, std::uint64_t base_seed,
                       std::ostream& out);
/// Succ / Iter / Iter-per-Succ, matching the campaign summary conventions.
void write_summary_csv(const CampaignSummary& summary, std::ostream& out);
void write_summary_table(const CampaignSummary& summary, std::ostream& out);

}  // namespace vbstl
