#include "vbstl/falsify.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "vbstl/parser.hpp"

namespace vbstl {

namespace {

using nlohmann::json;

std::string resolve_path(const std::string& base_dir, const std::string& path) {
  namespace fs = std::filesystem;
  fs::path p(path);
  if (p.is_absolute()) return path;
  return (fs::path(base_dir) / p).string();
}

InputParam parse_input_param(const json& j) {
  InputParam p;
  p.name = j.at("name").get<std::string>();
  const std::string kind = j.value("kind", "constant");
  if (kind == "constant") {
    p.kind = InputParam::Kind::Constant;
    p.range = {j.at("range").at(0).get<double>(), j.at("range").at(1).get<double>()};
  } else if (kind == "control-points") {
    p.kind = InputParam::Kind::ControlPoints;
    p.points = j.at("points").get<std::size_t>();
    p.range = {j.at("range").at(0).get<double>(), j.at("range").at(1).get<double>()};
    const std::string interp = j.value("interpolation", "pchip");
    if (interp == "pchip") {
      p.interpolation = Interpolation::Pchip;
    } else if (interp == "linear") {
      p.interpolation = Interpolation::Linear;
    } else {
      throw ConfigError("unknown interpolation '" + interp + "'");
    }
  } else if (kind == "pulse") {
    p.kind = InputParam::Kind::Pulse;
    p.pulse_base = j.at("base").get<double>();
    p.pulse_delay = j.value("delay", 0.0);
    p.period_range = {j.at("period_range").at(0).get<double>(),
                      j.at("period_range").at(1).get<double>()};
    p.amplitude_range = {j.at("amplitude_range").at(0).get<double>(),
                         j.at("amplitude_range").at(1).get<double>()};
  } else {
    throw ConfigError("unknown input kind '" + kind + "'");
  }
  return p;
}

}  // namespace

Campaign load_campaign_text(const std::string& json_text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid campaign JSON: ") + e.what());
  }
  try {
    Campaign c;
    c.model_name = j.at("model").get<std::string>();
    if (j.contains("model_params")) {
      for (const auto& [key, value] : j.at("model_params").items()) {
        c.model_params[key] = value.get<double>();
      }
    }
    if (c.model_name == "external") {
      c.external_command = j.at("command").get<std::string>();
      for (const auto& ji : j.at("inputs")) {
        c.external_inputs.push_back(parse_input_param(ji));
      }
      c.external_horizon = j.at("horizon").get<double>();
      c.external_step = j.at("step").get<double>();
    }
    if (j.contains("spec")) {
      c.spec_path = resolve_path(base_dir, j.at("spec").get<std::string>());
    }
    if (j.contains("graph")) {
      c.graph_path = resolve_path(base_dir, j.at("graph").get<std::string>());
    }
    if (c.spec_path.empty() == c.graph_path.empty()) {
      throw ConfigError("campaign needs exactly one of 'spec' or 'graph'");
    }
    if (j.contains("params")) {
      for (const auto& [key, value] : j.at("params").items()) {
        c.spec_params[key] =
            value.is_string() ? value.get<std::string>() : value.dump();
      }
    }
    if (j.contains("mode")) {
      c.graph_loop_mode = loop_mode_from_string(j.at("mode").get<std::string>());
    }
    if (j.contains("encoding")) {
      c.graph_encoding = switch_encoding_from_string(j.at("encoding").get<std::string>());
    }
    c.semantics.default_connective =
        semantics_mode_from_string(j.value("semantics", "max"));
    c.semantics.eq_constant = j.value("eq_constant", 100.0);
    c.semantics.implication_scale = j.value("implication_scale", 10.0);
    c.semantics.constant_magnitude = j.value("constant_magnitude", 100.0);
    c.max_iterations = j.value("max_iterations", 1000u);
    c.repetitions = j.value("repetitions", 20u);
    c.seed = j.value("seed", 0u);
    c.semantics.rng_seed = c.seed;
    if (j.contains("optimizer")) {
      const auto& jo = j.at("optimizer");
      c.optimizer.initial_temperature =
          jo.value("initial_temperature", c.optimizer.initial_temperature);
      c.optimizer.cooling = jo.value("cooling", c.optimizer.cooling);
      c.optimizer.restart_after = jo.value("restart_after", c.optimizer.restart_after);
    }
    if (c.max_iterations < 1 || c.repetitions < 1) {
      throw ConfigError("max_iterations and repetitions must be at least 1");
    }
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid campaign document: ") + e.what());
  }
}

Campaign load_campaign_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open campaign file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_campaign_text(buf.str(),
                            std::filesystem::path(path).parent_path().string());
}

std::string CampaignSummary::iter_per_succ_text() const {
  if (!iter_per_succ) return "-";
  std::ostringstream out;
  out.precision(1);
  out << std::fixed << *iter_per_succ;
  return out.str();
}

CampaignSummary summarize(const std::vector<RunResult>& runs) {
  CampaignSummary s;
  s.repetitions = runs.size();
  double iter_sum = 0.0;
  double succ_iter_sum = 0.0;
  for (const auto& r : runs) {
    iter_sum += static_cast<double>(r.iterations_used);
    if (r.falsified) {
      ++s.succ;
      succ_iter_sum += static_cast<double>(r.iterations_used);
    }
  }
  s.iter_mean = runs.empty() ? 0.0 : iter_sum / static_cast<double>(runs.size());
  if (s.succ > 0) {
    s.iter_per_succ = succ_iter_sum / static_cast<double>(s.succ);
  }
  return s;
}

std::vector<double> anneal_step(std::span<const double> current, double temperature,
                                std::span<const double> lower, std::span<const double> upper,
                                std::mt19937_64& rng) {
  std::vector<double> proposal(current.begin(), current.end());
  if (temperature <= 0.0) return proposal;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t i = 0; i < proposal.size(); ++i) {
    const double width = upper[i] - lower[i];
    double x = proposal[i] + gauss(rng) * temperature * width;
    // Reflect into the box.
    for (int guard = 0; guard < 64 && (x < lower[i] || x > upper[i]); ++guard) {
      if (x < lower[i]) x = 2 * lower[i] - x;
      if (x > upper[i]) x = 2 * upper[i] - x;
    }
    proposal[i] = std::clamp(x, lower[i], upper[i]);
  }
  return proposal;
}

bool metropolis_accept(double delta, double temperature, double u) {
  if (delta <= 0.0) return true;
  return u < std::exp(-delta / std::max(temperature, 1e-12));
}

Falsifier::Falsifier(const Campaign& campaign) : campaign_(campaign) {
  if (campaign_.model_name == "external") {
    model_ = std::make_unique<ExternalProcessModel>(
        campaign_.external_command, campaign_.external_inputs, campaign_.external_horizon,
        campaign_.external_step);
  } else {
    model_ = make_builtin_model(campaign_.model_name, campaign_.model_params);
  }
  params_ = model_->inputs();
  labels_ = parameter_labels(params_);
  lower_ = parameter_lower_bounds(params_);
  upper_ = parameter_upper_bounds(params_);

  if (!campaign_.spec_path.empty()) {
    formula_ = parse_spec_file(campaign_.spec_path, campaign_.spec_params);
  } else {
    TranslateOptions options;
    options.loop_mode = campaign_.graph_loop_mode;
    options.encoding = campaign_.graph_encoding;
    options.horizon = model_->horizon();
    formula_ = translate(load_block_graph_file(campaign_.graph_path), options).formula;
  }
}

RunResult Falsifier::falsify_once(std::uint64_t run_seed) const {
  std::mt19937_64 rng(run_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto uniform_point = [&]() {
    std::vector<double> p(lower_.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] = lower_[i] + unit(rng) * (upper_[i] - lower_[i]);
    }
    return p;
  };

  RunResult result;
  result.best_signed_robustness = std::numeric_limits<double>::infinity();

  std::vector<double> current = uniform_point();
  std::vector<double> proposal = current;
  double energy = std::numeric_limits<double>::infinity();
  double temperature = campaign_.optimizer.initial_temperature;
  std::size_t stagnation = 0;

  for (std::size_t iter = 1; iter <= campaign_.max_iterations; ++iter) {
    result.iterations_used = iter;
    std::optional<Trace> trace;
    try {
      const Trace inputs =
          generate_inputs(params_, proposal, model_->horizon(), model_->step());
      trace = model_->simulate(inputs);
    } catch (const SimulationError&) {
      // Failed point: budget is consumed, the point is discarded.
      ++result.failed_simulations;
      temperature *= campaign_.optimizer.cooling;
      proposal = anneal_step(current, temperature, lower_, upper_, rng);
      continue;
    }

    const VBool verdict = eval_robust(formula_, *trace, 0, campaign_.semantics, rng);
    const double objective = signed_robustness(verdict);

    if (objective < result.best_signed_robustness) {
      result.best_signed_robustness = objective;
      result.best_point = proposal;
      stagnation = 0;
    } else {
      ++stagnation;
    }
    if (!verdict.truth) {
      result.falsified = true;
      result.falsifying_trace = std::move(*trace);
      break;
    }

    // Metropolis acceptance on the signed robustness.
    if (metropolis_accept(objective - energy, temperature, unit(rng))) {
      current = proposal;
      energy = objective;
    }
    temperature *= campaign_.optimizer.cooling;

    if (stagnation >= campaign_.optimizer.restart_after) {
      current = uniform_point();
      energy = std::numeric_limits<double>::infinity();
      temperature = campaign_.optimizer.initial_temperature;
      stagnation = 0;
      proposal = current;  // evaluate the restart point itself next
    } else {
      proposal = anneal_step(current, temperature, lower_, upper_, rng);
    }
  }
  return result;
}

CampaignOutcome Falsifier::run_campaign(std::size_t jobs) const {
  CampaignOutcome outcome;
  outcome.parameter_labels = labels_;
  outcome.runs.resize(campaign_.repetitions);

  if (jobs <= 1) {
    for (std::size_t i = 0; i < campaign_.repetitions; ++i) {
      outcome.runs[i] = falsify_once(campaign_.seed + i);
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= campaign_.repetitions) break;
        outcome.runs[i] = falsify_once(campaign_.seed + i);
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min<std::size_t>(jobs, campaign_.repetitions); ++t) {
      pool.emplace_back(worker);
    }
    for (auto& t : pool) t.join();
  }
  outcome.summary = summarize(outcome.runs);
  return outcome;
}

namespace {

std::string csv_number(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

}  // namespace

void write_results_csv(const CampaignOutcome& outcome, std::uint64_t base_seed,
                       std::ostream& out) {
  out << "run,seed,falsified,iterations,failed_simulations,best_objective";
  for (const auto& label : outcome.parameter_labels) out << ',' << label;
  out << '\n';
  for (std::size_t i = 0; i < outcome.runs.size(); ++i) {
    const RunResult& r = outcome.runs[i];
    out << i << ',' << base_seed + i << ',' << (r.falsified ? 1 : 0) << ','
        << r.iterations_used << ',' << r.failed_simulations << ','
        << csv_number(r.best_signed_robustness);
    for (std::size_t d = 0; d < outcome.parameter_labels.size(); ++d) {
      out << ',' << (d < r.best_point.size() ? csv_number(r.best_point[d]) : "");
    }
    out << '\n';
  }
}

void write_summary_csv(const CampaignSummary& summary, std::ostream& out) {
  out << "succ,repetitions,iter,iter_per_succ\n";
  out << summary.succ << ',' << summary.repetitions << ',' << csv_number(summary.iter_mean)
      << ',' << summary.iter_per_succ_text() << '\n';
}

void write_summary_table(const CampaignSummary& summary, std::ostream& out) {
  std::ostringstream iter;
  iter.precision(1);
  iter << std::fixed << summary.iter_mean;
  out << "Succ   " << summary.succ << "/" << summary.repetitions << "\n";
  out << "Iter   " << iter.str() << "\n";
  out << "Iter/Succ   " << summary.iter_per_succ_text() << "\n";
}

}  // namespace vbstl
