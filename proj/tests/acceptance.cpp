// Acceptance suite: exercises the release gate end to end and prints one
// verdict line per criterion. Exits nonzero if any criterion fails.

#include <cmath>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "helpers.hpp"
#include "vbstl/falsify.hpp"
#include "vbstl/graph_exec.hpp"
#include "vbstl/laws.hpp"
#include "vbstl/parser.hpp"
#include "vbstl/robust_eval.hpp"
#include "vbstl/transform.hpp"

using namespace vbstl;
using vbstl::test::enumerate_formulas;
using vbstl::test::enumerate_small_traces;
using vbstl::test::make_trace;
using vbstl::test::oracle_sat;
using vbstl::test::random_formula;
using vbstl::test::random_leaf_trace;
using vbstl::test::random_nnf_formula;
using vbstl::test::random_small_trace;

namespace {

const std::string kFixtures = VBSTL_FIXTURE_DIR;

struct Verdict {
  int id;
  std::string name;
  bool pass;
  std::string detail;
  bool informational = false;
};

std::vector<Verdict> verdicts;

void report(int id, const std::string& name, bool pass, const std::string& detail,
            bool informational = false) {
  verdicts.push_back({id, name, pass, detail, informational});
}

SemanticsConfig config(SemanticsMode mode) {
  SemanticsConfig cfg;
  cfg.default_connective = mode;
  return cfg;
}

// --- criterion 1: Boolean soundness vs the independent oracle ---------------

void criterion_soundness() {
  const SemanticsMode modes[] = {SemanticsMode::Max, SemanticsMode::Additive,
                                 SemanticsMode::Constant};
  std::size_t cases = 0;
  std::size_t mismatches = 0;

  // Exhaustive skeletons to height 2 crossed with every trace of length <= 2
  // over {-1, 0, 1}; deeper formulas and longer traces are covered by the
  // seeded random sweep below (a full cross product would not finish in
  // seconds).
  const auto formulas = enumerate_formulas(2);
  const auto traces = enumerate_small_traces(2);
  for (const auto& f : formulas) {
    for (const auto& t : traces) {
      const bool expected = oracle_sat(f, t, 0);
      for (const auto mode : modes) {
        ++cases;
        if (eval_robust(f, t, 0, config(mode)).truth != expected) ++mismatches;
      }
    }
  }
  const std::size_t exhaustive_cases = cases;

  std::mt19937_64 rng(20240811);
  for (int trial = 0; trial < 20000; ++trial) {
    const FormulaPtr f = random_formula(rng, 3);
    const Trace t = random_small_trace(rng, 5);
    std::uniform_int_distribution<std::size_t> k_dist(0, t.size() - 1);
    const std::size_t k = k_dist(rng);
    const bool expected = oracle_sat(f, t, k);
    for (const auto mode : modes) {
      ++cases;
      if (eval_robust(f, t, k, config(mode)).truth != expected) ++mismatches;
    }
  }

  std::ostringstream detail;
  detail << formulas.size() << " exhaustive formulas x " << traces.size()
         << " traces + 20000 random depth-3 cases, 3 semantics, "
         << exhaustive_cases + (cases - exhaustive_cases) << " checks, " << mismatches
         << " mismatches";
  report(1, "Boolean soundness vs independent oracle", mismatches == 0, detail.str());
}

// --- criteria 2 and 3: connective laws and the strict parallel bound --------

void criterion_laws() {
  const auto reports = check_vbool_laws(100000, 811);
  std::size_t failures = 0;
  std::string bound_detail;
  bool bound_pass = false;
  for (const auto& r : reports) {
    if (r.name == "additive below min (strict)") {
      bound_pass = r.passed();
      bound_detail = std::to_string(r.trials) + " positive pairs, " +
                     std::to_string(r.failures) + " bound violations";
      continue;
    }
    failures += r.failures;
  }
  report(2, "connective algebraic laws (1e5 triples, tol 1e-9)", failures == 0,
         std::to_string(reports.size() - 1) + " laws, " + std::to_string(failures) +
             " failures");
  report(3, "strict parallel-resistance bound", bound_pass, bound_detail);
}

// --- criterion 4: monotonicity under single-sample perturbation -------------

void criterion_monotonicity() {
  std::mt19937_64 rng(440011);
  std::uniform_real_distribution<double> delta_dist(0.01, 2.0);
  std::size_t checks = 0;
  std::size_t violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto sample = random_nnf_formula(rng, 3);
    if (sample.leaf_directions.empty()) continue;
    const Trace base = random_leaf_trace(rng, sample.leaf_directions.size());
    std::uniform_int_distribution<std::size_t> leaf_dist(0,
                                                         sample.leaf_directions.size() - 1);
    std::uniform_int_distribution<std::size_t> k_dist(0, base.size() - 1);
    const std::size_t leaf = leaf_dist(rng);
    const std::size_t k = k_dist(rng);
    auto signals = base.signals();
    signals[leaf].second[k] += sample.leaf_directions[leaf] * delta_dist(rng);
    const Trace worse = Trace(base.times(), signals);
    for (const auto mode : {SemanticsMode::Max, SemanticsMode::Additive}) {
      const double before = signed_robustness(eval_robust(sample.formula, base, 0, config(mode)));
      const double after = signed_robustness(eval_robust(sample.formula, worse, 0, config(mode)));
      ++checks;
      if (after > before + 1e-9) ++violations;
    }
  }
  report(4, "monotonicity under violation-directed perturbation", violations == 0,
         std::to_string(checks) + " perturbations (max+additive), " +
             std::to_string(violations) + " violations");
}

// --- criterion 5: step invariance of the additive always --------------------

void criterion_step_invariance() {
  std::mt19937_64 rng(550022);
  std::uniform_real_distribution<double> step(0.05, 1.0);
  std::uniform_real_distribution<double> value(-9.0, -0.25);
  const FormulaPtr phi = parse_stl("alw (y >= 0)");
  double worst = 0.0;
  std::size_t checks = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> times{0.0}, y;
    for (int k = 0; k < 15; ++k) times.push_back(times.back() + step(rng));
    for (std::size_t k = 0; k < times.size(); ++k) y.push_back(value(rng));
    const Trace base = make_trace(times, {{"y", y}});
    const double add_ref =
        signed_robustness(eval_robust(phi, base, 0, config(SemanticsMode::Additive)));
    const double max_ref =
        signed_robustness(eval_robust(phi, base, 0, config(SemanticsMode::Max)));
    for (std::size_t factor : {2u, 3u, 4u, 7u}) {
      const Trace fine = resample_piecewise_constant(base, factor);
      const double add_fine =
          signed_robustness(eval_robust(phi, fine, 0, config(SemanticsMode::Additive)));
      const double max_fine =
          signed_robustness(eval_robust(phi, fine, 0, config(SemanticsMode::Max)));
      worst = std::max({worst, std::abs(add_fine - add_ref), std::abs(max_fine - max_ref)});
      ++checks;
    }
  }
  std::ostringstream detail;
  detail << checks << " resamplings, worst deviation " << std::scientific
         << std::setprecision(2) << worst;
  report(5, "additive always invariant under resampling (1e-9)", worst <= 1e-9,
         detail.str());
}

// --- criterion 6: step-profile orderings -------------------------------------

void criterion_orderings() {
  const auto rows = semantics_ordering_demo();
  const auto& a = rows[0];
  const auto& b = rows[1];
  const auto& c = rows[2];
  const auto& d = rows[3];
  const bool pass = a.max_signed == b.max_signed &&
                    b.additive_signed < a.additive_signed - 1e-6 &&
                    c.additive_signed > a.additive_signed + 1e-6 &&
                    c.max_signed < a.max_signed - 1e-6 &&
                    d.max_signed < a.max_signed - 1e-6 &&
                    d.additive_signed < a.additive_signed - 1e-6;
  std::ostringstream detail;
  detail << std::setprecision(4) << "max(a)=" << a.max_signed << " max(b)=" << b.max_signed
         << " add(a)=" << a.additive_signed << " add(b)=" << b.additive_signed
         << " add(c)=" << c.additive_signed << " max(c)=" << c.max_signed
         << " max(d)=" << d.max_signed << " add(d)=" << d.additive_signed;
  report(6, "step-profile robustness orderings", pass, detail.str());
}

// --- criterion 7: transformer equivalence ------------------------------------

Trace random_at_trace(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> len(2, 10);
  std::uniform_real_distribution<double> omega(4000.0, 5000.0);
  std::uniform_real_distribution<double> v(100.0, 140.0);
  std::uniform_int_distribution<int> gear(1, 5);
  const std::size_t n = len(rng);
  std::vector<double> times(n), ws(n), vs(n), gs(n);
  for (std::size_t k = 0; k < n; ++k) {
    times[k] = static_cast<double>(k) * 0.5;
    ws[k] = omega(rng);
    vs[k] = v(rng);
    gs[k] = gear(rng);
  }
  return make_trace(times, {{"omega", ws}, {"v", vs}, {"gear", gs}});
}

void criterion_transformer_equivalence() {
  std::mt19937_64 rng(770033);
  std::size_t mismatches = 0;
  std::size_t checks = 0;

  // Latched loop fixture: the formula at time 0 must agree with the signal
  // verdict at the final sample.
  {
    const BlockGraph g = load_block_graph_file(kFixtures + "/graphs/speed_latch.json");
    const TranslationResult tr = translate(g);
    for (int trial = 0; trial < 1000; ++trial) {
      const Trace input = random_at_trace(rng);
      const Trace executed = execute_graph(g, input);
      const bool signal_verdict = executed.samples(g.output).back() != 0.0;
      ++checks;
      if (bool_sat(tr.formula, executed, 0) != signal_verdict) ++mismatches;
    }
  }

  // Combinational fixtures evaluate instantaneously, so the agreement is
  // asserted at every sample (which subsumes the end-of-trace identity the
  // latched encoding provides).
  const std::vector<std::vector<std::string>> log_scenarios = {
      {},      {"sig1"}, {"sig2"},         {"sig1", "sig4"},
      {"sig3"}, {"sig6"}, {"sig3", "sig6"}, {"sig7"}};
  BlockGraph bounds = load_block_graph_file(kFixtures + "/graphs/speed_bounds.json");
  for (const auto& scenario : log_scenarios) {
    bounds.log = scenario;
    TranslateOptions disj;
    disj.encoding = SwitchEncoding::Disjunctive;
    const FormulaPtr f_impl = translate(bounds).formula;
    const FormulaPtr f_disj = translate(bounds, disj).formula;
    for (int trial = 0; trial < 1000; ++trial) {
      const Trace executed = execute_graph(bounds, random_at_trace(rng));
      for (std::size_t k = 0; k < executed.size(); ++k) {
        const bool expected = executed.samples(bounds.output)[k] != 0.0;
        const bool impl = bool_sat(f_impl, executed, k);
        const bool disj_b = bool_sat(f_disj, executed, k);
        ++checks;
        if (impl != expected || disj_b != expected) ++mismatches;
      }
    }
  }

  {
    const BlockGraph g = load_block_graph_file(kFixtures + "/graphs/gear_switch.json");
    TranslateOptions disj;
    disj.encoding = SwitchEncoding::Disjunctive;
    const FormulaPtr f_impl = translate(g).formula;
    const FormulaPtr f_disj = translate(g, disj).formula;
    for (int trial = 0; trial < 1000; ++trial) {
      const Trace executed = execute_graph(g, random_at_trace(rng));
      for (std::size_t k = 0; k < executed.size(); ++k) {
        const bool expected = executed.samples(g.output)[k] != 0.0;
        ++checks;
        if (bool_sat(f_impl, executed, k) != expected ||
            bool_sat(f_disj, executed, k) != expected) {
          ++mismatches;
        }
      }
    }
  }

  report(7, "transformer/executor Boolean equivalence", mismatches == 0,
         std::to_string(checks) + " checks over the latched fixture + 8 logging scenarios + the switch fixture, " +
             std::to_string(mismatches) + " mismatches");
}

// --- criterion 8: table structure and entry-count bookkeeping ----------------

struct RandomGraphGen {
  BlockGraph g;
  std::mt19937_64& rng;
  int counter = 0;

  explicit RandomGraphGen(std::mt19937_64& r) : rng(r) {}

  std::string fresh(const std::string& prefix) {
    return prefix + std::to_string(counter++);
  }

  std::string add(Block b) {
    g.blocks.push_back(std::move(b));
    return g.blocks.back().id;
  }

  void wire(const std::string& from, const std::string& to, int port) {
    g.wires.push_back({from, 0, to, port});
  }

  // Returns (block id, predicted entry count).
  std::pair<std::string, std::size_t> gen_signal(int depth) {
    std::uniform_int_distribution<int> coin(0, 1);
    if (depth <= 0) {
      Block b;
      b.id = fresh("s");
      if (coin(rng)) {
        b.kind = BlockKind::Constant;
        b.value = static_cast<double>(counter);
      } else {
        b.kind = BlockKind::Inport;
        b.signal = "in" + std::to_string(counter);
      }
      return {add(b), 1};
    }
    // Switch over two signal branches with a signal-valued condition.
    auto [cond, a2] = gen_signal(depth - 1);
    auto [in1, a1] = gen_signal(depth - 1);
    auto [in3, a3] = gen_signal(depth - 1);
    Block sw;
    sw.id = fresh("sw");
    sw.kind = BlockKind::Switch;
    sw.criterion = SwitchCriterion::Ge;
    sw.threshold = 0.5;
    const std::string id = add(sw);
    wire(in1, id, 0);
    wire(cond, id, 1);
    wire(in3, id, 2);
    return {id, a2 * (a1 + a3)};
  }

  std::pair<std::string, std::size_t> gen_formula(int depth) {
    std::uniform_int_distribution<int> pick(0, 2);
    if (depth <= 0) {
      auto [l, a1] = gen_signal(0);
      auto [r, a2] = gen_signal(0);
      Block rel;
      rel.id = fresh("r");
      rel.kind = BlockKind::Relational;
      rel.rel = Relation::Lt;
      const std::string id = add(rel);
      wire(l, id, 0);
      wire(r, id, 1);
      return {id, a1 * a2};
    }
    switch (pick(rng)) {
      case 0: {  // logical product
        auto [l, a1] = gen_formula(depth - 1);
        auto [r, a2] = gen_formula(depth - 1);
        Block op;
        op.id = fresh("l");
        op.kind = BlockKind::Logical;
        op.logic = std::uniform_int_distribution<int>(0, 1)(rng) ? LogicOp::And
                                                                 : LogicOp::Or;
        const std::string id = add(op);
        wire(l, id, 0);
        wire(r, id, 1);
        return {id, a1 * a2};
      }
      case 1: {  // relational product of switch-built signals
        auto [l, a1] = gen_signal(depth - 1);
        auto [r, a2] = gen_signal(depth - 1);
        Block rel;
        rel.id = fresh("r");
        rel.kind = BlockKind::Relational;
        rel.rel = Relation::Ge;
        const std::string id = add(rel);
        wire(l, id, 0);
        wire(r, id, 1);
        return {id, a1 * a2};
      }
      default: {  // switch over formula branches
        auto [cond, a2] = gen_signal(depth - 1);
        auto [in1, a1] = gen_formula(depth - 1);
        auto [in3, a3] = gen_formula(depth - 1);
        Block sw;
        sw.id = fresh("sw");
        sw.kind = BlockKind::Switch;
        sw.criterion = SwitchCriterion::Gt;
        const std::string id = add(sw);
        wire(in1, id, 0);
        wire(cond, id, 1);
        wire(in3, id, 2);
        return {id, a2 * (a1 + a3)};
      }
    }
  }
};

void criterion_table_structure() {
  bool tables_ok = true;
  std::string tables_detail;
  try {
    const BlockGraph g = load_block_graph_file(kFixtures + "/graphs/gear_switch.json");
    const TranslationResult tr = translate(g);

    auto formula_entry = [&](const FormulaTable& t, const std::string& pre,
                             const std::string& conseq) {
      const FormulaPtr p = parse_stl(pre);
      const FormulaPtr c = parse_stl(conseq);
      for (const auto& [ep, ec] : t.entries) {
        if (formula_equal(ep, p) && formula_equal(ec, c)) return true;
      }
      return false;
    };

    const auto& sub1 = std::get<SignalTable>(tr.tables.at("sub1"));
    const auto& sub2 = std::get<FormulaTable>(tr.tables.at("sub2"));
    const auto& phi = std::get<FormulaTable>(tr.tables.at("phi"));
    tables_ok = sub1.entries.size() == 2 && sub2.entries.size() == 2 &&
                phi.entries.size() == 2;
    tables_ok = tables_ok &&
                expr_equal(sub1.entries[0].consequent, expr_const(50)) &&
                formula_equal(sub1.entries[0].precondition, parse_stl("gear < 3")) &&
                expr_equal(sub1.entries[1].consequent, expr_const(200)) &&
                formula_equal(sub1.entries[1].precondition, parse_stl("not (gear < 3)"));
    tables_ok = tables_ok && formula_entry(sub2, "gear < 3", "v < 50") &&
                formula_entry(sub2, "not (gear < 3)", "v < 200") &&
                formula_entry(phi, "gear < 3", "(omega < 5000) and (v < 50)") &&
                formula_entry(phi, "not (gear < 3)", "(omega < 5000) and (v < 200)");
  } catch (const std::exception& e) {
    tables_ok = false;
    tables_detail = e.what();
  }

  std::mt19937_64 rng(880044);
  std::size_t graphs_checked = 0;
  std::size_t count_mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    RandomGraphGen gen(rng);
    auto [root, predicted] = gen.gen_formula(3);
    gen.g.output = root;
    TranslateOptions options;
    options.entry_limit = 1 << 20;
    try {
      const TranslationResult tr = translate(gen.g, options);
      ++graphs_checked;
      if (table_entry_count(tr.tables.at(root)) != predicted) ++count_mismatches;
    } catch (const std::exception&) {
      ++count_mismatches;
      ++graphs_checked;
    }
  }
  const bool pass = tables_ok && count_mismatches == 0;
  std::ostringstream detail;
  detail << "conditional-branch tables exact"
         << (tables_ok ? "" : " FAILED " + tables_detail) << "; " << graphs_checked
         << " random graphs, " << count_mismatches << " entry-count mismatches";
  report(8, "table structure and entry-count bookkeeping", pass, detail.str());
}

// --- criterion 9: static switched falsification ordering ---------------------

void criterion_static_switched() {
  auto run = [&](double thresh, SemanticsMode mode) {
    Campaign c;
    c.model_name = "static-switched";
    c.model_params["thresh"] = thresh;
    c.spec_path = kFixtures + "/specs/phi_ss.stl";
    c.semantics.default_connective = mode;
    c.max_iterations = 1000;
    c.repetitions = 20;
    c.seed = 2024;
    return Falsifier(c).run_campaign(4).summary;
  };

  const auto const09 = run(0.9, SemanticsMode::Constant);
  const auto max09 = run(0.9, SemanticsMode::Max);
  const auto add09 = run(0.9, SemanticsMode::Additive);
  const auto const07 = run(0.7, SemanticsMode::Constant);
  const auto max07 = run(0.7, SemanticsMode::Max);
  const auto add07 = run(0.7, SemanticsMode::Additive);

  const bool pass = const09.succ >= 15 && max09.succ <= 10 && add09.succ <= 10 &&
                    const09.succ > max09.succ && const09.succ > add09.succ &&
                    const07.succ >= 10 && max07.succ >= 10 && add07.succ >= 10;
  std::ostringstream detail;
  detail << "thresh 0.9: constant " << const09.succ << "/20, max " << max09.succ
         << "/20, additive " << add09.succ << "/20; thresh 0.7: constant "
         << const07.succ << "/20, max " << max07.succ << "/20, additive " << add07.succ
         << "/20";
  report(9, "static switched semantics ordering", pass, detail.str());
}

// --- criterion 10: parser fixtures round-trip ---------------------------------

void criterion_fixtures() {
  const std::vector<std::pair<std::string, std::map<std::string, std::string>>> specs = {
      {"at_phi1.stl", {}},
      {"at_phi2.stl", {}},
      {"at_phi3.stl", {}},
      {"at_phi4.stl", {}},
      {"at_phi5.stl", {{"eps", "0.1"}}},
      {"at_phi6.stl", {}},
      {"at_phi7.stl", {}},
      {"at_phi8.stl", {}},
      {"afc_phi1.stl", {}},
      {"afc_phi2.stl", {}},
      {"ds_phi1.stl", {}},
      {"ds_phi2.stl", {}},
      {"ds_phi3.stl", {}},
      {"ds_phi4.stl", {}},
      {"phi2_at.stl", {}},
      {"phi_ss.stl", {}},
  };
  std::size_t parsed = 0;
  std::size_t failures = 0;
  std::string first_error;
  for (const auto& [file, params] : specs) {
    try {
      const FormulaPtr f = parse_spec_file(kFixtures + "/specs/" + file, params);
      if (!formula_equal(f, parse_stl(to_string(f)))) {
        ++failures;
        if (first_error.empty()) first_error = file + " round-trip";
        continue;
      }
      ++parsed;
    } catch (const std::exception& e) {
      ++failures;
      if (first_error.empty()) first_error = file + ": " + e.what();
    }
  }
  bool modal_ok = false;
  try {
    modal_ok = modal_depth(parse_spec_file(kFixtures + "/specs/phi2_at.stl")) == 1;
  } catch (const std::exception&) {
  }
  std::ostringstream detail;
  detail << parsed << "/" << specs.size() << " fixtures parse and round-trip";
  if (!first_error.empty()) detail << " (first failure: " << first_error << ")";
  detail << "; engine/vehicle-speed property has modal depth 1: "
         << (modal_ok ? "yes" : "NO");
  report(10, "benchmark formula fixtures", failures == 0 && modal_ok, detail.str());
}

}  // namespace

int main() {
  criterion_soundness();
  criterion_laws();
  criterion_monotonicity();
  criterion_step_invariance();
  criterion_orderings();
  criterion_transformer_equivalence();
  criterion_table_structure();
  criterion_static_switched();
  criterion_fixtures();
  report(11, "external benchmark tables",
         true,
         "NOT REPRODUCED by design: the transmission/fuel-control plants and the "
         "industrial models are unavailable and the modulator equations are "
         "surrogate-only; criteria 1-10 stand in for them",
         /*informational=*/true);

  int failures = 0;
  for (const auto& v : verdicts) {
    std::ostringstream head;
    head << "[" << std::setw(2) << v.id << "] " << v.name << " ";
    std::string line = head.str();
    while (line.size() < 58) line += '.';
    const char* status = v.informational ? "NOTED" : (v.pass ? "PASS" : "FAIL");
    std::cout << line << " " << status << "  (" << v.detail << ")\n";
    if (!v.pass && !v.informational) ++failures;
  }
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
  }
  return failures;
}
