#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "vbstl/formula.hpp"
#include "vbstl/parser.hpp"
#include "vbstl/robust_eval.hpp"

using namespace vbstl;
using vbstl::test::oracle_sat;
using vbstl::test::random_formula;
using vbstl::test::random_small_trace;

TEST_SUITE_BEGIN("formula");

TEST_CASE("modal depth") {
  // alw ((w < 4500) and (v < 120)) has one temporal level.
  const FormulaPtr phi2_at = parse_stl("alw ((w < 4500) and (v < 120))");
  CHECK(modal_depth(phi2_at) == 1);
  CHECK(modal_depth(parse_stl("x < 3")) == 0);
  CHECK(modal_depth(parse_stl("alw (ev (x > 0))")) == 2);
  CHECK(modal_depth(parse_stl("(alw (x > 0)) until (y < 1)")) == 2);
}

TEST_CASE("nnf pushes negation to predicates") {
  const FormulaPtr f1 = nnf(parse_stl("not ((x < 1) and (y < 2))"));
  CHECK(formula_equal(f1, parse_stl("(not (x < 1)) or (not (y < 2))")));

  const FormulaPtr f2 = nnf(parse_stl("not (alw (x < 1))"));
  CHECK(formula_equal(f2, parse_stl("ev (not (x < 1))")));

  const FormulaPtr f3 = nnf(parse_stl("not (not (x < 1))"));
  CHECK(formula_equal(f3, parse_stl("x < 1")));

  const FormulaPtr f4 = nnf(parse_stl("not ((x < 1) => (y < 2))"));
  CHECK(formula_equal(f4, parse_stl("(x < 1) and (not (y < 2))")));
}

TEST_CASE("nnf preserves Boolean satisfaction") {
  std::mt19937_64 rng(2024);
  std::size_t checked = 0;
  for (int trial = 0; trial < 4000; ++trial) {
    const FormulaPtr f = random_formula(rng, 3);
    const FormulaPtr g = nnf(f);
    const Trace trace = random_small_trace(rng);
    for (std::size_t k = 0; k < trace.size(); ++k) {
      CHECK(bool_sat(f, trace, k) == bool_sat(g, trace, k));
      ++checked;
    }
  }
  CHECK(checked > 4000);
}

TEST_CASE("printer and equality round trip generated formulas") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 2000; ++trial) {
    const FormulaPtr f = random_formula(rng, 3);
    const FormulaPtr back = parse_stl(to_string(f));
    CHECK(formula_equal(f, back));
  }
}

TEST_CASE("round trip keeps tags, scales and shifted expressions") {
  const FormulaPtr f =
      f_implies(f_and(f_pred(expr_abs(expr_sub(expr_signal("lam"), expr_const(14.7))),
                             Relation::Lt, 0.1),
                      f_pred(expr_signal("theta", 0.01), Relation::Gt, 0.0),
                      Semantics::Additive),
                f_scaled(10.0, f_eventually(Interval{1, 5},
                                            f_pred(expr_signal("x"), Relation::Le, 2.0),
                                            Semantics::Max)),
                Semantics::Additive, 5.0);
  const FormulaPtr back = parse_stl(to_string(f));
  CHECK(formula_equal(f, back));
  CHECK(to_string(back) == to_string(f));
}

TEST_CASE("collect_signals sees every referenced name") {
  const FormulaPtr f = parse_stl("alw ((omega / 2 < 4500) and (abs(v - vref) <= 5))");
  const auto names = collect_signals(f);
  CHECK(names == std::set<std::string>{"omega", "v", "vref"});
}

TEST_SUITE_END();
