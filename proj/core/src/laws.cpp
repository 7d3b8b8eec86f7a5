#include "vbstl/laws.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include "vbstl/formula.hpp"
#include "vbstl/robust_eval.hpp"

namespace vbstl {

namespace {

constexpr double kTolerance = 1e-9;

bool vb_close(const VBool& a, const VBool& b) {
  if (a.truth != b.truth) return false;
  if (std::isinf(a.robustness) || std::isinf(b.robustness)) {
    return a.robustness == b.robustness;
  }
  return std::abs(a.robustness - b.robustness) <= kTolerance;
}

class VBoolGen {
public:
  explicit VBoolGen(std::uint64_t seed) : rng_(seed) {}

  VBool next() {
    VBool v;
    v.truth = coin_(rng_) == 1;
    switch (bucket_(rng_)) {
      case 0: v.robustness = 0.0; break;
      case 1: v.robustness = kInfinity; break;
      default: v.robustness = magnitude_(rng_); break;
    }
    return v;
  }

  double positive() { return positive_(rng_); }

private:
  std::mt19937_64 rng_;
  std::uniform_int_distribution<int> coin_{0, 1};
  std::uniform_int_distribution<int> bucket_{0, 19};  // 5% zero, 5% infinity
  std::uniform_real_distribution<double> magnitude_{0.0, 1000.0};
  std::uniform_real_distribution<double> positive_{1e-3, 1e3};
};

using TripleCheck = std::function<bool(const VBool&, const VBool&, const VBool&)>;

LawReport run_triples(const std::string& name, std::size_t trials, std::uint64_t seed,
                      const TripleCheck& check) {
  LawReport report{name, trials, 0};
  VBoolGen gen(seed);
  for (std::size_t i = 0; i < trials; ++i) {
    const VBool a = gen.next();
    const VBool b = gen.next();
    const VBool c = gen.next();
    if (!check(a, b, c)) ++report.failures;
  }
  return report;
}

}  // namespace

std::vector<LawReport> check_vbool_laws(std::size_t trials, std::uint64_t seed) {
  std::vector<LawReport> reports;
  std::uint64_t salt = seed;
  auto add = [&](const std::string& name, const TripleCheck& check) {
    reports.push_back(run_triples(name, trials, ++salt, check));
  };

  // --- max semantics ---
  add("max and associative", [](const VBool& a, const VBool& b, const VBool& c) {
    return vb_close(and_max(and_max(a, b), c), and_max(a, and_max(b, c)));
  });
  add("max and commutative", [](const VBool& a, const VBool& b, const VBool&) {
    return vb_close(and_max(a, b), and_max(b, a));
  });
  add("max and idempotent", [](const VBool& a, const VBool&, const VBool&) {
    return vb_close(and_max(a, a), a);
  });
  add("max and identity (top)", [](const VBool& a, const VBool&, const VBool&) {
    return vb_close(and_max(a, top_v()), a);
  });
  add("max and zero (bot)", [](const VBool& a, const VBool&, const VBool&) {
    return vb_close(and_max(a, bot_v()), bot_v());
  });
  add("max and distributes over or", [](const VBool& a, const VBool& b, const VBool& c) {
    return vb_close(and_max(a, or_max(b, c)), or_max(and_max(a, b), and_max(a, c)));
  });
  add("max or distributes over and", [](const VBool& a, const VBool& b, const VBool& c) {
    return vb_close(or_max(a, and_max(b, c)), and_max(or_max(a, b), or_max(a, c)));
  });
  add("max De Morgan", [](const VBool& a, const VBool& b, const VBool&) {
    return vb_close(not_v(and_max(a, b)), or_max(not_v(a), not_v(b)));
  });

  // --- additive semantics ---
  add("additive and associative", [](const VBool& a, const VBool& b, const VBool& c) {
    return vb_close(and_add(and_add(a, b), c), and_add(a, and_add(b, c)));
  });
  add("additive and commutative", [](const VBool& a, const VBool& b, const VBool&) {
    return vb_close(and_add(a, b), and_add(b, a));
  });
  add("additive and identity (top)", [](const VBool& a, const VBool&, const VBool&) {
    return vb_close(and_add(a, top_v()), a);
  });
  add("additive and zero (bot)", [](const VBool& a, const VBool&, const VBool&) {
    return vb_close(and_add(a, bot_v()), bot_v());
  });
  add("additive De Morgan", [](const VBool& a, const VBool& b, const VBool&) {
    return vb_close(not_v(and_add(a, b)), or_add(not_v(a), not_v(b)));
  });

  // Idempotence must fail in a specific way: doubling when false, halving
  // when true.
  {
    LawReport report{"additive idempotence counterexample", trials, 0};
    VBoolGen gen(++salt);
    for (std::size_t i = 0; i < trials; ++i) {
      const double r = gen.positive();
      const VBool t{true, r};
      const VBool f{false, r};
      if (!vb_close(and_add(t, t), VBool{true, r / 2.0})) ++report.failures;
      if (!vb_close(and_add(f, f), VBool{false, 2.0 * r})) ++report.failures;
    }
    reports.push_back(report);
  }

  // Strict parallel-resistance bound for finite positive pairs.
  {
    LawReport report{"additive below min (strict)", trials, 0};
    VBoolGen gen(++salt);
    for (std::size_t i = 0; i < trials; ++i) {
      const double x = gen.positive();
      const double y = gen.positive();
      const double parallel = 1.0 / (1.0 / x + 1.0 / y);
      if (!(parallel < std::min(x, y))) ++report.failures;
    }
    reports.push_back(report);
  }

  return reports;
}

bool all_passed(const std::vector<LawReport>& reports) {
  for (const auto& r : reports) {
    if (!r.passed()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Ordering demo
// ---------------------------------------------------------------------------

namespace {

Trace step_profile(double base, double dip, std::size_t dip_first, std::size_t dip_last,
                   double second_dip = 0.0, std::size_t second_first = 0,
                   std::size_t second_last = 0) {
  const std::size_t n = 61;  // one minute at 1 s steps
  std::vector<double> times(n);
  std::vector<double> values(n, base);
  for (std::size_t k = 0; k < n; ++k) times[k] = static_cast<double>(k);
  for (std::size_t k = dip_first; k <= dip_last; ++k) values[k] = dip;
  if (second_dip > 0.0) {
    for (std::size_t k = second_first; k <= second_last; ++k) values[k] = second_dip;
  }
  return Trace(std::move(times), {{"y", std::move(values)}});
}

}  // namespace

Trace ordering_demo_trace(const std::string& name) {
  if (name == "a") return step_profile(3.0, 1.0, 45, 50);
  if (name == "b") return step_profile(3.0, 1.0, 45, 50, 1.0, 18, 22);
  if (name == "c") return step_profile(6.0, 0.5, 45, 50);
  if (name == "d") return step_profile(3.0, 0.5, 45, 50);
  throw std::invalid_argument("unknown demo trace '" + name + "'");
}

std::vector<OrderingDemoRow> semantics_ordering_demo() {
  const FormulaPtr phi = f_always(Interval{}, f_pred(expr_signal("y"), Relation::Ge, 0.0));
  std::vector<OrderingDemoRow> rows;
  for (const char* name : {"a", "b", "c", "d"}) {
    const Trace trace = ordering_demo_trace(name);
    SemanticsConfig cfg;
    cfg.default_connective = SemanticsMode::Max;
    const double max_signed = signed_robustness(eval_robust(phi, trace, 0, cfg));
    cfg.default_connective = SemanticsMode::Additive;
    const double add_signed = signed_robustness(eval_robust(phi, trace, 0, cfg));
    rows.push_back({name, max_signed, add_signed});
  }
  return rows;
}

std::vector<IsobarPoint> isobar_grid(double lo, double hi, std::size_t points_per_axis) {
  if (points_per_axis < 2) {
    throw std::invalid_argument("isobar grid needs at least 2 points per axis");
  }
  const double step = (hi - lo) / static_cast<double>(points_per_axis - 1);
  std::vector<IsobarPoint> grid;
  grid.reserve(points_per_axis * points_per_axis);
  for (std::size_t i = 0; i < points_per_axis; ++i) {
    for (std::size_t j = 0; j < points_per_axis; ++j) {
      IsobarPoint p;
      p.x = lo + static_cast<double>(i) * step;
      p.y = lo + static_cast<double>(j) * step;
      const VBool vx = from_signed(p.x);
      const VBool vy = from_signed(p.y);
      p.max_signed = signed_robustness(and_max(vx, vy));
      p.additive_signed = signed_robustness(and_add(vx, vy));
      grid.push_back(p);
    }
  }
  return grid;
}

}  // namespace vbstl
