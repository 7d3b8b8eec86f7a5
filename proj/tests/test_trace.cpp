#include <random>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "vbstl/trace.hpp"

using namespace vbstl;
using vbstl::test::make_trace;

TEST_SUITE_BEGIN("trace");

TEST_CASE("sample_at returns stored values without interpolation") {
  const Trace t = make_trace({0, 1}, {{"v", {4, 7}}});
  CHECK(t.sample_at("v", 1) == 7);
  CHECK(t.sample_at("v", 0) == 4);
  CHECK_THROWS_AS(t.sample_at("w", 0), TraceError);
  CHECK_THROWS_AS(t.sample_at("v", 2), TraceError);
}

TEST_CASE("construction enforces the invariants") {
  CHECK_THROWS_AS(Trace({}, {}), TraceError);
  CHECK_THROWS_AS(Trace({0, 0}, {}), TraceError);
  CHECK_THROWS_AS(Trace({1, 0}, {}), TraceError);
  CHECK_THROWS_AS(Trace({0, 1}, {{"v", {1}}}), TraceError);
  CHECK_THROWS_AS(Trace({0, 1}, {{"v", {1, 2}}, {"v", {3, 4}}}), TraceError);
}

TEST_CASE("step widths") {
  CHECK(step_widths(make_trace({0, 0.5, 1.0}, {})).widths ==
        std::vector<double>{0.5, 0.5, 0.5});
  CHECK(step_widths(make_trace({0, 1, 4}, {})).widths == std::vector<double>{1, 3, 3});
  CHECK(step_widths(make_trace({0}, {})).widths == std::vector<double>{1.0});
}

TEST_CASE("step widths sum to the span plus the repeated final width") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> step(0.1, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> times{0.0};
    for (int k = 0; k < 10; ++k) times.push_back(times.back() + step(rng));
    const Trace t = make_trace(times, {});
    const StepWidths w = step_widths(t);
    CHECK(w.total() ==
          doctest::Approx(t.horizon() + w.widths.back()).epsilon(1e-12));
  }
}

TEST_CASE("window indices resolve by time stamp") {
  const Trace t = make_trace({0, 1, 2, 3}, {});
  const IndexRange w1 = window_indices(t, 0, 1, 2);
  CHECK(w1.first == 1);
  CHECK(w1.last == 3);
  const IndexRange w2 = window_indices(t, 2, 0, 0);
  CHECK(w2.first == 2);
  CHECK(w2.last == 3);

  const Trace t2 = make_trace({0, 1}, {});
  CHECK(window_indices(t2, 1, 5, 6).empty());
}

TEST_CASE("window indices are monotone in the upper bound") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> bound(0.0, 6.0);
  const Trace t = make_trace({0, 0.5, 1.25, 2.0, 3.5, 5.0}, {});
  for (int trial = 0; trial < 200; ++trial) {
    double a = bound(rng);
    double b1 = a + bound(rng);
    double b2 = b1 + bound(rng);
    const IndexRange r1 = window_indices(t, 0, a, b1);
    const IndexRange r2 = window_indices(t, 0, a, b2);
    CHECK(r2.count() >= r1.count());
    if (!r1.empty()) {
      CHECK(r1.first == r2.first);
    }
  }
}

TEST_CASE("piecewise-constant resampling holds the left sample") {
  const Trace t = make_trace({0, 1}, {{"v", {4, 7}}});
  const Trace r = resample_piecewise_constant(t, 2);
  CHECK(r.times() == std::vector<double>{0, 0.5, 1});
  CHECK(r.samples("v") == std::vector<double>{4, 4, 7});

  const Trace same = resample_piecewise_constant(t, 1);
  CHECK(same.times() == t.times());
  CHECK(same.samples("v") == t.samples("v"));

  const Trace t2 = make_trace({0, 2}, {{"v", {1, 9}}});
  const Trace r4 = resample_piecewise_constant(t2, 4);
  CHECK(r4.times() == std::vector<double>{0, 0.5, 1, 1.5, 2});
  CHECK(r4.samples("v") == std::vector<double>{1, 1, 1, 1, 9});
}

TEST_CASE("resampling preserves the value at every original stamp") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> step(0.25, 2.0);
  std::uniform_real_distribution<double> value(-5.0, 5.0);
  for (std::size_t factor : {2u, 3u, 7u}) {
    std::vector<double> times{0.0}, v;
    for (int k = 0; k < 8; ++k) times.push_back(times.back() + step(rng));
    for (std::size_t k = 0; k < times.size(); ++k) v.push_back(value(rng));
    const Trace t = make_trace(times, {{"v", v}});
    const Trace r = resample_piecewise_constant(t, factor);
    for (std::size_t k = 0; k < t.size(); ++k) {
      CHECK(value_at_time(r, "v", t.times()[k]) == t.samples("v")[k]);
    }
  }
}

TEST_CASE("CSV round trip") {
  const Trace t = make_trace({0, 0.5, 1.0}, {{"omega", {4000, 4600, 4400}},
                                             {"v", {100, 110, 120}}});
  std::stringstream buffer;
  write_trace_csv(t, buffer);
  CHECK(buffer.str().substr(0, 13) == "time,omega,v\n");
  const Trace back = read_trace_csv(buffer);
  CHECK(back.times() == t.times());
  CHECK(back.samples("omega") == t.samples("omega"));
  CHECK(back.samples("v") == t.samples("v"));
}

TEST_CASE("CSV errors") {
  std::stringstream missing_header("a,b\n0,1\n");
  CHECK_THROWS_AS(read_trace_csv(missing_header), TraceError);
  std::stringstream bad_field("time,v\n0,abc\n");
  CHECK_THROWS_AS(read_trace_csv(bad_field), TraceError);
  std::stringstream short_row("time,v\n0\n");
  CHECK_THROWS_AS(read_trace_csv(short_row), TraceError);
}

TEST_SUITE_END();
