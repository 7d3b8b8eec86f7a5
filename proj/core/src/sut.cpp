#include "vbstl/sut.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace vbstl {

std::size_t InputParam::dimension() const {
  switch (kind) {
    case Kind::Constant: return 1;
    case Kind::ControlPoints: return points;
    case Kind::Pulse: return 2;
  }
  return 0;
}

std::size_t parameter_dimension(const std::vector<InputParam>& params) {
  std::size_t n = 0;
  for (const auto& p : params) n += p.dimension();
  return n;
}

std::vector<std::string> parameter_labels(const std::vector<InputParam>& params) {
  std::vector<std::string> labels;
  for (const auto& p : params) {
    switch (p.kind) {
      case InputParam::Kind::Constant:
        labels.push_back(p.name);
        break;
      case InputParam::Kind::ControlPoints:
        for (std::size_t i = 0; i < p.points; ++i) {
          labels.push_back(p.name + "_" + std::to_string(i));
        }
        break;
      case InputParam::Kind::Pulse:
        labels.push_back(p.name + "_period");
        labels.push_back(p.name + "_amplitude");
        break;
    }
  }
  return labels;
}

std::vector<double> parameter_lower_bounds(const std::vector<InputParam>& params) {
  std::vector<double> lo;
  for (const auto& p : params) {
    switch (p.kind) {
      case InputParam::Kind::Constant:
        lo.push_back(p.range.lo);
        break;
      case InputParam::Kind::ControlPoints:
        lo.insert(lo.end(), p.points, p.range.lo);
        break;
      case InputParam::Kind::Pulse:
        lo.push_back(p.period_range.lo);
        lo.push_back(p.amplitude_range.lo);
        break;
    }
  }
  return lo;
}

std::vector<double> parameter_upper_bounds(const std::vector<InputParam>& params) {
  std::vector<double> hi;
  for (const auto& p : params) {
    switch (p.kind) {
      case InputParam::Kind::Constant:
        hi.push_back(p.range.hi);
        break;
      case InputParam::Kind::ControlPoints:
        hi.insert(hi.end(), p.points, p.range.hi);
        break;
      case InputParam::Kind::Pulse:
        hi.push_back(p.period_range.hi);
        hi.push_back(p.amplitude_range.hi);
        break;
    }
  }
  return hi;
}

// ---------------------------------------------------------------------------
// Interpolation
// ---------------------------------------------------------------------------

namespace {

double hermite(double t, double x0, double x1, double y0, double y1, double m0,
               double m1) {
  const double h = x1 - x0;
  const double s = (t - x0) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * m0 +
         (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * m1;
}

/// Harmonic-mean tangents (Fritsch-Carlson style): zero at local extrema,
/// otherwise weighted so the interpolant stays monotone between knots.
std::vector<double> pchip_tangents(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  std::vector<double> h(n - 1), d(n - 1), m(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = xs[i + 1] - xs[i];
    d[i] = (ys[i + 1] - ys[i]) / h[i];
  }
  if (n == 2) {
    m[0] = m[1] = d[0];
    return m;
  }
  m[0] = d[0];
  m[n - 1] = d[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] == 0.0 || d[i] == 0.0 || (d[i - 1] > 0) != (d[i] > 0)) {
      m[i] = 0.0;
    } else {
      const double w1 = 2 * h[i] + h[i - 1];
      const double w2 = h[i] + 2 * h[i - 1];
      m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
  }
  return m;
}

std::size_t interval_of(std::span<const double> xs, double q) {
  if (q <= xs.front()) return 0;
  if (q >= xs[xs.size() - 2]) return xs.size() - 2;
  auto it = std::upper_bound(xs.begin(), xs.end(), q);
  return static_cast<std::size_t>(it - xs.begin()) - 1;
}

}  // namespace

std::vector<double> interpolate_pchip(std::span<const double> xs, std::span<const double> ys,
                                      std::span<const double> queries) {
  if (xs.size() != ys.size() || xs.empty()) {
    throw SimulationError("interpolation needs matching non-empty knot vectors");
  }
  std::vector<double> out(queries.size());
  if (xs.size() == 1) {
    std::fill(out.begin(), out.end(), ys[0]);
    return out;
  }
  const auto m = pchip_tangents(xs, ys);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const double q = std::clamp(queries[i], xs.front(), xs.back());
    const std::size_t j = interval_of(xs, q);
    out[i] = hermite(q, xs[j], xs[j + 1], ys[j], ys[j + 1], m[j], m[j + 1]);
  }
  return out;
}

std::vector<double> interpolate_linear(std::span<const double> xs,
                                       std::span<const double> ys,
                                       std::span<const double> queries) {
  if (xs.size() != ys.size() || xs.empty()) {
    throw SimulationError("interpolation needs matching non-empty knot vectors");
  }
  std::vector<double> out(queries.size());
  if (xs.size() == 1) {
    std::fill(out.begin(), out.end(), ys[0]);
    return out;
  }
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const double q = std::clamp(queries[i], xs.front(), xs.back());
    const std::size_t j = interval_of(xs, q);
    const double s = (q - xs[j]) / (xs[j + 1] - xs[j]);
    out[i] = ys[j] + s * (ys[j + 1] - ys[j]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Input generation
// ---------------------------------------------------------------------------

namespace {

std::vector<double> uniform_grid(double horizon, double dt) {
  if (!(horizon > 0) || !(dt > 0)) {
    throw SimulationError("horizon and step must be positive");
  }
  std::vector<double> times;
  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
  times.reserve(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    times.push_back(std::min(static_cast<double>(k) * dt, horizon));
  }
  if (times.back() < horizon) times.push_back(horizon);
  return times;
}

}  // namespace

Trace generate_inputs(const std::vector<InputParam>& params, std::span<const double> point,
                      double horizon, double dt) {
  if (point.size() != parameter_dimension(params)) {
    throw SimulationError("parameter point has dimension " + std::to_string(point.size()) +
                          ", expected " + std::to_string(parameter_dimension(params)));
  }
  std::vector<double> times = uniform_grid(horizon, dt);
  std::vector<Trace::Series> series;
  std::size_t offset = 0;
  for (const auto& p : params) {
    std::vector<double> values;
    switch (p.kind) {
      case InputParam::Kind::Constant: {
        const double v = point[offset];
        if (!p.range.contains(v)) {
          throw SimulationError("input '" + p.name + "' value out of range");
        }
        values.assign(times.size(), v);
        break;
      }
      case InputParam::Kind::ControlPoints: {
        std::vector<double> knots_t(p.points), knots_v(p.points);
        for (std::size_t i = 0; i < p.points; ++i) {
          knots_v[i] = point[offset + i];
          if (!p.range.contains(knots_v[i])) {
            throw SimulationError("input '" + p.name + "' control point out of range");
          }
          knots_t[i] = p.points == 1 ? 0.0
                                     : horizon * static_cast<double>(i) /
                                           static_cast<double>(p.points - 1);
        }
        values = p.interpolation == Interpolation::Pchip
                     ? interpolate_pchip(knots_t, knots_v, times)
                     : interpolate_linear(knots_t, knots_v, times);
        break;
      }
      case InputParam::Kind::Pulse: {
        const double period = point[offset];
        const double amplitude = point[offset + 1];
        if (!p.period_range.contains(period) || !p.amplitude_range.contains(amplitude)) {
          throw SimulationError("pulse '" + p.name + "' parameters out of range");
        }
        values.reserve(times.size());
        for (double t : times) {
          if (t < p.pulse_delay) {
            values.push_back(p.pulse_base);
          } else {
            const double phase = std::fmod(t - p.pulse_delay, period);
            values.push_back(phase < period / 2 ? p.pulse_base + amplitude : p.pulse_base);
          }
        }
        break;
      }
    }
    series.emplace_back(p.name, std::move(values));
    offset += p.dimension();
  }
  return Trace(std::move(times), std::move(series));
}

// ---------------------------------------------------------------------------
// Static switched system
// ---------------------------------------------------------------------------

StaticSwitchedModel::StaticSwitchedModel(double threshold) : threshold_(threshold) {}

std::vector<InputParam> StaticSwitchedModel::inputs() const {
  InputParam u1;
  u1.name = "u1";
  u1.range = {0.0, 1.0};
  InputParam u2;
  u2.name = "u2";
  u2.range = {0.0, 1.0};
  return {u1, u2};
}

double StaticSwitchedModel::output(double u1, double u2, double threshold) {
  if (u1 >= threshold && u2 >= threshold) {
    return -2.0 * (u1 + u2) - 5.0;
  }
  return 2.0 * ((u1 + 1.0) * (u1 + 1.0) + (u2 + 1.0) * (u2 + 1.0));
}

Trace StaticSwitchedModel::simulate(const Trace& inputs) const {
  const auto& u1 = inputs.samples("u1");
  const auto& u2 = inputs.samples("u2");
  std::vector<double> y(inputs.size());
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    y[k] = output(u1[k], u2[k], threshold_);
  }
  return inputs.with_signal("y", std::move(y));
}

// ---------------------------------------------------------------------------
// Delta-sigma surrogate
// ---------------------------------------------------------------------------

DeltaSigmaModel::DeltaSigmaModel(std::size_t steps, ScalarRange input_range)
    : steps_(steps), input_range_(input_range) {
  if (steps_ < 2) {
    throw SimulationError("delta-sigma surrogate needs at least 2 steps");
  }
}

std::vector<InputParam> DeltaSigmaModel::inputs() const {
  std::vector<InputParam> params(4);
  params[0].name = "U";
  params[0].range = input_range_;
  const char* names[] = {"x1_init", "x2_init", "x3_init"};
  for (std::size_t i = 0; i < 3; ++i) {
    params[i + 1].name = names[i];
    params[i + 1].range = {-0.1, 0.1};
  }
  return params;
}

std::array<double, 3> DeltaSigmaModel::advance(State& s, double u) {
  // Scaled integrator cascade with one-bit feedback. The stage gains keep the
  // first two states inside the unit box for small constant inputs while the
  // third state loses stability as |u| grows, which is the regime the
  // specifications probe.
  constexpr double a1 = 0.0444;
  constexpr double a2 = 0.2881;
  constexpr double a3 = 0.7997;
  constexpr double b1 = 0.0444;
  const std::array<double, 3> out{s.x1, s.x2, s.x3};
  const double v = s.x3 >= 0.0 ? 1.0 : -1.0;  // sign(0) = +1
  const State next{s.x1 + b1 * u - a1 * v, s.x2 + s.x1 - a2 * v, s.x3 + s.x2 - a3 * v};
  s = next;
  return out;
}

Trace DeltaSigmaModel::simulate(const Trace& inputs) const {
  const auto& u = inputs.samples("U");
  State state{inputs.samples("x1_init")[0], inputs.samples("x2_init")[0],
              inputs.samples("x3_init")[0]};
  std::vector<double> x1(inputs.size()), x2(inputs.size()), x3(inputs.size());
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const auto out = advance(state, u[k]);
    x1[k] = out[0];
    x2[k] = out[1];
    x3[k] = out[2];
    if (!std::isfinite(state.x1) || !std::isfinite(state.x2) || !std::isfinite(state.x3)) {
      throw SimulationError("delta-sigma state diverged", k);
    }
  }
  return inputs.with_signal("x1", std::move(x1))
      .with_signal("x2", std::move(x2))
      .with_signal("x3", std::move(x3));
}

// ---------------------------------------------------------------------------
// External process model
// ---------------------------------------------------------------------------

ExternalProcessModel::ExternalProcessModel(std::string command,
                                           std::vector<InputParam> inputs, double horizon,
                                           double step)
    : command_(std::move(command)), inputs_(std::move(inputs)), horizon_(horizon),
      step_(step) {}

Trace ExternalProcessModel::simulate(const Trace& inputs) const {
  namespace fs = std::filesystem;
  static std::atomic<unsigned> counter{0};
  const unsigned snap = counter++;
  const fs::path dir = fs::temp_directory_path();
  const std::string stem = "vbstl_sim_" + std::to_string(::getpid()) + "_" +
                           std::to_string(snap);
  const fs::path in_path = dir / (stem + "_in.csv");
  const fs::path out_path = dir / (stem + "_out.csv");

  write_trace_csv_file(inputs, in_path.string());
  const std::string cmd =
      command_ + " < '" + in_path.string() + "' > '" + out_path.string() + "'";
  const int status = std::system(cmd.c_str());
  const int exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (exit_code != 0) {
    fs::remove(in_path);
    fs::remove(out_path);
    throw SimulationError("external model '" + command_ + "' exited with status " +
                          std::to_string(exit_code));
  }
  Trace produced = read_trace_csv_file(out_path.string());
  fs::remove(in_path);
  fs::remove(out_path);

  // Merge back any input column the child did not echo.
  for (const auto& [name, values] : inputs.signals()) {
    if (!produced.has_signal(name)) {
      if (produced.size() != inputs.size()) {
        throw SimulationError(
            "external model changed the sample count; cannot merge inputs");
      }
      produced = produced.with_signal(name, values);
    }
  }
  return produced;
}

std::unique_ptr<SutModel> make_builtin_model(const std::string& name,
                                             const std::map<std::string, double>& params) {
  auto get = [&](const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  if (name == "static-switched") {
    return std::make_unique<StaticSwitchedModel>(get("thresh", 0.7));
  }
  if (name == "delta-sigma") {
    const auto steps = static_cast<std::size_t>(get("steps", 64));
    const ScalarRange input_range{get("input_lo", -0.35), get("input_hi", 0.35)};
    return std::make_unique<DeltaSigmaModel>(steps, input_range);
  }
  throw SimulationError("unknown built-in model '" + name + "'");
}

}  // namespace vbstl
