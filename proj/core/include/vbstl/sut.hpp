#pragma once

#include <array>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "vbstl/trace.hpp"

namespace vbstl {

class SimulationError : public std::runtime_error {
public:
  explicit SimulationError(const std::string& message, std::size_t step = 0)
      : std::runtime_error(message), step_(step) {}

  std::size_t step() const { return step_; }

private:
  std::size_t step_;
};

struct ScalarRange {
  double lo = 0.0;
  double hi = 1.0;

  bool contains(double v) const { return v >= lo && v <= hi; }
  double width() const { return hi - lo; }
};

enum class Interpolation { Pchip, Linear };

/// One named input of a system under test, together with how a scalar
/// parameter vector is turned into its time signal:
///   Constant       one scalar held over the horizon
///   ControlPoints  n scalars placed evenly in time and interpolated
///   Pulse          a square wave with fixed base/delay and searched
///                  period/amplitude (two scalars)
struct InputParam {
  enum class Kind { Constant, ControlPoints, Pulse };

  std::string name;
  Kind kind = Kind::Constant;
  ScalarRange range;  // Constant value / per-control-point range
  std::size_t points = 1;
  Interpolation interpolation = Interpolation::Pchip;
  double pulse_base = 0.0;
  double pulse_delay = 0.0;
  ScalarRange period_range;
  ScalarRange amplitude_range;

  std::size_t dimension() const;
};

std::size_t parameter_dimension(const std::vector<InputParam>& params);
/// Scalar labels for CSV headers: `name` for constants, `name_0..` for
/// control points, `name_period` / `name_amplitude` for pulses.
std::vector<std::string> parameter_labels(const std::vector<InputParam>& params);
std::vector<double> parameter_lower_bounds(const std::vector<InputParam>& params);
std::vector<double> parameter_upper_bounds(const std::vector<InputParam>& params);

/// Shape-preserving monotone cubic Hermite interpolation (pchip-style
/// harmonic tangents): through monotone knots the interpolant is monotone and
/// never leaves the knot value range.
std::vector<double> interpolate_pchip(std::span<const double> xs, std::span<const double> ys,
                                      std::span<const double> queries);
std::vector<double> interpolate_linear(std::span<const double> xs,
                                       std::span<const double> ys,
                                       std::span<const double> queries);

/// Realizes a parameter point as an input trace on the uniform grid
/// 0, dt, ..., horizon. Throws SimulationError when the point leaves the
/// declared ranges.
Trace generate_inputs(const std::vector<InputParam>& params, std::span<const double> point,
                      double horizon, double dt);

/// A system under test: declared inputs plus a deterministic fixed-step
/// simulator. Instances hold no mutable state across simulate() calls;
/// distinct instances may run concurrently.
class SutModel {
public:
  virtual ~SutModel() = default;

  virtual std::string name() const = 0;
  virtual std::vector<InputParam> inputs() const = 0;
  virtual double horizon() const = 0;
  virtual double step() const = 0;
  /// Runs the model over the input trace; the result contains the inputs
  /// plus every declared output signal.
  virtual Trace simulate(const Trace& inputs) const = 0;
};

/// Piecewise-static system: output y is a closed-form function of two
/// constant inputs, discontinuous on the region where both exceed the
/// threshold (where y turns negative). No dynamics.
class StaticSwitchedModel : public SutModel {
public:
  explicit StaticSwitchedModel(double threshold = 0.7);

  std::string name() const override { return "static-switched"; }
  std::vector<InputParam> inputs() const override;
  double horizon() const override { return 1.0; }
  double step() const override { return 0.5; }
  Trace simulate(const Trace& inputs) const override;

  static double output(double u1, double u2, double threshold);

private:
  double threshold_;
};

/// Discrete third-order modulator surrogate: three cascaded integrators with
/// unit sign feedback, constant input U, initial state searched in
/// [-0.1, 0.1]^3. The state recursion is exposed for stepwise use.
class DeltaSigmaModel : public SutModel {
public:
  explicit DeltaSigmaModel(std::size_t steps = 64, ScalarRange input_range = {-0.35, 0.35});

  std::string name() const override { return "delta-sigma"; }
  std::vector<InputParam> inputs() const override;
  double horizon() const override { return static_cast<double>(steps_ - 1); }
  double step() const override { return 1.0; }
  Trace simulate(const Trace& inputs) const override;

  struct State {
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;
  };
  /// Emits the pre-update state as the step's output, then advances; the
  /// feedback is sign(x3) with sign(0) = +1.
  static std::array<double, 3> advance(State& state, double u);

private:
  std::size_t steps_;
  ScalarRange input_range_;
};

/// Adapter for user-supplied simulators: writes the input trace as CSV to the
/// child's standard input and reads the output trace from its standard
/// output; a nonzero exit status is a simulation failure. Input columns not
/// echoed by the child are merged back into the result.
class ExternalProcessModel : public SutModel {
public:
  ExternalProcessModel(std::string command, std::vector<InputParam> inputs, double horizon,
                       double step);

  std::string name() const override { return "external"; }
  std::vector<InputParam> inputs() const override { return inputs_; }
  double horizon() const override { return horizon_; }
  double step() const override { return step_; }
  Trace simulate(const Trace& inputs) const override;

private:
  std::string command_;
  std::vector<InputParam> inputs_;
  double horizon_;
  double step_;
};

/// Registry of built-in models. Recognized names: "static-switched"
/// (numeric params: thresh), "delta-sigma" (steps, input_lo, input_hi).
std::unique_ptr<SutModel> make_builtin_model(const std::string& name,
                                             const std::map<std::string, double>& params);

}  // namespace vbstl
