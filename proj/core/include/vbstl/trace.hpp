#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vbstl {

class TraceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A discrete-time, multi-signal record: a strictly increasing sequence of
/// time stamps plus one sample per stamp for each named signal.
///
/// Traces are immutable after construction and safe to share across
/// concurrent evaluations. Signal column order is preserved (it is part of
/// the CSV interchange contract).
class Trace {
public:
  using Series = std::pair<std::string, std::vector<double>>;

  Trace(std::vector<double> times, std::vector<Series> signals);

  std::size_t size() const { return times_.size(); }
  const std::vector<double>& times() const { return times_; }
  double start_time() const { return times_.front(); }
  double end_time() const { return times_.back(); }
  /// Time span covered by the stamps (0 for a single-sample trace).
  double horizon() const { return times_.back() - times_.front(); }

  bool has_signal(const std::string& name) const;
  const std::vector<double>& samples(const std::string& name) const;
  const std::vector<Series>& signals() const { return signals_; }
  std::vector<std::string> signal_names() const;

  /// Stored sample, no interpolation. Throws TraceError on unknown signal
  /// or out-of-range index.
  double sample_at(const std::string& name, std::size_t k) const;

  /// Copy of this trace with one more signal column appended.
  Trace with_signal(std::string name, std::vector<double> values) const;

private:
  std::vector<double> times_;
  std::vector<Series> signals_;
};

/// Per-sample step durations. widths[k] = times[k+1] - times[k] for all but
/// the last sample, whose width repeats the previous one (1.0 for a
/// single-sample trace).
struct StepWidths {
  std::vector<double> widths;

  double total() const;
};

StepWidths step_widths(const Trace& trace);

/// Half-open run of sample indices [first, last).
struct IndexRange {
  std::size_t first = 0;
  std::size_t last = 0;

  bool empty() const { return first >= last; }
  std::size_t count() const { return empty() ? 0 : last - first; }
};

/// All indices j with times[k]+a <= times[j] <= times[k]+b, resolved by time
/// stamp (not index arithmetic) so non-uniform traces work. An empty range is
/// a legal result when the window extends past the trace horizon. Stamp
/// comparisons use a 1e-9 s tolerance so zero-width windows land on grid
/// points computed by different arithmetic.
IndexRange window_indices(const Trace& trace, std::size_t k, double a, double b);

/// Subdivide every step into `factor` equal sub-steps holding the left
/// sample value; the final sample is kept. factor == 1 returns the trace
/// unchanged.
Trace resample_piecewise_constant(const Trace& trace, std::size_t factor);

/// Hold-left lookup at an arbitrary time: value of the latest sample with
/// stamp <= t, clamped to the first/last sample outside the stamp range.
/// Used for time-shifted signal references (e.g. `theta@0.01`).
double value_at_time(const Trace& trace, const std::string& name, double t);

/// CSV interchange: header `time,<sig1>,<sig2>,...`, `.` decimal separator,
/// one row per sample. Values are written with enough digits to round-trip.
Trace read_trace_csv(std::istream& in);
Trace read_trace_csv_file(const std::string& path);
void write_trace_csv(const Trace& trace, std::ostream& out);
void write_trace_csv_file(const Trace& trace, const std::string& path);

}  // namespace vbstl
