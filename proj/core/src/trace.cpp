#include "vbstl/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace vbstl {

namespace {
constexpr double kStampTolerance = 1e-9;
}

Trace::Trace(std::vector<double> times, std::vector<Series> signals)
    : times_(std::move(times)), signals_(std::move(signals)) {
  if (times_.empty()) {
    throw TraceError("trace must contain at least one time stamp");
  }
  for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
    if (!(times_[i] < times_[i + 1])) {
      throw TraceError("time stamps must be strictly increasing (violation at index " +
                       std::to_string(i + 1) + ")");
    }
  }
  std::unordered_set<std::string> seen;
  for (const auto& [name, values] : signals_) {
    if (!seen.insert(name).second) {
      throw TraceError("duplicate signal name '" + name + "'");
    }
    if (values.size() != times_.size()) {
      throw TraceError("signal '" + name + "' has " + std::to_string(values.size()) +
                       " samples for " + std::to_string(times_.size()) + " time stamps");
    }
  }
}

bool Trace::has_signal(const std::string& name) const {
  return std::any_of(signals_.begin(), signals_.end(),
                     [&](const Series& s) { return s.first == name; });
}

const std::vector<double>& Trace::samples(const std::string& name) const {
  for (const auto& [n, values] : signals_) {
    if (n == name) return values;
  }
  throw TraceError("unknown signal '" + name + "'");
}

std::vector<std::string> Trace::signal_names() const {
  std::vector<std::string> names;
  names.reserve(signals_.size());
  for (const auto& [n, values] : signals_) names.push_back(n);
  return names;
}

double Trace::sample_at(const std::string& name, std::size_t k) const {
  const auto& values = samples(name);
  if (k >= values.size()) {
    throw TraceError("sample index " + std::to_string(k) + " out of range for signal '" +
                     name + "' (length " + std::to_string(values.size()) + ")");
  }
  return values[k];
}

Trace Trace::with_signal(std::string name, std::vector<double> values) const {
  auto signals = signals_;
  signals.emplace_back(std::move(name), std::move(values));
  return Trace(times_, std::move(signals));
}

double StepWidths::total() const {
  return std::accumulate(widths.begin(), widths.end(), 0.0);
}

StepWidths step_widths(const Trace& trace) {
  const auto& t = trace.times();
  StepWidths out;
  out.widths.resize(t.size());
  if (t.size() == 1) {
    out.widths[0] = 1.0;  // single-sample convention
    return out;
  }
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    out.widths[k] = t[k + 1] - t[k];
  }
  out.widths[t.size() - 1] = out.widths[t.size() - 2];
  return out;
}

IndexRange window_indices(const Trace& trace, std::size_t k, double a, double b) {
  const auto& t = trace.times();
  if (k >= t.size()) {
    throw TraceError("window anchor index out of range");
  }
  const double lo = t[k] + a;
  const double hi = t[k] + b;
  auto first = std::lower_bound(t.begin(), t.end(), lo - kStampTolerance);
  auto last = std::upper_bound(t.begin(), t.end(), hi + kStampTolerance);
  IndexRange range;
  range.first = static_cast<std::size_t>(first - t.begin());
  range.last = static_cast<std::size_t>(last - t.begin());
  return range;
}

Trace resample_piecewise_constant(const Trace& trace, std::size_t factor) {
  if (factor == 0) {
    throw TraceError("resample factor must be >= 1");
  }
  if (factor == 1 || trace.size() == 1) {
    return trace;
  }
  const auto& t = trace.times();
  std::vector<double> times;
  times.reserve((t.size() - 1) * factor + 1);
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    const double step = (t[k + 1] - t[k]) / static_cast<double>(factor);
    for (std::size_t i = 0; i < factor; ++i) {
      // Original stamps are emitted exactly; interior stamps are derived.
      times.push_back(i == 0 ? t[k] : t[k] + static_cast<double>(i) * step);
    }
  }
  times.push_back(t.back());

  std::vector<Trace::Series> signals;
  signals.reserve(trace.signals().size());
  for (const auto& [name, values] : trace.signals()) {
    std::vector<double> resampled;
    resampled.reserve(times.size());
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
      for (std::size_t i = 0; i < factor; ++i) resampled.push_back(values[k]);
    }
    resampled.push_back(values.back());
    signals.emplace_back(name, std::move(resampled));
  }
  return Trace(std::move(times), std::move(signals));
}

double value_at_time(const Trace& trace, const std::string& name, double t) {
  const auto& times = trace.times();
  const auto& values = trace.samples(name);
  if (t <= times.front()) return values.front();
  auto it = std::upper_bound(times.begin(), times.end(), t + kStampTolerance);
  const auto idx = static_cast<std::size_t>(it - times.begin());
  return values[idx == 0 ? 0 : idx - 1];
}

namespace {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) {
    throw TraceError("failed to format value");
  }
  return std::string(buf, ptr);
}

double parse_double(const std::string& field, std::size_t line_no) {
  const char* begin = field.c_str();
  const char* end = begin + field.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw TraceError("line " + std::to_string(line_no) + ": cannot parse number '" +
                     field + "'");
  }
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

Trace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw TraceError("empty trace file");
  }
  auto header = split_csv_line(line);
  if (header.empty() || trim(header[0]) != "time") {
    throw TraceError("trace CSV must start with a 'time' column");
  }
  std::vector<std::string> names;
  for (std::size_t i = 1; i < header.size(); ++i) names.push_back(trim(header[i]));

  std::vector<double> times;
  std::vector<std::vector<double>> columns(names.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != names.size() + 1) {
      throw TraceError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(names.size() + 1) + " fields, got " +
                       std::to_string(fields.size()));
    }
    times.push_back(parse_double(fields[0], line_no));
    for (std::size_t i = 0; i < names.size(); ++i) {
      columns[i].push_back(parse_double(fields[i + 1], line_no));
    }
  }
  std::vector<Trace::Series> signals;
  signals.reserve(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    signals.emplace_back(names[i], std::move(columns[i]));
  }
  return Trace(std::move(times), std::move(signals));
}

Trace read_trace_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw TraceError("cannot open trace file '" + path + "'");
  }
  return read_trace_csv(in);
}

void write_trace_csv(const Trace& trace, std::ostream& out) {
  out << "time";
  for (const auto& [name, values] : trace.signals()) out << ',' << name;
  out << '\n';
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out << format_double(trace.times()[k]);
    for (const auto& [name, values] : trace.signals()) {
      out << ',' << format_double(values[k]);
    }
    out << '\n';
  }
}

void write_trace_csv_file(const Trace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw TraceError("cannot open '" + path + "' for writing");
  }
  write_trace_csv(trace, out);
}

}  // namespace vbstl
