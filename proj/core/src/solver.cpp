#include "mfsde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "mfsde/csv.hpp"

namespace mfsde {
namespace {

double dyadic_holder_constant(const std::vector<double>& t,
                              const std::vector<double>& x, double exponent) {
  const std::size_t n = x.size();
  double best = 0.0;
  for (std::size_t lag = 1; lag < n; lag *= 2) {
    for (std::size_t i = 0; i + lag < n; ++i) {
      const double span = t[i + lag] - t[i];
      if (span <= 0.0) continue;
      best = std::max(best, std::abs(x[i + lag] - x[i]) / std::pow(span, exponent));
    }
  }
  return best;
}

}  // namespace

SolverError::SolverError(std::size_t step, double time, double state)
    : std::runtime_error("solver blow-up at step " + std::to_string(step) + " (t = " +
                         std::to_string(time) + ", x = " + std::to_string(state) + ")"),
      step_(step),
      time_(time),
      state_(state) {}

void validate(const SegmentProblem& p) {
  if (p.times.empty()) throw std::invalid_argument("segment has no time points");
  if (p.v.size() != p.times.size() || p.z.size() != p.times.size()) {
    throw std::invalid_argument("segment drivers do not match its time points");
  }
  if (p.times.front() != 0.0 || p.v.front() != 0.0 || p.z.front() != 0.0) {
    throw std::invalid_argument("segment time and drivers must start at 0");
  }
  for (std::size_t i = 1; i < p.times.size(); ++i) {
    if (!(p.times[i] > p.times[i - 1])) {
      throw std::invalid_argument("segment times must be strictly increasing");
    }
  }
}

std::vector<double> solve_segment(const SegmentProblem& p, const CoefficientSet& coeffs) {
  validate(p);
  const std::size_t n = p.times.size();
  std::vector<double> x(n);
  x[0] = p.initial;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double t = p.offset + p.times[i];
    const double xi = x[i];
    const double next = xi + coeffs.a(t, xi) * (p.times[i + 1] - p.times[i]) +
                        coeffs.b(t, xi) * (p.v[i + 1] - p.v[i]) +
                        coeffs.c(t, xi) * (p.z[i + 1] - p.z[i]);
    if (!std::isfinite(next) || std::abs(next) > blowup_threshold) {
      throw SolverError(i + 1, p.offset + p.times[i + 1], next);
    }
    x[i + 1] = next;
  }
  return x;
}

SamplePath solve_segment(const CoefficientSet& coeffs, double initial,
                         const SamplePath& v, const SamplePath& z, double offset) {
  if (!(v.grid == z.grid)) throw std::invalid_argument("drivers use different grids");
  SegmentProblem p;
  p.offset = offset;
  p.initial = initial;
  p.times = v.grid.times();
  p.v.resize(v.size());
  p.z.resize(z.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    p.v[i] = v[i] - v[0];
    p.z[i] = z[i] - z[0];
  }
  return SamplePath(v.grid, solve_segment(p, coeffs));
}

double SolutionPath::sup_abs() const {
  double best = 0.0;
  for (double x : path.values) best = std::max(best, std::abs(x));
  for (const auto& r : records) best = std::max(best, std::abs(r.left_limit));
  return best;
}

SolutionPath solve_with_jumps(const CoefficientSet& coeffs, double x0,
                              const SamplePath& w, const SamplePath& bh,
                              const JumpTrain& jumps, double holder_exponent) {
  if (!(w.grid == bh.grid)) throw std::invalid_argument("drivers use different grids");
  validate(jumps);
  const GridSpec& grid = w.grid;
  if (std::abs(jumps.horizon - grid.horizon) > 1e-12 * grid.horizon) {
    throw std::invalid_argument("jump train horizon differs from the grid horizon");
  }
  const double h = grid.dt();
  const double tol = 1e-9 * h;

  SolutionPath out;
  out.jumps = jumps;
  out.path = SamplePath(grid, std::vector<double>(grid.size(), 0.0), PathKind::cadlag);
  auto& values = out.path.values;
  values[0] = x0;

  double start = 0.0;
  double state = x0;
  std::size_t next_node = 1;  // first node strictly after `start`

  for (std::size_t k = 0; k <= jumps.count(); ++k) {
    const bool is_jump = k < jumps.count();
    const double end = is_jump ? jumps.times[k] : grid.horizon;

    SegmentProblem p;
    p.offset = start;
    p.initial = state;
    const double w0 = w.interpolate(start);
    const double z0 = bh.interpolate(start);
    p.times.push_back(0.0);
    p.v.push_back(0.0);
    p.z.push_back(0.0);

    std::vector<std::size_t> nodes;
    while (next_node <= grid.steps && grid.time(next_node) < end - tol) {
      nodes.push_back(next_node);
      ++next_node;
    }
    const bool end_on_node =
        next_node <= grid.steps && std::abs(grid.time(next_node) - end) <= tol;

    for (std::size_t i : nodes) {
      p.times.push_back(grid.time(i) - start);
      p.v.push_back(w[i] - w0);
      p.z.push_back(bh[i] - z0);
    }
    if (end > start + tol) {
      if (end_on_node) {
        p.times.push_back(grid.time(next_node) - start);
        p.v.push_back(w[next_node] - w0);
        p.z.push_back(bh[next_node] - z0);
      } else {
        p.times.push_back(end - start);
        p.v.push_back(w.interpolate(end) - w0);
        p.z.push_back(bh.interpolate(end) - z0);
      }
    }

    const std::vector<double> x = solve_segment(p, coeffs);
    for (std::size_t j = 0; j < nodes.size(); ++j) values[nodes[j]] = x[j + 1];
    const double left = x.back();

    SegmentDiagnostics diag;
    diag.start = start;
    diag.end = end;
    diag.points = x.size();
    diag.holder_exponent = holder_exponent;
    diag.holder_constant = dyadic_holder_constant(p.times, x, holder_exponent);
    out.segments.push_back(diag);

    state = left;
    if (is_jump) {
      const double mark = jumps.marks[k];
      state = left + coeffs.q(end, left, mark);
      if (!std::isfinite(state) || std::abs(state) > blowup_threshold) {
        throw SolverError(next_node, end, state);
      }
      out.records.push_back(JumpRecord{end, mark, left, state});
    }
    if (end_on_node) {
      values[next_node] = state;
      ++next_node;
    }
    start = end;
  }
  return out;
}

GridFunction coefficient_values(const TimeStateFn& f, const SamplePath& x) {
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(x.grid.time(i), x[i]);
  return GridFunction(0.0, x.grid.dt(), std::move(v));
}

SamplePath ito_integral_path(const GridFunction& b_values, const SamplePath& w) {
  const GridFunction wg = GridFunction::from_path(w);
  require_same_grid(b_values, wg);
  std::vector<double> out(w.size(), 0.0);
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    out[i + 1] = out[i] + b_values.values[i] * (w[i + 1] - w[i]);
  }
  return SamplePath(w.grid, std::move(out));
}

double pathwise_bound_rhs(double capital_lambda, double jb, double alpha, double k) {
  if (!(capital_lambda >= 1.0)) throw std::invalid_argument("Lambda must be >= 1");
  if (!(jb >= 0.0)) throw std::invalid_argument("Jb must be >= 0");
  if (!(k > 0.0)) throw std::invalid_argument("K must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("fractional order alpha must lie in (0, 1)");
  }
  return k * std::exp(k * std::pow(capital_lambda, 1.0 / (1.0 - alpha))) * (1.0 + jb);
}

void write_solution_csv(std::ostream& os, const SolutionPath& s) {
  using csv::format_double;
  os << "t,value,left_limit_flag\n";
  const GridSpec& grid = s.path.grid;
  const double tol = 1e-9 * grid.dt();
  std::size_t r = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid.time(i);
    while (r < s.records.size() && s.records[r].time < t - tol) {
      os << format_double(s.records[r].time) << ',' << format_double(s.records[r].left_limit)
         << ",1\n";
      os << format_double(s.records[r].time) << ',' << format_double(s.records[r].value)
         << ",0\n";
      ++r;
    }
    if (r < s.records.size() && std::abs(s.records[r].time - t) <= tol) {
      os << format_double(t) << ',' << format_double(s.records[r].left_limit) << ",1\n";
      ++r;
    }
    os << format_double(t) << ',' << format_double(s.path[i]) << ",0\n";
  }
}

}  // namespace mfsde
