#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mfsde {

/// Uniform time grid t_i = i * T / n on [0, T].
struct GridSpec {
  double horizon = 1.0;
  std::size_t steps = 1;

  GridSpec() = default;
  GridSpec(double horizon, std::size_t steps);

  double dt() const { return horizon / static_cast<double>(steps); }
  std::size_t size() const { return steps + 1; }
  double time(std::size_t i) const {
    return i == steps ? horizon : static_cast<double>(i) * dt();
  }
  std::vector<double> times() const;

  /// Index of the node equal to t (within a relative tolerance of dt).
  /// Throws std::invalid_argument if t is not a grid node.
  std::size_t node_index(double t) const;

  /// Every `factor`-th node of this grid; steps must be divisible by factor.
  GridSpec coarsened(std::size_t factor) const;

  bool operator==(const GridSpec&) const = default;
};

void validate(const GridSpec& grid);

enum class PathKind { continuous, cadlag };

struct SamplePath {
  GridSpec grid;
  std::vector<double> values;
  PathKind kind = PathKind::continuous;

  SamplePath() = default;
  SamplePath(GridSpec grid, std::vector<double> values,
             PathKind kind = PathKind::continuous);

  double operator[](std::size_t i) const { return values[i]; }
  std::size_t size() const { return values.size(); }

  /// Values at every `factor`-th node.
  SamplePath coarsened(std::size_t factor) const;

  /// Linear interpolation between the two nodes bracketing t.
  double interpolate(double t) const;
};

/// Values sampled on the uniform grid origin + i * step, i = 0..n.
/// Used by the fractional-calculus routines on an arbitrary [a, b].
struct GridFunction {
  double origin = 0.0;
  double step = 1.0;
  std::vector<double> values;

  GridFunction() = default;
  GridFunction(double origin, double step, std::vector<double> values);

  static GridFunction from_path(const SamplePath& path);
  /// Restriction of a path to the nodes first..last (inclusive).
  static GridFunction from_path(const SamplePath& path, std::size_t first,
                                std::size_t last);

  std::size_t size() const { return values.size(); }
  std::size_t cells() const { return values.empty() ? 0 : values.size() - 1; }
  double left() const { return origin; }
  double right() const {
    return origin + step * static_cast<double>(cells());
  }
  double node(std::size_t i) const {
    return origin + step * static_cast<double>(i);
  }
};

/// Throws std::invalid_argument unless f and g share the same nodes.
void require_same_grid(const GridFunction& f, const GridFunction& g);

/// Realisation of a finite-activity Poisson measure on (0, T].
struct JumpTrain {
  std::vector<double> times;
  std::vector<double> marks;
  double rate = 0.0;
  double horizon = 1.0;

  std::size_t count() const { return times.size(); }
  bool empty() const { return times.empty(); }
};

/// Throws std::invalid_argument if times are not strictly increasing in
/// (0, horizon] or marks do not pair with times.
void validate(const JumpTrain& jumps);

}  // namespace mfsde
