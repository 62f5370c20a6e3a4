#include "mfsde/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mfsde {

GridSpec::GridSpec(double horizon, std::size_t steps)
    : horizon(horizon), steps(steps) {
  validate(*this);
}

void validate(const GridSpec& grid) {
  if (!(grid.horizon > 0.0) || !std::isfinite(grid.horizon)) {
    throw std::invalid_argument("grid horizon T must be positive and finite");
  }
  if (grid.steps < 1) {
    throw std::invalid_argument("grid must have at least one step");
  }
}

std::vector<double> GridSpec::times() const {
  std::vector<double> t(size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = time(i);
  return t;
}

std::size_t GridSpec::node_index(double t) const {
  const double pos = t / dt();
  const double nearest = std::round(pos);
  if (nearest < 0.0 || nearest > static_cast<double>(steps) ||
      std::abs(pos - nearest) > 1e-9) {
    throw std::invalid_argument("time " + std::to_string(t) +
                                " is not a grid node");
  }
  return static_cast<std::size_t>(nearest);
}

GridSpec GridSpec::coarsened(std::size_t factor) const {
  if (factor == 0 || steps % factor != 0) {
    throw std::invalid_argument("coarsening factor must divide the step count");
  }
  return GridSpec(horizon, steps / factor);
}

SamplePath::SamplePath(GridSpec grid, std::vector<double> values, PathKind kind)
    : grid(grid), values(std::move(values)), kind(kind) {
  if (this->values.size() != grid.size()) {
    throw std::invalid_argument("path length does not match grid size");
  }
}

SamplePath SamplePath::coarsened(std::size_t factor) const {
  const GridSpec coarse = grid.coarsened(factor);
  std::vector<double> v(coarse.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values[i * factor];
  return SamplePath(coarse, std::move(v), kind);
}

double SamplePath::interpolate(double t) const {
  if (t <= 0.0) return values.front();
  if (t >= grid.horizon) return values.back();
  const double dt = grid.dt();
  auto k = static_cast<std::size_t>(t / dt);
  k = std::min(k, grid.steps - 1);
  const double w = (t - grid.time(k)) / dt;
  if (w == 0.0) return values[k];
  return values[k] + (values[k + 1] - values[k]) * w;
}

GridFunction::GridFunction(double origin, double step, std::vector<double> values)
    : origin(origin), step(step), values(std::move(values)) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (this->values.size() < 2) {
    throw std::invalid_argument("grid function needs at least two nodes");
  }
}

GridFunction GridFunction::from_path(const SamplePath& path) {
  return GridFunction(0.0, path.grid.dt(), path.values);
}

GridFunction GridFunction::from_path(const SamplePath& path, std::size_t first,
                                     std::size_t last) {
  if (first >= last || last >= path.size()) {
    throw std::invalid_argument("invalid node range for restriction");
  }
  return GridFunction(path.grid.time(first), path.grid.dt(),
                      std::vector<double>(path.values.begin() + first,
                                          path.values.begin() + last + 1));
}

void require_same_grid(const GridFunction& f, const GridFunction& g) {
  if (f.size() != g.size() || f.origin != g.origin || f.step != g.step) {
    throw std::invalid_argument("grid functions are defined on different grids");
  }
}

void validate(const JumpTrain& jumps) {
  if (!(jumps.rate >= 0.0) || !std::isfinite(jumps.rate)) {
    throw std::invalid_argument("jump rate must be finite and non-negative");
  }
  if (jumps.times.size() != jumps.marks.size()) {
    throw std::invalid_argument("jump times and marks differ in length");
  }
  double prev = 0.0;
  for (double t : jumps.times) {
    if (!(t > prev) || t > jumps.horizon) {
      throw std::invalid_argument(
          "jump times must be strictly increasing within (0, T]");
    }
    prev = t;
  }
}

}  // namespace mfsde
