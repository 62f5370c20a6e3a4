#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <variant>

#include "mfsde/grid.hpp"
#include "mfsde/seed.hpp"

namespace mfsde {

enum class FbmMethod {
  automatic,   ///< circulant embedding, dense Cholesky if the embedding fails
  circulant,   ///< circulant embedding only; throws if not nonnegative definite
  cholesky,    ///< dense Cholesky of the covariance matrix
};

/// Closed-form fBm covariance E[B_s B_t] = (s^{2H} + t^{2H} - |t-s|^{2H}) / 2.
double fbm_covariance(double s, double t, double hurst);

/// Exact-in-law fractional Brownian motion on the grid, B_0 = 0.
/// Accepts any 0 < H < 1.
SamplePath gen_fbm(const GridSpec& grid, double hurst, const Seed& seed,
                   FbmMethod method = FbmMethod::automatic);

/// Standard Wiener process on the grid, W_0 = 0.
SamplePath gen_wiener(const GridSpec& grid, const Seed& seed);

// ---------------------------------------------------------------------------
// Mark laws: the normalised jump-size distribution Pi(dy) / Pi(R).

struct GaussianMarks {
  double mean = 0.0;
  double stddev = 1.0;
};

/// P(low) = 1 - p_high, P(high) = p_high.
struct TwoPointMarks {
  double low = -1.0;
  double high = 1.0;
  double p_high = 0.5;
};

struct UniformMarks {
  double low = -1.0;
  double high = 1.0;
};

class MarkLaw {
 public:
  using Variant = std::variant<GaussianMarks, TwoPointMarks, UniformMarks>;

  MarkLaw() = default;
  MarkLaw(GaussianMarks m);
  MarkLaw(TwoPointMarks m);
  MarkLaw(UniformMarks m);

  double sample(Engine& rng) const;

  /// E[h(Y)] for Y drawn from this law: exact for two-point, adaptive
  /// quadrature otherwise.
  double expectation(const std::function<double(double)>& h) const;

  /// Bounded support (two-point, uniform).
  bool bounded() const;
  std::string name() const;
  const Variant& law() const { return law_; }

 private:
  Variant law_ = GaussianMarks{};
};

/// Compound Poisson jump train on (0, T]: N(T) ~ Poisson(rate * T), times are
/// sorted uniforms, marks i.i.d. from `marks` and independent of the times.
JumpTrain gen_jump_train(double rate, const MarkLaw& marks, double horizon,
                         const Seed& seed);

/// Optional dependence between W and B^H. rho = 0 (the default) keeps all
/// three drivers independent. rho != 0 is experimental: B^H is built by
/// dense Cholesky from a standard normal vector Z and the Wiener increments
/// are sqrt(dt) (rho Z + sqrt(1 - rho^2) Z'), so both marginals stay exact.
struct DependenceModel {
  double rho = 0.0;
};

struct DrivingTriple {
  SamplePath wiener;
  SamplePath fbm;
  JumpTrain jumps;
};

/// W, B^H and the jump train from streams 0, 1, 2 of `seed.root`.
DrivingTriple gen_driving_triple(const GridSpec& grid, double hurst, double rate,
                                 const MarkLaw& marks, const Seed& seed,
                                 const DependenceModel& dependence = {});

}  // namespace mfsde
