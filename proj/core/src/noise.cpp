#include "mfsde/noise.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <unsupported/Eigen/FFT>

#include "mfsde/quadrature.hpp"

namespace mfsde {
namespace {

void require_hurst(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw std::invalid_argument("Hurst index H must lie in (0, 1)");
  }
}

// Autocovariance of unit-step fractional Gaussian noise at lag k.
double fgn_autocovariance(std::size_t k, double hurst) {
  const double h2 = 2.0 * hurst;
  const double kk = static_cast<double>(k);
  if (k == 0) return 1.0;
  return 0.5 * (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) +
                std::pow(kk - 1.0, h2));
}

std::vector<double> standard_normals(std::size_t n, Engine& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> z(n);
  for (auto& v : z) v = normal(rng);
  return z;
}

SamplePath cumulate(const GridSpec& grid, const std::vector<double>& increments) {
  std::vector<double> values(grid.size(), 0.0);
  for (std::size_t i = 0; i < increments.size(); ++i) {
    values[i + 1] = values[i] + increments[i];
  }
  return SamplePath(grid, std::move(values));
}

// Eigenvalues of the minimal power-of-two circulant embedding of the fGn
// autocovariance of length n. Empty if the embedding is not nonnegative
// definite.
std::vector<double> circulant_eigenvalues(std::size_t n, double hurst) {
  const std::size_t m = std::bit_ceil(n);
  const std::size_t size = 2 * m;
  std::vector<double> row(size);
  for (std::size_t k = 0; k <= m; ++k) row[k] = fgn_autocovariance(k, hurst);
  for (std::size_t k = m + 1; k < size; ++k) row[k] = row[size - k];

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, row);

  std::vector<double> eig(size);
  double largest = 0.0;
  for (std::size_t k = 0; k < size; ++k) {
    eig[k] = spectrum[k].real();
    largest = std::max(largest, std::abs(eig[k]));
  }
  for (auto& e : eig) {
    if (e < 0.0) {
      if (e < -1e-10 * largest) return {};
      e = 0.0;
    }
  }
  return eig;
}

std::vector<double> fgn_circulant(std::size_t n, const std::vector<double>& eig,
                                  Engine& rng) {
  const std::size_t size = eig.size();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::complex<double>> weighted(size);
  const double norm = 1.0 / static_cast<double>(size);
  for (std::size_t k = 0; k < size; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    weighted[k] = std::sqrt(eig[k] * norm) * std::complex<double>(re, im);
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> y;
  fft.fwd(y, weighted);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = y[i].real();
  return out;
}

Eigen::MatrixXd fbm_cholesky_factor(const GridSpec& grid, double hurst) {
  const std::size_t n = grid.steps;
  Eigen::MatrixXd cov(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double c = fbm_covariance(grid.time(i + 1), grid.time(j + 1), hurst);
      cov(i, j) = c;
      cov(j, i) = c;
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error(
        "fBm synthesis failed: dense Cholesky factorisation of the covariance "
        "is not positive definite");
  }
  return llt.matrixL();
}

std::vector<double> fbm_values_cholesky(const GridSpec& grid, double hurst,
                                        const std::vector<double>& z) {
  const Eigen::MatrixXd l = fbm_cholesky_factor(grid, hurst);
  const Eigen::Map<const Eigen::VectorXd> zv(z.data(),
                                             static_cast<Eigen::Index>(z.size()));
  const Eigen::VectorXd b = l.triangularView<Eigen::Lower>() * zv;
  std::vector<double> values(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.steps; ++i) values[i + 1] = b(static_cast<Eigen::Index>(i));
  return values;
}

}  // namespace

double fbm_covariance(double s, double t, double hurst) {
  const double h2 = 2.0 * hurst;
  return 0.5 * (std::pow(s, h2) + std::pow(t, h2) - std::pow(std::abs(t - s), h2));
}

SamplePath gen_fbm(const GridSpec& grid, double hurst, const Seed& seed,
                   FbmMethod method) {
  validate(grid);
  require_hurst(hurst);
  Engine rng = seed.engine();

  if (method != FbmMethod::cholesky) {
    const auto eig = circulant_eigenvalues(grid.steps, hurst);
    if (!eig.empty()) {
      auto fgn = fgn_circulant(grid.steps, eig, rng);
      const double scale = std::pow(grid.dt(), hurst);
      for (auto& v : fgn) v *= scale;
      return cumulate(grid, fgn);
    }
    if (method == FbmMethod::circulant) {
      throw std::runtime_error(
          "fBm synthesis failed: circulant embedding is not nonnegative definite");
    }
  }
  const auto z = standard_normals(grid.steps, rng);
  return SamplePath(grid, fbm_values_cholesky(grid, hurst, z));
}

SamplePath gen_wiener(const GridSpec& grid, const Seed& seed) {
  validate(grid);
  Engine rng = seed.engine();
  auto inc = standard_normals(grid.steps, rng);
  const double scale = std::sqrt(grid.dt());
  for (auto& v : inc) v *= scale;
  return cumulate(grid, inc);
}

MarkLaw::MarkLaw(GaussianMarks m) : law_(m) {
  if (!(m.stddev >= 0.0)) throw std::invalid_argument("mark stddev must be >= 0");
}

MarkLaw::MarkLaw(TwoPointMarks m) : law_(m) {
  if (!(m.p_high >= 0.0 && m.p_high <= 1.0)) {
    throw std::invalid_argument("two-point mark probability must lie in [0, 1]");
  }
}

MarkLaw::MarkLaw(UniformMarks m) : law_(m) {
  if (!(m.low < m.high)) throw std::invalid_argument("uniform marks need low < high");
}

double MarkLaw::sample(Engine& rng) const {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GaussianMarks>) {
          return std::normal_distribution<double>(m.mean, m.stddev)(rng);
        } else if constexpr (std::is_same_v<T, TwoPointMarks>) {
          return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < m.p_high
                     ? m.high
                     : m.low;
        } else {
          return std::uniform_real_distribution<double>(m.low, m.high)(rng);
        }
      },
      law_);
}

double MarkLaw::expectation(const std::function<double(double)>& h) const {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GaussianMarks>) {
          if (m.stddev == 0.0) return h(m.mean);
          const double c = 1.0 / std::sqrt(2.0 * M_PI);
          auto r = quad::integrate_smooth(
              [&](double z) { return c * std::exp(-0.5 * z * z) * h(m.mean + m.stddev * z); },
              -12.0, 12.0);
          return r.value;
        } else if constexpr (std::is_same_v<T, TwoPointMarks>) {
          return (1.0 - m.p_high) * h(m.low) + m.p_high * h(m.high);
        } else {
          auto r = quad::integrate_smooth(h, m.low, m.high);
          return r.value / (m.high - m.low);
        }
      },
      law_);
}

bool MarkLaw::bounded() const {
  return !std::holds_alternative<GaussianMarks>(law_);
}

std::string MarkLaw::name() const {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GaussianMarks>) return "gaussian";
        else if constexpr (std::is_same_v<T, TwoPointMarks>) return "two_point";
        else return "uniform";
      },
      law_);
}

JumpTrain gen_jump_train(double rate, const MarkLaw& marks, double horizon,
                         const Seed& seed) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument(
        "jump rate must be finite and non-negative (infinite activity is not "
        "supported)");
  }
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");

  JumpTrain train;
  train.rate = rate;
  train.horizon = horizon;
  if (rate == 0.0) return train;

  Engine rng = seed.engine();
  const auto count = std::poisson_distribution<long long>(rate * horizon)(rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  train.times.resize(static_cast<std::size_t>(count));
  for (auto& t : train.times) {
    // 1 - U lies in (0, 1], so every time is in (0, T].
    t = horizon * (1.0 - unit(rng));
  }
  std::sort(train.times.begin(), train.times.end());
  // Ties have probability zero; nudge them so the train stays strictly ordered.
  for (std::size_t i = 1; i < train.times.size(); ++i) {
    if (train.times[i] <= train.times[i - 1]) {
      train.times[i] = std::nextafter(train.times[i - 1], horizon + 1.0);
    }
  }
  train.marks.resize(train.times.size());
  for (auto& m : train.marks) m = marks.sample(rng);
  return train;
}

DrivingTriple gen_driving_triple(const GridSpec& grid, double hurst, double rate,
                                 const MarkLaw& marks, const Seed& seed,
                                 const DependenceModel& dependence) {
  const Seed w_seed{seed.root, stream::wiener};
  const Seed b_seed{seed.root, stream::fbm};
  const Seed j_seed{seed.root, stream::jumps};

  DrivingTriple out;
  out.jumps = gen_jump_train(rate, marks, grid.horizon, j_seed);
  if (dependence.rho == 0.0) {
    out.wiener = gen_wiener(grid, w_seed);
    out.fbm = gen_fbm(grid, hurst, b_seed);
    return out;
  }

  if (!(std::abs(dependence.rho) <= 1.0)) {
    throw std::invalid_argument("dependence rho must lie in [-1, 1]");
  }
  validate(grid);
  require_hurst(hurst);
  Engine b_rng = b_seed.engine();
  Engine w_rng = w_seed.engine();
  const auto z = standard_normals(grid.steps, b_rng);
  const auto z_own = standard_normals(grid.steps, w_rng);
  out.fbm = SamplePath(grid, fbm_values_cholesky(grid, hurst, z));
  std::vector<double> inc(grid.steps);
  const double s = std::sqrt(grid.dt());
  const double rho = dependence.rho;
  const double rho_c = std::sqrt(1.0 - rho * rho);
  for (std::size_t i = 0; i < inc.size(); ++i) inc[i] = s * (rho * z[i] + rho_c * z_own[i]);
  out.wiener = cumulate(grid, inc);
  return out;
}

}  // namespace mfsde
