#include <atomic>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mfsde/analysis.hpp"
#include "mfsde/stats.hpp"

using namespace mfsde;

namespace {

EnsembleSpec spec_for(const std::string& model, std::size_t replicas, double rate = 0.0) {
  EnsembleSpec s;
  s.model = make_model(model);
  s.grid = GridSpec(1.0, 128);
  s.rate = rate;
  s.marks = UniformMarks{-1.0, 1.0};
  s.seed = Seed{17, 0};
  s.replicas = replicas;
  return s;
}

}  // namespace

TEST_CASE("parallel_for") {
  std::vector<int> out(1000, 0);
  parallel_for(out.size(), [&](std::size_t i) { out[i] = static_cast<int>(i) * 2; }, 4);
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(2 * i));

  std::atomic<int> ran{0};
  try {
    parallel_for(
        100,
        [&](std::size_t i) {
          ++ran;
          if (i == 37 || i == 80) throw std::runtime_error(std::to_string(i));
        },
        8);
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "37");
  }
  CHECK(ran.load() == 100);
}

TEST_CASE("ensembles are reproducible and thread-count independent") {
  auto s = spec_for("jump_mixed", 64, 3.0);
  s.threads = 1;
  const auto a = simulate_ensemble(s);
  s.threads = 6;
  const auto b = simulate_ensemble(s);
  CHECK(a.sup_values() == b.sup_values());
  s.seed = Seed{18, 0};
  CHECK(simulate_ensemble(s).sup_values() != a.sup_values());
}

TEST_CASE("moments") {
  SUBCASE("constant solution") {
    auto s = spec_for("zero", 100);
    s.x0 = 2.0;
    const auto t = estimate_moments(simulate_ensemble(s), {1, 2, 4, 8});
    for (const auto& r : t.rows) {
      CHECK(r.mean == std::pow(2.0, r.p));
      CHECK(r.stable);
    }
    CHECK(t.stable());
  }
  SUBCASE("sup of fBm squared is stable at M = 1e4") {
    auto s = spec_for("additive_fbm", 10000);
    s.x0 = 0.0;
    const auto t = estimate_moments(simulate_ensemble(s), {2});
    CHECK(t.rows[0].mean > 0.0);
    CHECK(t.stable());
  }
  SUBCASE("pure jumps with bounded marks, p = 8") {
    const auto t = estimate_moments(simulate_ensemble(spec_for("pure_jump", 10000, 3.0)), {8});
    CHECK(t.stable());
    CHECK(t.excluded == 0);
  }
  SUBCASE("empirical power means are non-decreasing") {
    const auto t = estimate_moments(simulate_ensemble(spec_for("linear_c", 200)), {0.5, 1, 2, 3, 8});
    CHECK(t.power_means_monotone);
    for (std::size_t k = 1; k < t.rows.size(); ++k) {
      CHECK(std::pow(t.rows[k].mean, 1 / t.rows[k].p) >= std::pow(t.rows[k - 1].mean, 1 / t.rows[k - 1].p) - 1e-12);
    }
  }
  SUBCASE("too few replicas") {
    CHECK_THROWS(estimate_moments(simulate_ensemble(spec_for("zero", 50)), {1}));
  }
}

TEST_CASE("tail diagnostic") {
  SUBCASE("constant sample is degenerate and supported") {
    const auto r = tail_diagnostic(std::vector<double>(400, 3.0), 8);
    CHECK(std::isinf(r.slope));
    CHECK(r.supported);
  }
  SUBCASE("Pareto sample recovers its index") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> x(40000);
    for (double& v : x) v = std::pow(1.0 - u(rng), -1.0 / 3.0);
    const auto r = tail_diagnostic(x, 1.5);
    CHECK(r.order_statistics == 200);
    CHECK(r.slope == doctest::Approx(3.0).epsilon(0.2));
    CHECK(r.supported);
    CHECK_FALSE(tail_diagnostic(x, 3.0).supported);
  }
  SUBCASE("lognormal-type model has a steep tail") {
    const auto r = tail_diagnostic(simulate_ensemble(spec_for("linear_c", 2000)), 2.0);
    CHECK(r.slope > 3.0);
  }
  SUBCASE("out-of-hypothesis control is reported, not asserted") {
    const auto r = tail_diagnostic(simulate_ensemble(spec_for("unbounded_b", 400, 2.0)), 8.0);
    CHECK(r.order_statistics == 20);
    CHECK(r.p_max == 8.0);
  }
}

TEST_CASE("pathwise lemma") {
  SUBCASE("zero model") {
    auto s = spec_for("zero", 40);
    s.keep_paths = true;
    const auto rep = verify_pathwise_lemma(simulate_ensemble(s), 0.3);
    for (const auto& p : rep.paths) {
      CHECK(p.lhs == 1.0);
      CHECK(p.capital_lambda >= 1.0);
      CHECK(p.jb == 0.0);
    }
    CHECK(rep.k_fit <= 1.0);
    CHECK(rep.pass);
  }
  SUBCASE("linear_c at H = 0.75, alpha = 0.3") {
    auto s = spec_for("linear_c", 400);
    s.grid = GridSpec(1.0, 256);
    s.keep_paths = true;
    const auto rep = verify_pathwise_lemma(simulate_ensemble(s), 0.3);
    CHECK(rep.training == 200);
    CHECK(rep.holdout_rate >= 0.95);
    CHECK(rep.pass);
    for (std::size_t i = 1; i < rep.k_envelope.size(); ++i) {
      CHECK(rep.k_envelope[i] >= rep.k_envelope[i - 1]);
    }
    CHECK(rep.k_envelope.back() == rep.k_fit);
    for (std::size_t i = 0; i < rep.training; ++i) {
      const auto& p = rep.paths[i];
      CHECK(p.lhs <= pathwise_bound_rhs(p.capital_lambda, p.jb, 0.3, rep.k_fit) * (1 + 1e-9));
    }
  }
  SUBCASE("requires stored jump-free paths") {
    CHECK_THROWS(verify_pathwise_lemma(simulate_ensemble(spec_for("zero", 10)), 0.3));
    auto s = spec_for("pure_jump", 10, 1.0);
    s.keep_paths = true;
    CHECK_THROWS(verify_pathwise_lemma(simulate_ensemble(s), 0.3));
  }
  SUBCASE("minimal K solves r = K exp(K c)") {
    for (double r : {0.01, 1.0, 50.0}) {
      for (double c : {1.0, 2.5}) {
        const double k = minimal_k(r, c);
        CHECK(k * std::exp(k * c) == doctest::Approx(r).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("kernel estimates") {
  SUBCASE("alpha near zero: ratio at most one") {
    const auto rep = verify_kernel_estimates(1e-6, {1, 10, 100}, 4);
    for (const auto& w : rep.weighted) CHECK(w.ratio <= 1.0);
  }
  SUBCASE("Beta bound at alpha = 1/4, u = 1/2, t = 1 against quadrature") {
    boost::math::quadrature::tanh_sinh<double> q;
    const double lhs = q.integrate(
        [](double s) { return std::pow(0.5 - s, -0.25) * std::pow(1.0 - s, -1.25); }, 0.0, 0.5);
    const double bound = boost::math::beta(0.75, 0.5) * std::pow(0.5, -0.5);
    CHECK(lhs / bound <= 1.0);
    // Grid with points = 1 evaluates exactly this pair.
    const auto rep = verify_kernel_estimates(0.25, {1.0}, 1);
    REQUIRE(rep.beta.size() == 1);
    CHECK(rep.beta[0].u == 0.5);
    CHECK(rep.beta[0].lhs == doctest::Approx(lhs).epsilon(1e-9));
  }
  SUBCASE("lambda^{alpha-1} captures the rate") {
    const auto rep = verify_kernel_estimates(0.3, {100.0, 1000.0}, 2);
    CHECK(std::abs(rep.weighted[1].ratio / rep.weighted[0].ratio - 1.0) < 0.01);
  }
  SUBCASE("full grid passes") {
    const auto rep = verify_kernel_estimates(0.375, {1, 10, 100, 1000}, 20);
    CHECK(rep.beta.size() == 210);
    CHECK(rep.pass);
    CHECK(rep.max_ratio <= 1.001);
  }
}

TEST_CASE("self-similarity") {
  CHECK(self_similarity_exponent(0.75, 0.3) == doctest::Approx(0.05 / 0.7));
  for (double h : {0.55, 0.75, 0.95}) {
    for (double a : {1.0 - h + 1e-3, 0.5 * (1.5 - h), 0.499}) {
      CHECK(self_similarity_exponent(h, a) < 1.0);
    }
  }
  SUBCASE("whole interval is identical in law") {
    const auto rep = verify_self_similarity(0.75, 0.3, {{0.0, 1.0}}, 300, Seed{4, 0}, 128);
    CHECK(rep.pass);
  }
  SUBCASE("[0, 1/4] passes and the doubled exponent fails") {
    const auto ok = verify_self_similarity(0.75, 0.3, {{0.0, 0.25}}, 1000, Seed{4, 0}, 512);
    CHECK(ok.rows[0].cells == 128);
    CHECK(ok.pass);
    const auto bad = verify_self_similarity(0.75, 0.3, {{0.0, 0.25}}, 1000, Seed{4, 0}, 512, 2.0);
    CHECK_FALSE(bad.pass);
  }
}

TEST_CASE("compound Poisson product moment") {
  SUBCASE("g = 1") {
    const auto r = verify_jump_product_moment(3.0, UniformMarks{}, [](double) { return 1.0; },
                                              0.5, 1.0, 1000, Seed{2, 0});
    CHECK(r.empirical == 1.0);
    CHECK(r.exact == 1.0);
    CHECK(r.pass);
  }
  SUBCASE("rate zero") {
    const auto r = verify_jump_product_moment(0.0, UniformMarks{}, [](double y) { return 2 + y; },
                                              1.0, 1.0, 1000, Seed{2, 0});
    CHECK(r.empirical == 1.0);
    CHECK(r.exact == 1.0);
  }
  SUBCASE("two-point marks, g = 1 + |y|, rate 2, p = 1/4") {
    const TwoPointMarks tp{-0.5, 1.0, 0.5};
    const double eg = 0.5 * 1.5 + 0.5 * 2.0;
    const auto r = verify_jump_product_moment(2.0, tp, [](double y) { return 1 + std::abs(y); },
                                              0.25, 1.0, 100000, Seed{3, 0});
    CHECK(r.exact == doctest::Approx(std::exp((eg - 1.0) * 2.0)).epsilon(1e-12));
    CHECK(r.pass);
  }
}

TEST_CASE("statistics helpers") {
  const std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8, 9};
  CHECK(stats::mean(x) == 5.0);
  CHECK(stats::variance(x) == doctest::Approx(7.5));
  const auto bm = stats::batch_means(x);
  CHECK(bm.batches == 3);
  CHECK(bm.mean == 5.0);
  CHECK(bm.standard_error == doctest::Approx(std::sqrt(9.0 / 3.0)));
  CHECK(stats::kolmogorov_q(0.0) == doctest::Approx(1.0));
  CHECK(stats::kolmogorov_q(1.36) == doctest::Approx(0.049).epsilon(0.02));
  CHECK(stats::ks_two_sample(x, x).statistic == 0.0);
}
