#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <thread>
#include <vector>

#include "crimed/corrupted_kl.hpp"
#include "crimed/normal.hpp"
#include "test_support.hpp"

using namespace crimed;

namespace {

double quadrature_kl(const CorruptedDensityPair& pair) {
  const auto integrand = [&](double t) {
    const double p1 = pair.left_density(t);
    const double p2 = pair.right_density(t);
    return p1 * std::log(p1 / p2);
  };
  const double lo = std::min(pair.x, pair.y) - 14.0;
  const double hi = std::max(pair.x, pair.y) + 14.0;
  return oracle::integrate_piecewise(
      integrand,
      {lo, pair.h2_support_boundary(), pair.h1_support_boundary(), hi}, 1e-10);
}

}  // namespace

TEST_CASE("eps construction enforces [0, 1/2)") {
  CHECK_NOTHROW(Eps(0.0));
  CHECK_NOTHROW(Eps(0.49));
  CHECK_THROWS_AS(Eps(-0.1), std::domain_error);
  CHECK_THROWS_AS(Eps(0.5), std::domain_error);
  CHECK_THROWS_AS(Eps(1.0 - 1e-12), std::domain_error);
}

TEST_CASE("delta_min values against the quantile oracle") {
  CHECK(delta_min(Eps(0.0)) == 0.0);
  CHECK(delta_min(Eps(0.2)) ==
        doctest::Approx(2.0 * oracle::norm_quantile(0.625)).epsilon(1e-9));
  CHECK(delta_min(Eps(0.2)) == doctest::Approx(0.6372787279).epsilon(1e-8));
  CHECK(delta_min(Eps(0.01)) ==
        doctest::Approx(2.0 * oracle::norm_quantile(1.0 / 1.98)).epsilon(1e-9));
  CHECK(delta_min(Eps(0.01)) == doctest::Approx(0.0253201539).epsilon(1e-6));

  // monotone nondecreasing, diverging toward eps = 1/2
  double previous = 0.0;
  for (double eps : {0.01, 0.05, 0.1, 0.2, 0.3, 0.45, 0.49}) {
    const double value = delta_min(Eps(eps));
    CHECK(value >= previous);
    previous = value;
  }
  CHECK(delta_min(Eps(0.499)) > 5.0);
}

TEST_CASE("solve_c at the minimum gap returns c = 1") {
  for (double eps : {0.05, 0.1, 0.3}) {
    const double dmin = delta_min(Eps(eps));
    const HuberPairSolution sol = solve_c(dmin, Eps(eps));
    CHECK(sol.c == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(sol.delta_plus == doctest::Approx(dmin).epsilon(1e-6));
    CHECK(sol.delta_minus == doctest::Approx(dmin).epsilon(1e-6));
  }
}

TEST_CASE("solve_c approaches eps/(1-eps) for huge gaps") {
  const HuberPairSolution sol = solve_c(50.0, Eps(0.1));
  CHECK(sol.c == doctest::Approx(0.1 / 0.9).epsilon(1e-3));
}

TEST_CASE("solve_c agrees with an independent bisection oracle") {
  const HuberPairSolution sol = solve_c(1.0, Eps(0.1));
  const double reference = oracle::solve_c_bisection(1.0, 0.1);
  CHECK(std::fabs(sol.c - reference) < 1e-10);
  CHECK(sol.c == doctest::Approx(0.5361444240).epsilon(1e-9));
}

TEST_CASE("solve_c residual, monotonicity, and bracket") {
  for (double eps : {0.01, 0.05, 0.1, 0.2, 0.3, 0.45}) {
    const double dmin = delta_min(Eps(eps));
    double previous_c = 1.0 + 1e-12;
    for (int i = 0; i < 20; ++i) {
      const double delta = dmin + 1e-6 + i * 0.25;
      const HuberPairSolution sol = solve_c(delta, Eps(eps));
      const double residual = sol.c * norm_cdf(sol.delta_minus / 2.0) +
                              norm_cdf(sol.delta_plus / 2.0) -
                              1.0 / (1.0 - eps);
      CHECK(std::fabs(residual) < 1e-10);
      CHECK(sol.c > eps / (1.0 - eps));
      CHECK(sol.c <= 1.0);
      CHECK(sol.c < previous_c);  // strictly decreasing in delta
      // phi(D+/2) = c phi(D-/2) is an identity of the root
      CHECK(norm_pdf(sol.delta_plus / 2.0) ==
            doctest::Approx(sol.c * norm_pdf(sol.delta_minus / 2.0))
                .epsilon(1e-8));
      previous_c = sol.c;
    }
  }
}

TEST_CASE("solve_c domain errors") {
  CHECK_THROWS_AS(solve_c(0.1, Eps(0.2)), std::domain_error);  // below dmin
  CHECK_THROWS_AS(solve_c(1.0, Eps(0.0)), std::domain_error);
}

TEST_CASE("solve_c memo returns identical results, also across threads") {
  const HuberPairSolution first = solve_c(1.25, Eps(0.2));
  const HuberPairSolution second = solve_c(1.25, Eps(0.2));
  CHECK(first.c == second.c);

  std::vector<std::thread> threads;
  std::vector<double> results(4, 0.0);
  for (int i = 0; i < 4; ++i)
    threads.emplace_back(
        [&results, i]() { results[i] = solve_c(1.25, Eps(0.2)).c; });
  for (auto& t : threads) t.join();
  for (double c : results) CHECK(c == first.c);
}

TEST_CASE("kl is zero on the flat region") {
  const Eps eps(0.1);
  CHECK(kl_eps_gauss(0.0, 0.99 * delta_min(eps), eps) == 0.0);
  CHECK(kl_eps_gauss(0.0, -1.0, eps) == 0.0);
  CHECK(kl_eps_gauss(3.0, 3.0, eps) == 0.0);
}

TEST_CASE("kl shift invariance") {
  const Eps eps(0.1);
  for (double x : {-2.0, 0.0, 1.5})
    for (double d : {0.1, 0.7, 2.0})
      for (double y : {2.0, 3.5}) {
        if (y < x + d) continue;
        CHECK(std::fabs(kl_eps_gauss(x + d, y, eps) -
                        kl_eps_gauss(x, y - d, eps)) < 1e-12);
      }
}

TEST_CASE("kl matches quadrature of the density pair") {
  const CorruptedDensityPair pair = huber_pair_densities(0.0, 2.0, Eps(0.1));
  const double quad = quadrature_kl(pair);
  CHECK(std::fabs(kl_eps_gauss(0.0, 2.0, Eps(0.1)) - quad) < 1e-6);
  CHECK(kl_eps_gauss(0.0, 2.0, Eps(0.1)) ==
        doctest::Approx(0.6638300302).epsilon(1e-8));
}

TEST_CASE("kl is continuous down to the uncorrupted divergence") {
  CHECK(kl_eps_gauss(0.0, 2.0, Eps(1e-8)) ==
        doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("kl with eps = 0 equals the Gaussian KL exactly") {
  for (double delta : {0.0, 0.3, 1.0, 2.5})
    CHECK(kl_eps_gauss(0.0, delta, Eps(0.0)) == 0.5 * delta * delta);
  CHECK(kl_eps_gauss(0.0, 2.0, Eps(0.0)) == 2.0);
}

TEST_CASE("kl nondecreasing in the gap and continuous at delta_min") {
  const Eps eps(0.1);
  const double dmin = delta_min(eps);
  double previous = -1.0;
  for (int i = 0; i <= 400; ++i) {
    const double delta = i * (dmin + 5.0) / 400.0;
    const double value = kl_eps_gauss(0.0, delta, eps);
    CHECK(value >= previous);
    CHECK(value >= 0.0);
    previous = value;
  }
  // values straddling delta_min stay within 1e-6 when delta moves by 1e-4
  CHECK(kl_eps_gauss(0.0, dmin + 1e-4, eps) < 1e-6);
}

TEST_CASE("non-convexity witness at eps = 0.1") {
  // Frozen from a grid search over [delta_min, delta_min + 5].
  const Eps eps(0.1);
  const double dmin = delta_min(eps);
  const double d1 = dmin;
  const double d2 = 2.2392195927;
  const double d3 = 4.1990185877;
  const double mid = kl_eps_gauss(0.0, d2, eps);
  const double avg =
      0.5 * (kl_eps_gauss(0.0, d1, eps) + kl_eps_gauss(0.0, d3, eps));
  CHECK(mid > avg);
}

TEST_CASE("derivative formula against central finite differences") {
  const double h = 1e-5;
  for (double eps_value : {0.05, 0.1, 0.3}) {
    const Eps eps(eps_value);
    const double dmin = delta_min(eps);
    for (double delta : {dmin + 0.05, dmin + 0.5, 2.0, 4.0}) {
      const double fd =
          (kl_eps_gauss(0.0, delta + h, eps) -
           kl_eps_gauss(0.0, delta - h, eps)) /
          (2.0 * h);
      const double analytic = kl_eps_gauss_derivative(delta, eps);
      CHECK(analytic == doctest::Approx(fd).epsilon(1e-4));
      CHECK(analytic > 0.0);
    }
  }
}

TEST_CASE("derivative vanishes on and just above the flat region") {
  const Eps eps(0.2);
  CHECK(kl_eps_gauss_derivative(0.5 * delta_min(eps), eps) == 0.0);
  CHECK(kl_eps_gauss_derivative(delta_min(Eps(0.1)) + 1e-6, Eps(0.1)) < 1e-3);
  CHECK(kl_eps_gauss_derivative(2.0, Eps(0.1)) ==
        doctest::Approx(0.5983947903).epsilon(1e-8));
}

TEST_CASE("mean-value gap bound") {
  const Eps eps(0.1);
  CHECK(kl_mean_value_gap_bound(0.7, 0.7, 3.0, eps) == 0.0);

  const double bound = kl_mean_value_gap_bound(0.0, 0.5, 3.0, eps);
  const double actual =
      kl_eps_gauss(0.0, 3.0, eps) - kl_eps_gauss(0.5, 3.0, eps);
  CHECK(bound == doctest::Approx(0.9 * 0.5 * 3.0));
  CHECK(actual <= bound);

  // m_b < m_a: the bound is 0 and the true difference is nonpositive
  CHECK(kl_mean_value_gap_bound(0.5, 0.0, 3.0, eps) == 0.0);
  CHECK(kl_eps_gauss(0.5, 3.0, eps) - kl_eps_gauss(0.0, 3.0, eps) <= 0.0);

  CHECK_THROWS_AS(kl_mean_value_gap_bound(2.9, 0.5, 3.0, eps),
                  std::domain_error);
}

TEST_CASE("mean-value bound holds on a random grid") {
  Rng rng = make_rng(20240917);
  for (int i = 0; i < 100; ++i) {
    const double eps_value = 0.01 + 0.44 * uniform01(rng);
    const Eps eps(eps_value);
    const double dmin = delta_min(eps);
    const double m_star = -2.0 + 7.0 * uniform01(rng);
    const double m_a = m_star - dmin - 1e-3 - 4.0 * uniform01(rng);
    const double m_b = m_star - dmin - 1e-3 - 4.0 * uniform01(rng);
    const double bound = kl_mean_value_gap_bound(m_a, m_b, m_star, eps);
    const double actual =
        kl_eps_gauss(m_a, m_star, eps) - kl_eps_gauss(m_b, m_star, eps);
    CHECK(actual <= bound + 1e-10);
  }
}

TEST_CASE("density pair integrates to one and has the stated supports") {
  const CorruptedDensityPair pair = huber_pair_densities(0.0, 2.0, Eps(0.2));
  const double lo = -14.0;
  const double hi = 16.0;
  const double p1_mass = oracle::integrate_piecewise(
      [&](double t) { return pair.left_density(t); },
      {lo, pair.h1_support_boundary(), hi});
  const double p2_mass = oracle::integrate_piecewise(
      [&](double t) { return pair.right_density(t); },
      {lo, pair.h2_support_boundary(), hi});
  CHECK(p1_mass == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(p2_mass == doctest::Approx(1.0).epsilon(1e-6));

  const double expected_boundary =
      (pair.x + pair.y) / 2.0 +
      std::log(1.0 / pair.solution.c) / (pair.y - pair.x);
  CHECK(pair.h1_support_boundary() ==
        doctest::Approx(expected_boundary).epsilon(1e-12));

  CHECK_THROWS_AS(huber_pair_densities(0.0, 0.1, Eps(0.2)),
                  std::domain_error);
}

TEST_CASE("closed form equals quadrature across the eps-gap grid") {
  for (double eps_value : {0.01, 0.05, 0.1, 0.2, 0.3, 0.45}) {
    const Eps eps(eps_value);
    const double dmin = delta_min(eps);
    for (int i = 0; i < 20; ++i) {
      const double delta = dmin + i * 5.0 / 19.0;
      const double closed = kl_eps_gauss(0.0, delta, eps);
      if (delta <= dmin + 1e-9) {
        CHECK(closed == 0.0);
        continue;
      }
      const double quad =
          quadrature_kl(huber_pair_densities(0.0, delta, eps));
      CHECK(std::fabs(closed - quad) < 1e-6);
    }
  }
}

TEST_CASE("h1 density integrates to one") {
  const CorruptedDensityPair pair = huber_pair_densities(0.0, 2.0, Eps(0.2));
  const double mass = oracle::integrate(
      [&](double t) { return pair.h1_density(t); },
      pair.h1_support_boundary(), pair.y + 16.0);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("huber corruption sampler") {
  const CorruptedDensityPair pair = huber_pair_densities(0.0, 2.0, Eps(0.2));
  Rng rng = make_rng(7);

  const int n = 100000;
  std::vector<double> sample;
  sample.reserve(n);
  const double boundary = pair.h1_support_boundary();
  for (int i = 0; i < n; ++i) {
    const double value =
        sample_huber_corruption(pair, CorruptionSide::kLeft, rng);
    CHECK(value >= boundary);
    sample.push_back(value);
  }

  const auto h1_cdf = [&](double t) {
    if (t <= boundary) return 0.0;
    return oracle::integrate([&](double u) { return pair.h1_density(u); },
                             boundary, t, 1e-9);
  };
  CHECK(oracle::kolmogorov_distance(sample, h1_cdf) < 0.02);

  // the right-side sampler lands in D_c
  for (int i = 0; i < 1000; ++i)
    CHECK(sample_huber_corruption(pair, CorruptionSide::kRight, rng) <=
          pair.h2_support_boundary());
}
