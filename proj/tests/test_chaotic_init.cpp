#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "kaclab/chaotic_init.hpp"
#include "kaclab/quadrature.hpp"

using namespace kaclab;

namespace {
constexpr double kPi = std::numbers::pi;

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double dmax = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    double fa = static_cast<double>(i) / a.size();
    double fb = static_cast<double>(j) / b.size();
    dmax = std::max(dmax, std::abs(fa - fb));
  }
  return dmax;
}

}  // namespace

TEST_CASE("sample_product basics") {
  Rng rng = make_rng(1);
  auto delta = make_point_mass(3);
  State s = sample_product(delta, 8, rng);
  for (double x : s.v) CHECK(x == 0.0);

  auto g = make_gaussian_std(3);
  const int reps = 10000, N = 32;
  double mean_epp = 0;
  double cross = 0;
  for (int t = 0; t < reps; ++t) {
    State st = sample_product(g, N, rng);
    double e = 0;
    for (double x : st.v) e += x * x;
    mean_epp += e / N;
    cross += st.vel(0)[0] * st.vel(1)[0];
  }
  mean_epp /= reps;
  cross /= reps;
  CHECK(std::abs(mean_epp - 3.0) < 3 * std::sqrt(2.0 * 3 / (N * double(reps))));
  CHECK(std::abs(cross) < 3.0 / std::sqrt(static_cast<double>(reps)));

  DensitySpec no_sampler;
  no_sampler.name = "bare";
  no_sampler.d = 1;
  no_sampler.log_density = [](const double*) { return 0.0; };
  CHECK_THROWS(sample_product(no_sampler, 4, rng));
}

TEST_CASE("uniform Boltzmann sphere: exact constraints") {
  Rng rng = make_rng(2);
  CHECK_THROWS_AS(sample_uniform_boltzmann_sphere(1, 3, rng), std::invalid_argument);

  // N = 2: forced configuration v_2 = -v_1, |v_1|^2 = d
  State s2 = sample_uniform_boltzmann_sphere(2, 3, rng);
  for (int k = 0; k < 3; ++k)
    CHECK(s2.vel(0)[k] == doctest::Approx(-s2.vel(1)[k]).epsilon(1e-12));
  CHECK(Vec::from(s2.vel(0), 3).norm2() == doctest::Approx(3.0).epsilon(1e-12));

  for (int N : {2, 7, 64}) {
    State s = sample_uniform_boltzmann_sphere(N, 3, rng);
    auto c = conserved_check(s);
    CHECK(c.energy_residual < 1e-9);
    CHECK(c.momentum_residual < 1e-9);
  }
}

TEST_CASE("uniform Boltzmann sphere: Gaussian marginal at large N") {
  Rng rng = make_rng(3);
  const int N = 1024, reps = 1000;
  double m4 = 0, m2 = 0;
  std::size_t count = 0;
  for (int t = 0; t < reps; ++t) {
    State s = sample_uniform_boltzmann_sphere(N, 3, rng);
    for (int i = 0; i < N; ++i) {
      double x = s.vel(i)[0];
      m2 += x * x;
      m4 += x * x * x * x;
      ++count;
    }
  }
  m2 /= count;
  m4 /= count;
  CHECK(std::abs(m2 - 1.0) < 0.01);
  CHECK(std::abs(m4 - 3.0) < 0.05);  // Gaussian fourth moment
}

TEST_CASE("uniform Kac sphere") {
  Rng rng = make_rng(4);
  CHECK_THROWS_AS(sample_uniform_kac_sphere(1, rng), std::invalid_argument);
  const int N = 512, reps = 2000;
  double m4 = 0, m1 = 0;
  for (int t = 0; t < reps; ++t) {
    State s = sample_uniform_kac_sphere(N, rng);
    double e = 0;
    for (double x : s.v) e += x * x;
    CHECK(std::abs(e - N) < 1e-9);
    for (int i = 0; i < N; ++i) {
      m1 += s.v[i];
      m4 += std::pow(s.v[i], 4);
    }
  }
  m1 /= static_cast<double>(N) * reps;
  m4 /= static_cast<double>(N) * reps;
  CHECK(std::abs(m1) < 0.005);       // symmetry v -> -v
  CHECK(std::abs(m4 - 3.0) < 0.05);  // Gaussian limit marginal
}

TEST_CASE("conditioned sampler with f = gamma reduces to the uniform law") {
  Rng rng = make_rng(5);
  SphereSpec sp{SphereVariant::BoltzmannSphere, 16, 3};
  auto g = make_gaussian_std(3);
  ConditionedSampler chain(g, sp, {}, rng);

  std::vector<double> cond, unif;
  for (int t = 0; t < 4000; ++t) {
    const State& s = chain.next(rng);
    cond.push_back(s.vel(0)[0]);
    State u = sample_uniform_boltzmann_sphere(16, 3, rng);
    unif.push_back(u.vel(0)[0]);
  }
  // Gaussian density is constant on the sphere: every proposal accepted
  CHECK(chain.acceptance_rate() == doctest::Approx(1.0));
  double ks = ks_statistic(cond, unif);
  double crit = 1.628 * std::sqrt(2.0 / 4000.0);  // 1% level
  CHECK(ks < crit);
}

TEST_CASE("conditioned sampler on the circle with flat density") {
  Rng rng = make_rng(6);
  SphereSpec sp{SphereVariant::KacSphere, 2, 1};
  // flat box covering the circle of radius sqrt(2), unit energy
  auto f = make_uniform_box(1, -std::sqrt(3.0), std::sqrt(3.0));
  REQUIRE(f.energy == doctest::Approx(1.0));
  ConditionedSampler chain(f, sp, {}, rng);
  const int n = 40000, nb = 16;
  std::vector<int> hist(nb, 0);
  for (int t = 0; t < n; ++t) {
    const State& s = chain.next(rng);
    CHECK(std::abs(s.v[0] * s.v[0] + s.v[1] * s.v[1] - 2.0) < 1e-9);
    double a = std::atan2(s.v[1], s.v[0]);
    hist[std::min(nb - 1, static_cast<int>((a + kPi) / (2 * kPi) * nb))]++;
  }
  double expect = static_cast<double>(n) / nb, chi2 = 0;
  for (int b = 0; b < nb; ++b) chi2 += (hist[b] - expect) * (hist[b] - expect) / expect;
  CHECK(chi2 < 30.58);  // chi2_{0.99, 15 dof}
}

TEST_CASE("conditioned sampler matches quadrature at N = 3 (Kac sphere)") {
  // For N = 3 the Kac sphere is the 2-sphere of radius sqrt(3); by the
  // cylindrical projection the v1-marginal of the conditioned product is
  //   p(v1) ~ int f(v1) f(rho cos phi) f(rho sin phi) dphi,
  // rho = sqrt(3 - v1^2). Deterministic quadrature vs the MCMC histogram
  // in total variation.
  auto f = make_gaussian_mixture_1d(0.8, 1.0 - 0.64);
  REQUIRE(f.energy == doctest::Approx(1.0));

  const int nb = 36;
  const double R = std::sqrt(3.0);
  std::vector<double> pbin(nb, 0.0);
  for (int b = 0; b < nb; ++b) {
    double lo = -R + 2 * R * b / nb, hi = -R + 2 * R * (b + 1) / nb;
    pbin[b] = integrate_1d(
        [&](double v1) {
          double rho = std::sqrt(std::max(0.0, 3.0 - v1 * v1));
          return std::exp(f.log_density(&v1)) *
                 integrate_1d(
                     [&](double phi) {
                       double v2 = rho * std::cos(phi), v3 = rho * std::sin(phi);
                       return std::exp(f.log_density(&v2) + f.log_density(&v3));
                     },
                     0, 2 * kPi, 1e-9);
        },
        lo, hi, 1e-9);
  }
  double mass = std::accumulate(pbin.begin(), pbin.end(), 0.0);
  for (double& x : pbin) x /= mass;

  Rng rng = make_rng(7);
  SphereSpec sp{SphereVariant::KacSphere, 3, 1};
  ConditionedSampler chain(f, sp, {}, rng);
  const int n = 60000;
  std::vector<double> hist(nb, 0.0);
  for (int t = 0; t < n; ++t) {
    const State& s = chain.next(rng);
    int b = std::min(nb - 1, std::max(0, static_cast<int>((s.v[0] + R) / (2 * R) * nb)));
    hist[b] += 1.0 / n;
  }
  double tv = 0;
  for (int b = 0; b < nb; ++b) tv += std::abs(hist[b] - pbin[b]);
  tv *= 0.5;
  CHECK(tv < 0.02);
}

TEST_CASE("conditioned sampler validates normalization") {
  Rng rng = make_rng(8);
  SphereSpec sp{SphereVariant::BoltzmannSphere, 8, 3};
  auto bad = make_radial_gaussian_mixture(3, {1.0}, {2.0});  // energy 6, not 3
  CHECK_THROWS_AS(ConditionedSampler(bad, sp, {}, rng), std::invalid_argument);

  DensitySpec shifted = make_gaussian_std(3);
  shifted.mean_norm = 0.5;
  CHECK_THROWS_AS(ConditionedSampler(shifted, sp, {}, rng), std::invalid_argument);

  SphereSpec kac_bad{SphereVariant::KacSphere, 8, 3};
  CHECK_THROWS_AS(ConditionedSampler(make_gaussian_std(3), kac_bad, {}, rng),
                  std::invalid_argument);
}

TEST_CASE("marginal_samples") {
  auto init = [](Rng& rng) {
    auto g = make_gaussian_std(3);
    return sample_product(g, 12, rng);
  };
  auto e = run_ensemble(init, 12, 400, {0.0}, {}, 99);

  auto full = marginal_samples(e, 12, 0);
  CHECK(full.n == 400);
  CHECK(full.point_dim() == 36);
  CHECK(std::equal(full.point(0), full.point(0) + 36, e.velocities(0, 0)));

  CHECK_THROWS_AS(marginal_samples(e, 13, 0), std::invalid_argument);
  CHECK_THROWS_AS(marginal_samples(e, 2, 5), std::invalid_argument);

  // product data at t = 0: pair-marginal coordinates uncorrelated
  auto pairs = marginal_samples(e, 2, 0);
  double c01 = 0;
  for (std::size_t i = 0; i < pairs.n; ++i)
    c01 += pairs.point(i)[0] * pairs.point(i)[3];
  c01 /= pairs.n;
  CHECK(std::abs(c01) < 3.0 / std::sqrt(static_cast<double>(pairs.n)));

  // exchangeability: blocks (1,2) and (3,4) carry the same statistics
  auto pooled = marginal_samples(e, 2, 0, true);
  CHECK(pooled.correlated);
  CHECK(pooled.n == 400 * 6);
  double s12 = 0, s34 = 0;
  for (int r = 0; r < e.R; ++r) {
    const double* v = e.velocities(r, 0);
    s12 += v[0] * v[3];
    s34 += v[6] * v[9];
  }
  s12 /= e.R;
  s34 /= e.R;
  CHECK(std::abs(s12 - s34) < 6.0 / std::sqrt(static_cast<double>(e.R)));
}
