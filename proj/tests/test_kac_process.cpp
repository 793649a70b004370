#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numeric>
#include <set>

#include "kaclab/chaotic_init.hpp"
#include "kaclab/kac_process.hpp"

using namespace kaclab;

namespace {

CollisionKernel mg() { return {}; }
CollisionKernel hs() {
  CollisionKernel k;
  k.model = CrossSection::HardSpheres;
  return k;
}

State gaussian_state(int N, int d, Rng& rng, CollisionKernel k = {}) {
  State s(N, d, k);
  for (double& x : s.v) x = normal01(rng);
  return s;
}

}  // namespace

TEST_CASE("MG N=2 waiting times are Exp(1)") {
  Rng rng = make_rng(101);
  State s = gaussian_state(2, 3, rng);
  double sum = 0;
  const int n = 100000;
  for (int t = 0; t < n; ++t) sum += step_ssa(s, rng).waiting_time;
  CHECK(std::abs(sum / n - 1.0) < 0.01);
}

TEST_CASE("HS with all velocities equal freezes") {
  Rng rng = make_rng(3);
  State s(4, 3, hs());
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 3; ++k) s.vel(i)[k] = 0.5;
  auto r = step_ssa(s, rng);
  CHECK(r.frozen);
  CHECK(std::isinf(r.waiting_time));
  auto r2 = step_rejection(s, rng);
  CHECK(r2.frozen);
}

TEST_CASE("conservation per accepted step") {
  Rng rng = make_rng(7);
  for (auto kernel : {mg(), hs()}) {
    State s = gaussian_state(16, 3, rng, kernel);
    auto before = conserved_check(s);
    RateCache rc;
    for (int t = 0; t < 500; ++t) step_ssa(s, rng, TimeScale::Full, &rc);
    auto after = conserved_check(s);
    double scale = std::max(1.0, std::abs(before.energy));
    CHECK(std::abs(after.energy - before.energy) <= 1e-12 * scale * 500);
    for (int k = 0; k < 3; ++k)
      CHECK(std::abs(after.momentum[k] - before.momentum[k]) <= 1e-11);
  }
}

TEST_CASE("simulate grid handling") {
  Rng rng = make_rng(5);
  State s = gaussian_state(8, 3, rng);
  auto traj = simulate(s, {0.0}, rng);
  CHECK(traj.snapshots.size() == 1);
  CHECK(traj.snapshots[0] == s.v);
  CHECK_THROWS_AS(simulate(s, {}, rng), std::invalid_argument);
  CHECK_THROWS_AS(simulate(s, {0.0, 0.0}, rng), std::invalid_argument);
}

TEST_CASE("MG collision count is Poisson with rate N-1") {
  // total rate (2/N) * C(N,2) = N - 1 under the normalized convention
  const int N = 64;
  const double t_end = 1.0;
  const int R = 400;
  std::vector<double> counts(R);
  for_each_replica(
      R, 909,
      [&](int r, Rng& rng) {
        State s = gaussian_state(N, 3, rng);
        auto traj = simulate(s, {t_end}, rng);
        counts[r] = static_cast<double>(traj.collision_counts[0]);
      },
      4);
  double mean = std::accumulate(counts.begin(), counts.end(), 0.0) / R;
  double lam = N - 1.0;
  CHECK(std::abs(mean - lam * t_end) < 3 * std::sqrt(lam * t_end / R) + 1e-9);
}

TEST_CASE("MG dispersion: variance over mean near 1") {
  const int N = 8;
  const double t_end = 2.0;
  const int R = 10000;
  std::vector<double> counts(R);
  for_each_replica(
      R, 4242,
      [&](int r, Rng& rng) {
        State s = gaussian_state(N, 3, rng);
        auto traj = simulate(s, {t_end}, rng);
        counts[r] = static_cast<double>(traj.collision_counts[0]);
      },
      4);
  double mean = std::accumulate(counts.begin(), counts.end(), 0.0) / R;
  double var = 0;
  for (double c : counts) var += (c - mean) * (c - mean);
  var /= (R - 1);
  CHECK(var / mean > 0.9);
  CHECK(var / mean < 1.1);
}

TEST_CASE("energy exactly conserved along trajectories") {
  Rng rng = make_rng(55);
  State s = gaussian_state(32, 3, rng);
  double e0 = conserved_check(s).energy;
  auto traj = simulate(s, {0.5, 1.0, 2.0, 4.0}, rng);
  for (const auto& snap : traj.snapshots) {
    double e = 0;
    for (double x : snap) e += x * x;
    CHECK(std::abs(e - e0) <= 1e-9 * std::abs(e0));
  }
}

TEST_CASE("sphere invariance under long runs") {
  Rng rng = make_rng(77);
  State s = sample_uniform_boltzmann_sphere(32, 3, rng);
  s.kernel = mg();
  auto r0 = conserved_check(s);
  REQUIRE(r0.energy_residual < 1e-10);
  REQUIRE(r0.momentum_residual < 1e-10);
  for (int t = 0; t < 200000; ++t) step_ssa(s, rng);
  auto r1 = conserved_check(s);
  CHECK(r1.energy_residual < 1e-9 * s.N);
  CHECK(r1.momentum_residual < 1e-9 * s.N);
}

TEST_CASE("rejection scheme matches SSA for hard spheres") {
  // one-particle moments up to order 4 agree within pooled error
  const int N = 8, R = 4000;
  const double t_end = 3.0;
  std::array<std::vector<double>, 2> mom1, mom3, mom4;
  std::array<double, 2> first_m2{};
  for (int sch = 0; sch < 2; ++sch) {
    mom1[sch].resize(R);
    mom3[sch].resize(R);
    mom4[sch].resize(R);
    Scheme scheme = sch == 0 ? Scheme::SSA : Scheme::Rejection;
    for_each_replica(
        R, 31337,
        [&, sch, scheme](int r, Rng& rng) {
          State s = sample_uniform_boltzmann_sphere(N, 3, rng);
          s.kernel = hs();
          auto traj = simulate(s, {t_end}, rng, scheme);
          double a1 = 0, a2 = 0, a3 = 0, a4 = 0;
          for (int i = 0; i < N; ++i) {
            double x = traj.snapshots[0][3 * i];
            double n2 = 0;
            for (int k = 0; k < 3; ++k) {
              double c = traj.snapshots[0][3 * i + k];
              n2 += c * c;
            }
            a1 += x;
            a2 += n2;
            a3 += x * n2;
            a4 += n2 * n2;
          }
          mom1[sch][r] = a1 / N;
          if (r == 0) first_m2[sch] = a2 / N;
          mom3[sch][r] = a3 / N;
          mom4[sch][r] = a4 / N;
        },
        4);
  }
  auto pooled_z = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double ma = std::accumulate(a.begin(), a.end(), 0.0) / a.size();
    double mb = std::accumulate(b.begin(), b.end(), 0.0) / b.size();
    double va = 0, vb = 0;
    for (double x : a) va += (x - ma) * (x - ma);
    for (double x : b) vb += (x - mb) * (x - mb);
    va /= a.size() * (a.size() - 1.0);
    vb /= b.size() * (b.size() - 1.0);
    return std::abs(ma - mb) / std::sqrt(va + vb + 1e-300);
  };
  CHECK(pooled_z(mom1[0], mom1[1]) < 3);
  CHECK(pooled_z(mom3[0], mom3[1]) < 3);
  CHECK(pooled_z(mom4[0], mom4[1]) < 3);
  // energy per particle stays 3 exactly on the sphere
  CHECK(std::abs(first_m2[0] - 3.0) < 1e-9);
  CHECK(std::abs(first_m2[1] - 3.0) < 1e-9);
}

TEST_CASE("pair selection law at small N (MG)") {
  Rng rng = make_rng(2024);
  const int N = 4;
  State s = gaussian_state(N, 3, rng);
  std::map<std::pair<int, int>, int> freq;
  const int n = 60000;
  for (int t = 0; t < n; ++t) {
    auto r = step_ssa(s, rng);
    freq[{r.i, r.j}]++;
  }
  CHECK(freq.size() == 6);
  double expect = n / 6.0, chi2 = 0;
  for (auto& [pair, c] : freq) chi2 += (c - expect) * (c - expect) / expect;
  CHECK(chi2 < 15.09);  // chi2_{0.99, 5 dof}
}

TEST_CASE("exchangeability of symmetric statistics") {
  // relabeling the initial particles does not move symmetric
  // one-particle functionals beyond noise
  const int N = 16, R = 2000;
  const double t_end = 1.0;
  std::vector<double> stat_a(R), stat_b(R);
  for (int perm = 0; perm < 2; ++perm) {
    for_each_replica(
        R, 606 + perm,
        [&, perm](int r, Rng& rng) {
          State s(N, 3, mg());
          Rng init_rng = make_rng(derive_seed(999, r));
          for (double& x : s.v) x = normal01(init_rng);
          if (perm) {
            for (int i = 0; i < N / 2; ++i)
              for (int k = 0; k < 3; ++k)
                std::swap(s.vel(i)[k], s.vel(N - 1 - i)[k]);
          }
          auto traj = simulate(s, {t_end}, rng);
          double m4 = 0;
          for (int i = 0; i < N; ++i) {
            double n2 = 0;
            for (int k = 0; k < 3; ++k) {
              double c = traj.snapshots[0][3 * i + k];
              n2 += c * c;
            }
            m4 += n2 * n2;
          }
          (perm ? stat_b : stat_a)[r] = m4 / N;
        },
        4);
  }
  double ma = std::accumulate(stat_a.begin(), stat_a.end(), 0.0) / R;
  double mb = std::accumulate(stat_b.begin(), stat_b.end(), 0.0) / R;
  double va = 0, vb = 0;
  for (double x : stat_a) va += (x - ma) * (x - ma);
  for (double x : stat_b) vb += (x - mb) * (x - mb);
  va /= R * (R - 1.0);
  vb /= R * (R - 1.0);
  CHECK(std::abs(ma - mb) / std::sqrt(va + vb) < 3.5);
}

TEST_CASE("run_ensemble determinism and seeds") {
  auto init = [](Rng& rng) {
    State s(8, 3);
    for (double& x : s.v) x = normal01(rng);
    return s;
  };
  auto e1 = run_ensemble(init, 8, 12, {0.5, 1.0}, mg(), 12345);
  auto e2 = run_ensemble(init, 8, 12, {0.5, 1.0}, mg(), 12345, Scheme::SSA,
                         TimeScale::Full, 3);
  REQUIRE(e1.R == 12);
  for (int r = 0; r < 12; ++r)
    for (int t = 0; t < 2; ++t) CHECK(e1.data[r][t] == e2.data[r][t]);

  // R = 1 reduces to simulate with the derived seed
  auto e3 = run_ensemble(init, 8, 1, {0.5, 1.0}, mg(), 777);
  Rng rng = make_rng(derive_seed(777, 0));
  State s0 = init(rng);
  s0.kernel = mg();
  auto traj = simulate(s0, {0.5, 1.0}, rng);
  CHECK(e3.data[0][0] == traj.snapshots[0]);
  CHECK(e3.data[0][1] == traj.snapshots[1]);
}

TEST_CASE("derived seeds pairwise distinct up to 2^20") {
  std::set<std::uint64_t> seen;
  const std::uint64_t R = 1 << 20;
  for (std::uint64_t r = 0; r < R; ++r) seen.insert(derive_seed(42, r));
  CHECK(seen.size() == R);
}

TEST_CASE("conserved_check on product Gaussian data") {
  const int N = 256;
  Rng rng = make_rng(31);
  double mean_energy = 0;
  const int reps = 200;
  for (int t = 0; t < reps; ++t) {
    State s = gaussian_state(N, 3, rng);
    mean_energy += conserved_check(s).energy;
  }
  mean_energy /= reps;
  CHECK(std::abs(mean_energy - 3.0 * N) < 3 * std::sqrt(2.0 * 3 * N / reps));
}

TEST_CASE("ensemble save/load round trip") {
  auto init = [](Rng& rng) {
    State s(4, 3);
    for (double& x : s.v) x = normal01(rng);
    return s;
  };
  auto e = run_ensemble(init, 4, 3, {0.25, 0.5}, mg(), 2021);
  std::string dir =
      (std::filesystem::temp_directory_path() / "kaclab_ens_test").string();
  std::filesystem::remove_all(dir);
  save_ensemble(e, dir);
  auto e2 = load_ensemble(dir);
  CHECK(e2.N == e.N);
  CHECK(e2.seeds == e.seeds);
  for (int r = 0; r < 3; ++r)
    for (int t = 0; t < 2; ++t) CHECK(e2.data[r][t] == e.data[r][t]);

  save_ensemble(e, dir + "_csv", true);
  auto e3 = load_ensemble(dir + "_csv");
  for (int r = 0; r < 3; ++r)
    for (std::size_t i = 0; i < e.data[r][0].size(); ++i)
      CHECK(e3.data[r][0][i] == doctest::Approx(e.data[r][0][i]).epsilon(1e-15));
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(dir + "_csv");
}
