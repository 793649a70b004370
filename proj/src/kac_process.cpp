#include "kaclab/kac_process.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace kaclab {

std::string to_string(Scheme s) { return s == Scheme::SSA ? "ssa" : "rejection"; }

namespace {

double rel_speed(const State& s, int i, int j) {
  const double* vi = s.vel(i);
  const double* vj = s.vel(j);
  double w = 0;
  for (int k = 0; k < s.d; ++k) {
    double x = vi[k] - vj[k];
    w += x * x;
  }
  return std::sqrt(w);
}

// Applies the pair map: sigma sampled along the current relative
// direction, then the collision update. Handles |v_i - v_j| = 0 (the map
// is the identity there; MG/M still count the jump).
void collide(State& s, int i, int j, Rng& rng) {
  double* vi = s.vel(i);
  double* vj = s.vel(j);
  double w = 0;
  for (int k = 0; k < s.d; ++k) {
    double x = vi[k] - vj[k];
    w += x * x;
  }
  w = std::sqrt(w);
  Vec sigma(s.d);
  if (w == 0.0) {
    sigma = sample_unit_vector(s.d, rng);  // direction irrelevant, keep stream moving
  } else {
    Vec u(s.d);
    for (int k = 0; k < s.d; ++k) u[k] = (vi[k] - vj[k]) / w;
    double un = u.norm();
    for (int k = 0; k < s.d; ++k) u[k] /= un;
    sigma = sample_sigma(s.kernel, u, rng).sigma;
  }
  post_collision_inplace(vi, vj, sigma.data(), s.d);
  s.collisions += 1;
}

}  // namespace

void RateCache::rebuild(const State& s) {
  row.assign(s.N, 0.0);
  for (int i = 0; i < s.N; ++i)
    for (int j = i + 1; j < s.N; ++j) {
      double b = rel_speed(s, i, j);
      row[i] += b;
      row[j] += b;
    }
  total = 0.0;
  for (double r : row) total += r;
  total *= 0.5;
  events_since_sync = 0;
  valid = true;
}

void RateCache::update_after_collision(const State& s, int i, int j,
                                       const std::vector<double>& old_bi,
                                       const std::vector<double>& old_bj) {
  double ri = 0.0, rj = 0.0;
  for (int k = 0; k < s.N; ++k) {
    if (k == i || k == j) continue;
    double bi = rel_speed(s, i, k);
    double bj = rel_speed(s, j, k);
    row[k] += (bi - old_bi[k]) + (bj - old_bj[k]);
    ri += bi;
    rj += bj;
  }
  double bij = rel_speed(s, i, j);  // invariant under the pair map, kept exact
  row[i] = ri + bij;
  row[j] = rj + bij;
  total = 0.0;
  for (double r : row) total += r;
  total *= 0.5;
  if (++events_since_sync >= static_cast<std::uint64_t>(s.N)) rebuild(s);
}

void MajorantCache::rebuild(const State& s) {
  vmax = 0.0;
  spread = 0.0;
  for (int i = 0; i < s.N; ++i) {
    double n2 = 0;
    const double* vi = s.vel(i);
    for (int k = 0; k < s.d; ++k) n2 += vi[k] * vi[k];
    vmax = std::max(vmax, std::sqrt(n2));
    if (i > 0) spread = std::max(spread, rel_speed(s, 0, i));
  }
  events_since_sync = 0;
  valid = true;
}

StepResult step_ssa(State& s, Rng& rng, TimeScale ts, RateCache* cache) {
  if (s.N < 2) throw std::invalid_argument("step_ssa: N must be at least 2");
  double mb = s.kernel.angular_mass(s.d);
  double pair_scale = time_scale_factor(ts) * 2.0 / s.N;  // per-unordered-pair prefactor
  StepResult res;

  if (s.kernel.maxwell()) {
    // B = 1: all pairs equal, total rate pair_scale * mb * C(N,2).
    double total = pair_scale * mb * 0.5 * s.N * (s.N - 1);
    res.waiting_time = exp_time(rng, total);
    std::size_t pick = uniform_index(rng, static_cast<std::size_t>(s.N) * (s.N - 1) / 2);
    // unrank the (i, j) pair
    int i = 0;
    std::size_t row_len = s.N - 1;
    while (pick >= row_len) {
      pick -= row_len;
      --row_len;
      ++i;
    }
    int j = i + 1 + static_cast<int>(pick);
    s.time += res.waiting_time;
    collide(s, i, j, rng);
    res.i = i;
    res.j = j;
    return res;
  }

  // Hard spheres: rates from the cache (rebuilt if absent).
  RateCache local;
  RateCache* rc = cache ? cache : &local;
  if (!rc->valid || rc->row.size() != static_cast<std::size_t>(s.N)) rc->rebuild(s);
  double total = pair_scale * mb * rc->total;
  if (!(total > 0.0)) {
    res.frozen = true;
    res.waiting_time = std::numeric_limits<double>::infinity();
    return res;
  }
  res.waiting_time = exp_time(rng, total);

  // pick particle i proportional to its row sum, then partner j
  // proportional to B_ij (each unordered pair is reachable from either
  // endpoint, which reproduces weight B_ij overall).
  double u = uniform01(rng) * 2.0 * rc->total;
  int i = 0;
  double acc = 0.0;
  for (; i < s.N - 1; ++i) {
    acc += rc->row[i];
    if (u < acc) break;
  }
  double u2 = uniform01(rng) * rc->row[i];
  int j = -1;
  double acc2 = 0.0;
  for (int k = 0; k < s.N; ++k) {
    if (k == i) continue;
    acc2 += rel_speed(s, i, k);
    if (u2 < acc2) {
      j = k;
      break;
    }
  }
  if (j < 0) j = (i == s.N - 1) ? s.N - 2 : s.N - 1;  // guard rounding tails

  std::vector<double> old_bi(s.N, 0.0), old_bj(s.N, 0.0);
  for (int k = 0; k < s.N; ++k) {
    if (k == i || k == j) continue;
    old_bi[k] = rel_speed(s, i, k);
    old_bj[k] = rel_speed(s, j, k);
  }
  s.time += res.waiting_time;
  collide(s, i, j, rng);
  rc->update_after_collision(s, i, j, old_bi, old_bj);
  res.i = std::min(i, j);
  res.j = std::max(i, j);
  return res;
}

StepResult step_rejection(State& s, Rng& rng, TimeScale ts, MajorantCache* cache) {
  if (s.N < 2) throw std::invalid_argument("step_rejection: N must be at least 2");
  if (s.kernel.maxwell()) return step_ssa(s, rng, ts);  // majorant is tight, no thinning

  MajorantCache local;
  MajorantCache* mc = cache ? cache : &local;
  if (!mc->valid) mc->rebuild(s);
  if (++mc->events_since_sync >= static_cast<std::uint64_t>(s.N)) mc->rebuild(s);

  double bmax = 2.0 * mc->vmax;
  if (!(bmax > 0.0) || mc->spread == 0.0) {
    StepResult res;
    res.frozen = true;
    res.waiting_time = std::numeric_limits<double>::infinity();
    return res;
  }
  double mb = s.kernel.angular_mass(s.d);
  double pair_scale = time_scale_factor(ts) * 2.0 / s.N;
  double majorant = pair_scale * mb * 0.5 * s.N * (s.N - 1) * bmax;

  StepResult res;
  res.waiting_time = exp_time(rng, majorant);
  s.time += res.waiting_time;

  std::size_t pick = uniform_index(rng, static_cast<std::size_t>(s.N) * (s.N - 1) / 2);
  int i = 0;
  std::size_t row_len = s.N - 1;
  while (pick >= row_len) {
    pick -= row_len;
    --row_len;
    ++i;
  }
  int j = i + 1 + static_cast<int>(pick);

  double b = rel_speed(s, i, j);
  if (b > bmax * (1.0 + 1e-12))
    throw std::runtime_error("step_rejection: majorant violation (stale bound)");
  if (uniform01(rng) * bmax <= b) {
    collide(s, i, j, rng);
    // keep the bound valid: a collision can raise the max speed
    double ni = Vec::from(s.vel(i), s.d).norm();
    double nj = Vec::from(s.vel(j), s.d).norm();
    mc->vmax = std::max({mc->vmax, ni, nj});
    res.i = i;
    res.j = j;
  } else {
    res.fictitious = true;
  }
  return res;
}

Trajectory simulate(const State& state0, const std::vector<double>& t_grid,
                    Rng& rng, Scheme scheme, TimeScale ts) {
  if (t_grid.empty()) throw std::invalid_argument("simulate: empty time grid");
  for (std::size_t k = 0; k + 1 < t_grid.size(); ++k)
    if (!(t_grid[k] < t_grid[k + 1]))
      throw std::invalid_argument("simulate: grid times must be strictly increasing");
  if (t_grid.front() < state0.time)
    throw std::invalid_argument("simulate: grid starts before the state time");

  State s = state0;
  RateCache rc;
  MajorantCache mc;
  Trajectory traj;
  traj.times = t_grid;

  std::size_t g = 0;
  // flush grid points at/before the current time
  while (g < t_grid.size() && t_grid[g] <= s.time) {
    traj.snapshots.push_back(s.v);
    traj.collision_counts.push_back(s.collisions);
    ++g;
  }
  while (g < t_grid.size()) {
    State pre = s;  // state is constant between jumps
    StepResult r = (scheme == Scheme::SSA) ? step_ssa(s, rng, ts, &rc)
                                           : step_rejection(s, rng, ts, &mc);
    if (r.frozen) {
      traj.frozen = true;
      traj.frozen_time = s.time;
      while (g < t_grid.size()) {
        traj.snapshots.push_back(s.v);
        traj.collision_counts.push_back(s.collisions);
        ++g;
      }
      break;
    }
    while (g < t_grid.size() && t_grid[g] < s.time) {
      traj.snapshots.push_back(pre.v);
      traj.collision_counts.push_back(pre.collisions);
      ++g;
    }
    while (g < t_grid.size() && t_grid[g] == s.time) {
      traj.snapshots.push_back(s.v);
      traj.collision_counts.push_back(s.collisions);
      ++g;
    }
  }
  return traj;
}

void for_each_replica(int R, std::uint64_t base_seed,
                      const std::function<void(int, Rng&)>& body, int workers) {
  if (workers <= 0) {
    const char* env = std::getenv("KACLAB_WORKERS");
    if (env) workers = std::max(1, std::atoi(env));
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 1;
  }
  workers = std::min(workers, R);
  std::atomic<int> next{0};
  auto work = [&]() {
    for (;;) {
      int r = next.fetch_add(1);
      if (r >= R) return;
      Rng rng = make_rng(derive_seed(base_seed, static_cast<std::uint64_t>(r)));
      body(r, rng);
    }
  };
  if (workers <= 1) {
    work();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
}

Ensemble run_ensemble(const InitSampler& init, int N, int R,
                      const std::vector<double>& t_grid,
                      const CollisionKernel& kernel, std::uint64_t base_seed,
                      Scheme scheme, TimeScale ts, int workers) {
  if (R < 1) throw std::invalid_argument("run_ensemble: R must be at least 1");
  Ensemble e;
  e.N = N;
  e.R = R;
  e.grid = t_grid;
  e.kernel = kernel;
  e.scheme = scheme;
  e.base_seed = base_seed;
  e.seeds.resize(R);
  e.data.resize(R);
  e.collision_counts.assign(R, 0);
  e.frozen.assign(R, false);
  for (int r = 0; r < R; ++r)
    e.seeds[r] = derive_seed(base_seed, static_cast<std::uint64_t>(r));

  std::atomic<int> dim{-1};
  for_each_replica(
      R, base_seed,
      [&](int r, Rng& rng) {
        State s0 = init(rng);
        s0.kernel = kernel;
        s0.validate();
        Trajectory traj = simulate(s0, t_grid, rng, scheme, ts);
        e.data[r] = std::move(traj.snapshots);
        e.collision_counts[r] = traj.collision_counts.back();
        e.frozen[r] = traj.frozen;
        dim.store(s0.d);
      },
      workers);
  e.d = dim.load();
  return e;
}

}  // namespace kaclab
