#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "kaclab/state.hpp"

namespace kaclab {

enum class Scheme { SSA, Rejection };

std::string to_string(Scheme s);

// Time-scale convention for the jump rates. Full = per-unordered-pair
// rate (2/N) B m_b (ordered-pair generator); Half = (1/N) B m_b.
enum class TimeScale { Full, Half };

inline double time_scale_factor(TimeScale t) {
  return t == TimeScale::Full ? 1.0 : 0.5;
}

struct StepResult {
  double waiting_time = 0.0;  // infinity when frozen
  bool frozen = false;
  int i = -1, j = -1;         // collided pair (real jumps only)
  bool fictitious = false;    // rejection scheme thinning jump
};

// Incremental pair-rate bookkeeping for hard spheres: per-particle row
// sums r_i = sum_j B(|v_i - v_j|), refreshed in O(N) per collision.
struct RateCache {
  bool valid = false;
  std::vector<double> row;   // r_i
  double total = 0.0;        // sum_{i<j} B_ij
  std::uint64_t events_since_sync = 0;
  void rebuild(const State& s);
  void update_after_collision(const State& s, int i, int j,
                              const std::vector<double>& old_bi,
                              const std::vector<double>& old_bj);
};

// Majorant bookkeeping for the thinning scheme.
struct MajorantCache {
  bool valid = false;
  double vmax = 0.0;
  double spread = 0.0;  // max distance from particle 0; zero means frozen
  std::uint64_t events_since_sync = 0;
  void rebuild(const State& s);
};

// One exact SSA jump: waiting time Exp(total rate), pair picked
// proportionally to its rate, sigma by sample_sigma, pair map applied.
// Returns frozen (infinite waiting time) when every rate vanishes.
StepResult step_ssa(State& s, Rng& rng, TimeScale ts = TimeScale::Full,
                    RateCache* cache = nullptr);

// Thinning variant: exponential clock at a majorant rate, uniform pair
// proposal, acceptance B_ij / B_max. Identical trajectory law to
// step_ssa; fictitious jumps advance time only. Throws on a detected
// majorant violation (stale bound).
StepResult step_rejection(State& s, Rng& rng, TimeScale ts = TimeScale::Full,
                          MajorantCache* cache = nullptr);

struct Trajectory {
  std::vector<double> times;            // strictly increasing
  std::vector<std::vector<double>> snapshots;  // N*d each
  std::vector<std::uint64_t> collision_counts;
  bool frozen = false;
  double frozen_time = std::numeric_limits<double>::infinity();
};

// Event-driven simulation, snapshots recorded exactly at grid times
// (the state is constant between jumps). Deterministic given the seed.
Trajectory simulate(const State& state0, const std::vector<double>& t_grid,
                    Rng& rng, Scheme scheme = Scheme::SSA,
                    TimeScale ts = TimeScale::Full);

// R independent replica snapshot stacks at common grid times: the
// empirical surrogate of the N-particle law.
struct Ensemble {
  int N = 0, d = 3, R = 0;
  std::vector<double> grid;
  CollisionKernel kernel;
  Scheme scheme = Scheme::SSA;
  std::uint64_t base_seed = 0;
  std::vector<std::uint64_t> seeds;          // per replica
  std::vector<std::vector<std::vector<double>>> data;  // [r][t] -> N*d
  std::vector<std::uint64_t> collision_counts;         // [r] at final grid time
  std::vector<bool> frozen;                            // [r]

  const double* velocities(int r, int t) const { return data[r][t].data(); }
};

using InitSampler = std::function<State(Rng&)>;

// Replica r is seeded by derive_seed(base_seed, r); replicas run on a
// worker pool but the result is a pure function of (inputs, seeds).
Ensemble run_ensemble(const InitSampler& init, int N, int R,
                      const std::vector<double>& t_grid,
                      const CollisionKernel& kernel, std::uint64_t base_seed,
                      Scheme scheme = Scheme::SSA,
                      TimeScale ts = TimeScale::Full, int workers = 0);

// Run R seeded jobs on the worker pool (same seeding contract as
// run_ensemble; results must be written to per-index slots).
void for_each_replica(int R, std::uint64_t base_seed,
                      const std::function<void(int, Rng&)>& body, int workers = 0);

// --- On-disk format (JSON manifest + raw row-major N x d float64 per
// (replica, grid time); see README for the schema) ---
void save_ensemble(const Ensemble& e, const std::string& dir, bool csv = false);
Ensemble load_ensemble(const std::string& dir);

}  // namespace kaclab
