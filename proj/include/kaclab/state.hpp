#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "kaclab/kernels.hpp"

namespace kaclab {

// Microscopic state V = (v_1, ..., v_N) with elapsed time and collision
// count. Velocities stored row-major N x d.
struct State {
  int N = 0;
  int d = 3;
  std::vector<double> v;  // N*d, row-major
  double time = 0.0;
  std::uint64_t collisions = 0;
  CollisionKernel kernel;

  State() = default;
  State(int N_, int d_, CollisionKernel k = {})
      : N(N_), d(d_), v(static_cast<std::size_t>(N_) * d_, 0.0), kernel(k) {}

  double* vel(int i) { return v.data() + static_cast<std::size_t>(i) * d; }
  const double* vel(int i) const { return v.data() + static_cast<std::size_t>(i) * d; }
  Vec velocity(int i) const { return Vec::from(vel(i), d); }

  void validate() const;  // throws on N < 2 or non-finite entries
};

// Sphere energy normalization: the invariant spheres carry total energy
// N*d (unit variance per component), so the equilibrium marginal is the
// standard Gaussian in d dimensions. The d = 1 Kac sphere keeps the
// textbook sum v_i^2 = N.
inline double sphere_energy(int N, int d) { return static_cast<double>(N) * d; }

struct ConservedSummary {
  std::array<double, 3> momentum{0, 0, 0};  // sum of v_i (first d entries)
  double energy = 0.0;                      // sum of |v_i|^2
  double momentum_residual = 0.0;           // |sum v_i|
  double energy_residual = 0.0;             // |energy - N*d|
};

// Compensated sums of momentum and energy plus sphere-membership
// residuals against the N*d normalization.
ConservedSummary conserved_check(const State& s);

}  // namespace kaclab
