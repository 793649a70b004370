#pragma once

#include <array>
#include <functional>
#include <string>

#include "kaclab/cloud.hpp"
#include "kaclab/kac_process.hpp"
#include "kaclab/state.hpp"

namespace kaclab {

// A one-particle law: log density up to an additive constant, optional
// direct sampler, and the analytic low moments used for validation.
struct DensitySpec {
  std::string name;
  int d = 1;
  std::function<double(const double*)> log_density;
  std::function<void(Rng&, double*)> sampler;  // optional
  double mean_norm = 0.0;                       // |E v|
  double energy = 0.0;                          // E |v|^2
  std::array<double, 7> moment_bounds{};        // E |v|^k, k = 0..6 (upper estimates)

  bool has_sampler() const { return static_cast<bool>(sampler); }
  Vec sample(Rng& rng) const;
};

// Shipped density library.
DensitySpec make_gaussian_std(int d);
// Centered mixture of mean-+/-mu component Gaussians (d = 1 bimodal).
DensitySpec make_gaussian_mixture_1d(double mu, double sigma2, double weight_plus = 0.5);
// Isotropic mixture of centered Gaussians with per-component variances.
DensitySpec make_radial_gaussian_mixture(int d, const std::vector<double>& weights,
                                         const std::vector<double>& variances);
DensitySpec make_uniform_box(int d, double lo, double hi);
DensitySpec make_point_mass(int d);

enum class SphereVariant { KacSphere, BoltzmannSphere };

struct SphereSpec {
  SphereVariant variant = SphereVariant::BoltzmannSphere;
  int N = 0;
  int d = 3;
  void validate() const;  // KacSphere requires d = 1; N >= 2
};

// N i.i.d. draws from f.
State sample_product(const DensitySpec& f, int N, Rng& rng);

// Exactly uniform on BS^N (total energy N*d, zero momentum): Gaussian
// draw, coordinate-wise centering, energy rescale.
State sample_uniform_boltzmann_sphere(int N, int d, Rng& rng);

// Exactly uniform on KS^N (d = 1, sum v_i^2 = N).
State sample_uniform_kac_sphere(int N, Rng& rng);

struct McmcParams {
  long n_burn = -1;   // default 50*N proposals
  long n_thin = -1;   // default 5*N proposals per returned draw
  int max_restarts = 100;
};

// Metropolis chain over sphere-preserving pair moves targeting the
// product density conditioned to the sphere. Pair rotations on the Kac
// sphere, uniform-sigma collision maps on the Boltzmann sphere; both
// proposals are symmetric and preserve the constraints exactly.
class ConditionedSampler {
 public:
  ConditionedSampler(DensitySpec f, SphereSpec sphere, McmcParams p, Rng& rng);

  // Advances the chain by n_thin proposals and returns the state.
  const State& next(Rng& rng);
  const State& current() const { return state_; }
  double acceptance_rate() const;

 private:
  void propose(Rng& rng);
  DensitySpec f_;
  SphereSpec sphere_;
  McmcParams p_;
  State state_;
  std::vector<double> logf_;  // cached per-particle log densities
  long accepted_ = 0, proposed_ = 0;
};

// One approximate draw from [f^{(x)N}] on the sphere (burn-in included).
State sample_conditioned_product(const DensitySpec& f, const SphereSpec& sphere,
                                 Rng& rng, McmcParams p = {});

// First-j-coordinate tuples, one per replica (i.i.d. rows), or the
// pooled mode with floor(N/j) disjoint tuples per replica (correlated,
// flagged).
PointCloud marginal_samples(const Ensemble& e, int j, int t_index,
                            bool pooled = false);

}  // namespace kaclab
