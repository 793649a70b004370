#pragma once

#include <atomic>

#include "kaclab/chaotic_init.hpp"
#include "kaclab/kac_process.hpp"
#include "kaclab/kernels.hpp"

namespace kaclab {

// Standard Gaussian density in d dimensions (the equilibrium in the
// adopted units: mean 0, unit variance per component).
double maxwellian_density(const double* v, int d);
double maxwellian_density(const Vec& v);

struct Moments {
  double m2 = 0;  // E |v|^2
  double m4 = 0;  // E |v|^4
};

// m4 relaxation rate of the limit equation for Maxwell kernels under the
// given convention, extracted by fitting the linear moment ODE to a
// quadrature of the collision integral on isotropic Gaussian-mixture
// test states. For B = 1 the fourth-moment equation closes:
//   dm4/dt = lambda4 * (m4_eq - m4),   m4_eq = (2 - 1/d) m2^2.
double calibrate_lambda4(const CollisionKernel& k, int d,
                         TimeScale ts = TimeScale::Full);

// Closed moment trajectory (second moment constant, fourth moment a pure
// exponential). Throws for hard spheres: the moment hierarchy does not
// close there, HS references come from large-N self-consistency instead.
Moments moment_ode(const CollisionKernel& k, Moments initial, double t, int d = 3,
                   TimeScale ts = TimeScale::Full);

// Exact self-similar solution of the limit equation for Maxwell
// molecules: Gaussian-times-quadratic profile with shape
// K(t) = 1 - (2/(d+2)) exp(-lambda (t - t0)), valid for t >= t0 where
// K = d/(d+2) is the nonnegativity boundary. lambda is calibrated from
// the kernel convention (half the m4 relaxation rate), never hard-coded.
struct BkwReference {
  int d = 3;
  double lambda = 0;
  double t0 = 0;

  double K(double t) const;  // throws out-of-validity for t < t0
  double density(double t, const double* v) const;
  double density_radial(double t, double r) const;
  Moments moments(double t) const;

  // Rejection sampling from a Gaussian majorant; the majorant scale is
  // picked from a small grid minimizing the bound.
  Vec sample(double t, Rng& rng) const;
  double acceptance_rate() const;

 private:
  mutable std::atomic<long> trials_{0}, accepts_{0};

 public:
  BkwReference() = default;
  BkwReference(const BkwReference& o) : d(o.d), lambda(o.lambda), t0(o.t0) {}
  BkwReference& operator=(const BkwReference& o) {
    d = o.d;
    lambda = o.lambda;
    t0 = o.t0;
    return *this;
  }
};

BkwReference calibrate_bkw(const CollisionKernel& k, int d = 3,
                           TimeScale ts = TimeScale::Full);

// Relative entropy H(f_t | gamma) of the profile, by radial quadrature.
double bkw_rel_entropy(const BkwReference& ref, double t, double tol = 1e-10);

// The profile at a fixed time as a one-particle law (centered, unit
// energy per component; usable as conditioned-product input).
DensitySpec make_bkw_density_spec(const BkwReference& ref, double t);

}  // namespace kaclab
