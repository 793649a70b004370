#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "kaclab/rng.hpp"

namespace kaclab {

// Small velocity vector, d in {1,2,3}. Inline storage, value semantics.
class Vec {
 public:
  Vec() : d_(0), c_{0, 0, 0} {}
  explicit Vec(int d) : d_(d), c_{0, 0, 0} {}
  Vec(std::initializer_list<double> xs);
  static Vec from(const double* p, int d);

  int dim() const { return d_; }
  double& operator[](int i) { return c_[i]; }
  double operator[](int i) const { return c_[i]; }
  const double* data() const { return c_.data(); }
  double* data() { return c_.data(); }

  double norm2() const;
  double norm() const;
  bool finite() const;

  Vec operator+(const Vec& o) const;
  Vec operator-(const Vec& o) const;
  Vec operator*(double s) const;
  double dot(const Vec& o) const;

 private:
  int d_;
  std::array<double, 3> c_;
};

enum class CrossSection {
  MaxwellCutoff,           // MG: B = 1, b = 1
  TrueMaxwellTruncated,    // M with angular truncation: B = 1, b singular at grazing
  HardSpheres,             // HS: B(z) = |z|, b = 1
};

enum class AngularMass {
  Normalized,      // angular mass 1; MG per-ordered-pair rate is exactly 1
  RawSolidAngle,   // angular mass = integral of b over the sphere
};

std::string to_string(CrossSection m);
std::string to_string(AngularMass c);

// Cross-section pair (B, b) plus the angular-mass convention.
struct CollisionKernel {
  CrossSection model = CrossSection::MaxwellCutoff;
  AngularMass convention = AngularMass::Normalized;
  double eps = 0.1;  // truncation angle, TrueMaxwellTruncated only
  double nu = 0.5;   // grazing exponent, theta-marginal ~ theta^{-1-nu}

  void validate() const;  // throws std::invalid_argument
  bool maxwell() const { return model != CrossSection::HardSpheres; }

  // m_b: 1 under Normalized, else the b-mass on S^{d-1}.
  double angular_mass(int d) const;

  // B(|v_i - v_j|) * m_b
  double pair_rate(const Vec& vi, const Vec& vj) const;
  double pair_rate(const double* vi, const double* vj, int d) const;
};

struct ScatteringDirection {
  Vec sigma;  // unit vector on S^{d-1}, |sigma| = 1 within 1e-12
};

// Post-collisional pair: v'_i = (v_i+v_j)/2 + |v_j-v_i|/2 sigma and the
// mirror image. Momentum and energy of the pair are preserved exactly up
// to rounding.
std::pair<Vec, Vec> post_collision(const Vec& vi, const Vec& vj,
                                   const ScatteringDirection& sigma);
void post_collision_inplace(double* vi, double* vj, const double* sigma, int d);

// sigma distributed with density proportional to b(sigma . u) on S^{d-1}.
// Uniform for MG/HS; truncated grazing-singular profile for M.
ScatteringDirection sample_sigma(const CollisionKernel& k, const Vec& u, Rng& rng);

// Unnormalized on-sphere density b(cos theta). For the truncated Maxwell
// profile the theta-marginal b(cos theta) sin^{d-2}(theta) equals
// theta^{-1-nu} on [eps, pi] and the returned value carries the
// 1/sin^{d-2} factor; it diverges at theta = pi when d = 3 (integrable).
double deflection_density(const CollisionKernel& k, double cos_theta, int d);

// The theta-marginal of the angular law (density of the deflection angle
// against d-theta, unnormalized). Finite on (0, pi] for every model.
double deflection_theta_marginal(const CollisionKernel& k, double theta, int d);

Vec sample_unit_vector(int d, Rng& rng);

}  // namespace kaclab
