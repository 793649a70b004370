#include "kaclab/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kaclab {

namespace {
constexpr double kPi = std::numbers::pi;
}

Vec::Vec(std::initializer_list<double> xs) : d_(0), c_{0, 0, 0} {
  if (xs.size() > 3) throw std::invalid_argument("Vec: dimension above 3");
  for (double x : xs) c_[d_++] = x;
}

Vec Vec::from(const double* p, int d) {
  Vec v(d);
  for (int i = 0; i < d; ++i) v.c_[i] = p[i];
  return v;
}

double Vec::norm2() const {
  double s = 0;
  for (int i = 0; i < d_; ++i) s += c_[i] * c_[i];
  return s;
}

double Vec::norm() const { return std::sqrt(norm2()); }

bool Vec::finite() const {
  for (int i = 0; i < d_; ++i)
    if (!std::isfinite(c_[i])) return false;
  return true;
}

Vec Vec::operator+(const Vec& o) const {
  Vec r(d_);
  for (int i = 0; i < d_; ++i) r.c_[i] = c_[i] + o.c_[i];
  return r;
}

Vec Vec::operator-(const Vec& o) const {
  Vec r(d_);
  for (int i = 0; i < d_; ++i) r.c_[i] = c_[i] - o.c_[i];
  return r;
}

Vec Vec::operator*(double s) const {
  Vec r(d_);
  for (int i = 0; i < d_; ++i) r.c_[i] = c_[i] * s;
  return r;
}

double Vec::dot(const Vec& o) const {
  double s = 0;
  for (int i = 0; i < d_; ++i) s += c_[i] * o.c_[i];
  return s;
}

std::string to_string(CrossSection m) {
  switch (m) {
    case CrossSection::MaxwellCutoff: return "maxwell_cutoff";
    case CrossSection::TrueMaxwellTruncated: return "true_maxwell_truncated";
    case CrossSection::HardSpheres: return "hard_spheres";
  }
  return "?";
}

std::string to_string(AngularMass c) {
  return c == AngularMass::Normalized ? "normalized" : "raw_solid_angle";
}

void CollisionKernel::validate() const {
  if (model == CrossSection::TrueMaxwellTruncated) {
    if (!(eps > 0.0 && eps < kPi))
      throw std::invalid_argument("kernel: eps must lie in (0, pi)");
    if (!(nu > 0.0 && nu < 2.0))
      throw std::invalid_argument("kernel: nu must lie in (0, 2)");
  }
}

namespace {

// Surface area of S^{d-1}.
double sphere_area(int d) {
  switch (d) {
    case 1: return 2.0;            // S^0 counting measure
    case 2: return 2.0 * kPi;
    case 3: return 4.0 * kPi;
    default: throw std::invalid_argument("kernels: d must be 1, 2 or 3");
  }
}

// Mass of the truncated grazing profile: integral of theta^{-1-nu}
// over [eps, pi], times the azimuthal sphere factor.
double truncated_mass(const CollisionKernel& k, int d) {
  double az = (d >= 2) ? sphere_area(d - 1) : 1.0;
  return az * (std::pow(k.eps, -k.nu) - std::pow(kPi, -k.nu)) / k.nu;
}

}  // namespace

double CollisionKernel::angular_mass(int d) const {
  if (convention == AngularMass::Normalized) return 1.0;
  if (model == CrossSection::TrueMaxwellTruncated) return truncated_mass(*this, d);
  return sphere_area(d);  // b = 1
}

double CollisionKernel::pair_rate(const double* vi, const double* vj, int d) const {
  double mb = angular_mass(d);
  if (model != CrossSection::HardSpheres) return mb;
  double s = 0;
  for (int k = 0; k < d; ++k) {
    double w = vi[k] - vj[k];
    s += w * w;
  }
  return mb * std::sqrt(s);
}

double CollisionKernel::pair_rate(const Vec& vi, const Vec& vj) const {
  if (vi.dim() != vj.dim())
    throw std::invalid_argument("pair_rate: dimension mismatch");
  return pair_rate(vi.data(), vj.data(), vi.dim());
}

void post_collision_inplace(double* vi, double* vj, const double* sigma, int d) {
  double rel = 0;
  for (int k = 0; k < d; ++k) {
    double w = vj[k] - vi[k];
    rel += w * w;
  }
  rel = 0.5 * std::sqrt(rel);
  for (int k = 0; k < d; ++k) {
    double c = 0.5 * (vi[k] + vj[k]);
    double dk = rel * sigma[k];
    vi[k] = c + dk;
    vj[k] = c - dk;
  }
}

std::pair<Vec, Vec> post_collision(const Vec& vi, const Vec& vj,
                                   const ScatteringDirection& sd) {
  int d = vi.dim();
  if (vj.dim() != d || sd.sigma.dim() != d)
    throw std::invalid_argument("post_collision: dimension mismatch");
  if (std::abs(sd.sigma.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("post_collision: sigma not a unit vector");
  Vec a = vi, b = vj;
  post_collision_inplace(a.data(), b.data(), sd.sigma.data(), d);
  return {a, b};
}

Vec sample_unit_vector(int d, Rng& rng) {
  Vec v(d);
  switch (d) {
    case 1:
      v[0] = (uniform01(rng) < 0.5) ? -1.0 : 1.0;
      return v;
    case 2: {
      double a = 2.0 * kPi * uniform01(rng);
      v[0] = std::cos(a);
      v[1] = std::sin(a);
      return v;
    }
    case 3: {
      double z = 2.0 * uniform01(rng) - 1.0;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double a = 2.0 * kPi * uniform01(rng);
      v[0] = r * std::cos(a);
      v[1] = r * std::sin(a);
      v[2] = z;
      return v;
    }
    default:
      throw std::invalid_argument("sample_unit_vector: d must be 1, 2 or 3");
  }
}

namespace {

// Inverse-CDF draw of theta with density proportional to theta^{-1-nu}
// on [eps, pi].
double sample_truncated_theta(const CollisionKernel& k, Rng& rng) {
  double a = std::pow(k.eps, -k.nu);
  double b = std::pow(kPi, -k.nu);
  double u = uniform01(rng);
  return std::pow(a - u * (a - b), -1.0 / k.nu);
}

// Unit vector orthogonal to u (d >= 2), uniform in the orthogonal circle.
Vec orthogonal_unit(const Vec& u, Rng& rng) {
  int d = u.dim();
  if (d == 2) {
    Vec w(2);
    double s = (uniform01(rng) < 0.5) ? -1.0 : 1.0;
    w[0] = -s * u[1];
    w[1] = s * u[0];
    return w;
  }
  // d = 3: Gram-Schmidt against the axis u is least aligned with.
  Vec e(3);
  if (std::abs(u[0]) <= std::abs(u[1]) && std::abs(u[0]) <= std::abs(u[2]))
    e[0] = 1;
  else if (std::abs(u[1]) <= std::abs(u[2]))
    e[1] = 1;
  else
    e[2] = 1;
  Vec b1 = e - u * e.dot(u);
  b1 = b1 * (1.0 / b1.norm());
  Vec b2(3);
  b2[0] = u[1] * b1[2] - u[2] * b1[1];
  b2[1] = u[2] * b1[0] - u[0] * b1[2];
  b2[2] = u[0] * b1[1] - u[1] * b1[0];
  double a = 2.0 * kPi * uniform01(rng);
  return b1 * std::cos(a) + b2 * std::sin(a);
}

}  // namespace

ScatteringDirection sample_sigma(const CollisionKernel& k, const Vec& u, Rng& rng) {
  int d = u.dim();
  if (std::abs(u.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("sample_sigma: u must be a unit vector");
  k.validate();
  if (k.model != CrossSection::TrueMaxwellTruncated)
    return {sample_unit_vector(d, rng)};
  if (d == 1) {
    // S^0: only theta = pi survives the truncation.
    return {u * -1.0};
  }
  double theta = sample_truncated_theta(k, rng);
  Vec w = orthogonal_unit(u, rng);
  return {u * std::cos(theta) + w * std::sin(theta)};
}

double deflection_theta_marginal(const CollisionKernel& k, double theta, int d) {
  if (!(theta >= 0.0 && theta <= kPi))
    throw std::invalid_argument("deflection_theta_marginal: theta out of [0, pi]");
  if (k.model != CrossSection::TrueMaxwellTruncated)
    return (d >= 2) ? std::pow(std::sin(theta), d - 2) : 1.0;
  if (theta < k.eps) return 0.0;
  return std::pow(theta, -1.0 - k.nu);
}

double deflection_density(const CollisionKernel& k, double cos_theta, int d) {
  if (!(cos_theta >= -1.0 && cos_theta <= 1.0))
    throw std::invalid_argument("deflection_density: cos_theta out of [-1, 1]");
  if (k.model != CrossSection::TrueMaxwellTruncated) return 1.0;
  double theta = std::acos(cos_theta);
  if (theta < k.eps) return 0.0;
  if (d == 1) return std::pow(theta, -1.0 - k.nu);
  double s = std::pow(std::sin(theta), d - 2);
  return std::pow(theta, -1.0 - k.nu) / s;  // +inf at theta = pi for d = 3
}

}  // namespace kaclab
