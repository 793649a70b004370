#include "kaclab/limit_eq.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "kaclab/quadrature.hpp"

namespace kaclab {

namespace {
constexpr double kPi = std::numbers::pi;
}

double maxwellian_density(const double* v, int d) {
  double q = 0;
  for (int k = 0; k < d; ++k) q += v[k] * v[k];
  return std::pow(2.0 * kPi, -0.5 * d) * std::exp(-0.5 * q);
}

double maxwellian_density(const Vec& v) { return maxwellian_density(v.data(), v.dim()); }

namespace {

// Second angular moment c2 = E[cos^2 theta] of the normalized deflection
// law (theta-marginal quadrature).
double angular_cos2(const CollisionKernel& k, int d) {
  if (d == 1) return 1.0;  // S^0
  double lo = (k.model == CrossSection::TrueMaxwellTruncated) ? k.eps : 1e-12;
  auto w = [&](double th) { return deflection_theta_marginal(k, th, d); };
  double mass = integrate_1d(w, lo, kPi, 1e-12);
  double num = integrate_1d(
      [&](double th) {
        double c = std::cos(th);
        return c * c * w(th);
      },
      lo, kPi, 1e-12);
  return num / mass;
}

// Fourth-moment production <Q(f), |v|^4> for an isotropic state with
// radial moments (m2, m4): the sigma-average reduces to the angular
// moment c2, the (v, v*) average to the radial moments.
double m4_production(double m2, double m4, double c2, int d, double rate_scale) {
  double Es2 = 2 * m4 + 2 * m2 * m2;              // E (|v|^2 + |v*|^2)^2
  double Ec2 = m2 * m2 / d;                        // E (v . v*)^2
  double Ea = 2 * m4 - 2 * m2 * m2;                // E (|v|^2 - |v*|^2)^2
  double e_post = 0.25 * Es2 + 0.25 * c2 * Ea +
                  0.125 * (1.0 - c2) * (Es2 - 4 * Ec2 - Ea);
  return rate_scale * (e_post - m4);
}

struct RadialMixture {
  std::vector<double> w, var;
  double density(double r, int d) const {
    double f = 0;
    for (std::size_t m = 0; m < w.size(); ++m)
      f += w[m] * std::pow(2 * kPi * var[m], -0.5 * d) * std::exp(-0.5 * r * r / var[m]);
    return f;
  }
};

}  // namespace

double calibrate_lambda4(const CollisionKernel& k, int d, TimeScale ts) {
  if (!k.maxwell())
    throw std::invalid_argument(
        "calibrate_lambda4: moments are closed for Maxwell kernels only");
  k.validate();
  double c2 = angular_cos2(k, d);
  // Each particle collides at rate 2 * m_b under the ordered-pair
  // convention (both ordered terms move it).
  double rate_scale = 2.0 * k.angular_mass(d) * time_scale_factor(ts);

  // Test states: isotropic two-component Gaussian mixtures with energy d
  // and a spread of fourth moments; moments by radial quadrature.
  std::vector<std::pair<double, double>> pairs;  // (m4, dm4/dt)
  for (double s1 : {0.25, 0.5, 0.75}) {
    double w1 = 0.5;
    double s2 = (d - w1 * d * s1) / (w1 * d);  // per-component variances, energy d
    RadialMixture mix{{w1, 1 - w1}, {s1, s2}};
    double scale = std::sqrt(std::max(s1, s2));
    double m2 = radial_integral([&](double r) { return r * r * mix.density(r, d); }, d,
                                scale, 1e-12);
    double m4 = radial_integral(
        [&](double r) { return r * r * r * r * mix.density(r, d); }, d, scale, 1e-12);
    pairs.emplace_back(m4, m4_production(m2, m4, c2, d, rate_scale));
  }
  // Linear fit T = a - lambda4 * m4 across the test states.
  double n = static_cast<double>(pairs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pairs) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = n * sxx - sx * sx;
  double slope = (n * sxy - sx * sy) / denom;
  return -slope;
}

Moments moment_ode(const CollisionKernel& k, Moments initial, double t, int d,
                   TimeScale ts) {
  if (!k.maxwell())
    throw std::invalid_argument(
        "moment_ode: unsupported for hard spheres (moments not closed); "
        "use the large-N simulated reference instead");
  double lam4 = calibrate_lambda4(k, d, ts);
  double m4_eq = (2.0 - 1.0 / d) * initial.m2 * initial.m2;
  Moments out;
  out.m2 = initial.m2;
  out.m4 = m4_eq + (initial.m4 - m4_eq) * std::exp(-lam4 * t);
  return out;
}

double BkwReference::K(double t) const {
  if (t < t0)
    throw std::domain_error("bkw: profile not valid before t0 (negative density)");
  return 1.0 - (2.0 / (d + 2)) * std::exp(-lambda * (t - t0));
}

double BkwReference::density_radial(double t, double r) const {
  double Kt = K(t);
  double a = ((d + 2) * Kt - d) / (2 * Kt);
  double b = (1 - Kt) / (2 * Kt * Kt);
  return std::pow(2 * kPi * Kt, -0.5 * d) * std::exp(-0.5 * r * r / Kt) *
         (a + b * r * r);
}

double BkwReference::density(double t, const double* v) const {
  double q = 0;
  for (int k = 0; k < d; ++k) q += v[k] * v[k];
  return density_radial(t, std::sqrt(q));
}

Moments BkwReference::moments(double t) const {
  double Kt = K(t);
  Moments m;
  m.m2 = d;
  m.m4 = d * (d + 2) * (1.0 - (1.0 - Kt) * (1.0 - Kt));
  return m;
}

Vec BkwReference::sample(double t, Rng& rng) const {
  double Kt = K(t);
  double a = ((d + 2) * Kt - d) / (2 * Kt);
  double b = (1 - Kt) / (2 * Kt * Kt);

  // Gaussian majorant gamma_s * M: pick s > K from a small grid
  // minimizing the bound M = (s/K)^{d/2} max_x (a + b x) e^{-beta x}.
  double best_s = 0, best_M = std::numeric_limits<double>::infinity();
  for (double factor : {1.05, 1.2, 1.5, 2.0, 3.0}) {
    double s = Kt * factor;
    double beta = 0.5 / Kt - 0.5 / s;
    double g0 = a;
    double gx = g0;
    if (b > 0) {
      double xstar = 1.0 / beta - a / b;
      if (xstar > 0) gx = (a + b * xstar) * std::exp(-beta * xstar);
    }
    double M = std::pow(s / Kt, 0.5 * d) * std::max(g0, gx);
    if (M < best_M) {
      best_M = M;
      best_s = s;
    }
  }
  double sd = std::sqrt(best_s);
  for (;;) {
    Vec y(d);
    double q = 0;
    for (int k = 0; k < d; ++k) {
      y[k] = sd * normal01(rng);
      q += y[k] * y[k];
    }
    double target = density_radial(t, std::sqrt(q));
    double envelope =
        best_M * std::pow(2 * kPi * best_s, -0.5 * d) * std::exp(-0.5 * q / best_s);
    trials_.fetch_add(1, std::memory_order_relaxed);
    if (uniform01(rng) * envelope <= target) {
      accepts_.fetch_add(1, std::memory_order_relaxed);
      return y;
    }
  }
}

double BkwReference::acceptance_rate() const {
  long t = trials_.load(), a = accepts_.load();
  return t ? static_cast<double>(a) / t : 0.0;
}

BkwReference calibrate_bkw(const CollisionKernel& k, int d, TimeScale ts) {
  BkwReference ref;
  ref.d = d;
  ref.lambda = 0.5 * calibrate_lambda4(k, d, ts);
  ref.t0 = 0.0;
  return ref;
}

double bkw_rel_entropy(const BkwReference& ref, double t, double tol) {
  double Kt = ref.K(t);
  int d = ref.d;
  auto h = [&](double r) {
    double f = ref.density_radial(t, r);
    if (f <= 0) return 0.0;
    double g = std::pow(2 * kPi, -0.5 * d) * std::exp(-0.5 * r * r);
    return f * std::log(f / g);
  };
  return radial_integral(h, d, std::sqrt(Kt), tol);
}

DensitySpec make_bkw_density_spec(const BkwReference& ref, double t) {
  auto shared = std::make_shared<BkwReference>(ref);
  DensitySpec s;
  s.name = "bkw_profile";
  s.d = ref.d;
  int d = ref.d;
  s.log_density = [shared, t, d](const double* v) {
    double f = shared->density(t, v);
    return f > 0 ? std::log(f) : -std::numeric_limits<double>::infinity();
  };
  s.sampler = [shared, t, d](Rng& rng, double* out) {
    Vec v = shared->sample(t, rng);
    for (int k = 0; k < d; ++k) out[k] = v[k];
  };
  s.mean_norm = 0.0;
  s.energy = d;
  Moments m = shared->moments(t);
  s.moment_bounds[0] = 1;
  s.moment_bounds[1] = std::sqrt(m.m2);
  s.moment_bounds[2] = m.m2;
  s.moment_bounds[3] = std::sqrt(m.m2 * m.m4);
  s.moment_bounds[4] = m.m4;
  // sixth moment of the profile: E_K |v|^6 weighted by the quadratic factor
  double Kt = shared->K(t);
  double g6 = d * (d + 2) * (d + 4) * Kt * Kt * Kt;
  s.moment_bounds[5] = std::sqrt(m.m4 * g6);
  s.moment_bounds[6] = 2 * g6;
  return s;
}

}  // namespace kaclab
