#include "kaclab/chaotic_init.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace kaclab {

namespace {
constexpr double kPi = std::numbers::pi;

// E |Z|^k for Z standard normal in d dimensions (chi distribution).
double gaussian_abs_moment(int d, int k) {
  // |Z|^2 ~ chi^2_d: E |Z|^k = 2^{k/2} Gamma((d+k)/2) / Gamma(d/2)
  return std::pow(2.0, 0.5 * k) * std::tgamma(0.5 * (d + k)) / std::tgamma(0.5 * d);
}

}  // namespace

Vec DensitySpec::sample(Rng& rng) const {
  if (!sampler) throw std::runtime_error("DensitySpec: no direct sampler for " + name);
  Vec v(d);
  sampler(rng, v.data());
  return v;
}

DensitySpec make_gaussian_std(int d) {
  DensitySpec s;
  s.name = "gaussian_std";
  s.d = d;
  s.log_density = [d](const double* v) {
    double q = 0;
    for (int k = 0; k < d; ++k) q += v[k] * v[k];
    return -0.5 * q;
  };
  s.sampler = [d](Rng& rng, double* out) {
    for (int k = 0; k < d; ++k) out[k] = normal01(rng);
  };
  s.mean_norm = 0.0;
  s.energy = d;
  for (int k = 0; k <= 6; ++k) s.moment_bounds[k] = gaussian_abs_moment(d, k);
  return s;
}

DensitySpec make_gaussian_mixture_1d(double mu, double sigma2, double wp) {
  if (!(sigma2 > 0)) throw std::invalid_argument("mixture: sigma2 must be positive");
  if (!(wp > 0 && wp < 1)) throw std::invalid_argument("mixture: weight in (0,1)");
  DensitySpec s;
  s.name = "gaussian_mixture_1d";
  s.d = 1;
  double inv2s = 0.5 / sigma2;
  s.log_density = [mu, inv2s, wp](const double* v) {
    double a = -(v[0] - mu) * (v[0] - mu) * inv2s;
    double b = -(v[0] + mu) * (v[0] + mu) * inv2s;
    double hi = std::max(a, b);
    return hi + std::log(wp * std::exp(a - hi) + (1 - wp) * std::exp(b - hi));
  };
  s.sampler = [mu, sigma2, wp](Rng& rng, double* out) {
    double m = (uniform01(rng) < wp) ? mu : -mu;
    out[0] = m + std::sqrt(sigma2) * normal01(rng);
  };
  s.mean_norm = std::abs((2 * wp - 1) * mu);
  s.energy = mu * mu + sigma2;
  for (int k = 0; k <= 6; ++k)
    s.moment_bounds[k] = std::pow(std::abs(mu) + 4 * std::sqrt(sigma2), k);
  return s;
}

DensitySpec make_radial_gaussian_mixture(int d, const std::vector<double>& weights,
                                         const std::vector<double>& variances) {
  if (weights.size() != variances.size() || weights.empty())
    throw std::invalid_argument("radial mixture: weights/variances mismatch");
  double wsum = 0;
  for (double w : weights) wsum += w;
  std::vector<double> w(weights);
  for (double& x : w) x /= wsum;
  DensitySpec s;
  s.name = "radial_gaussian_mixture";
  s.d = d;
  auto vars = variances;
  s.log_density = [d, w, vars](const double* v) {
    double q = 0;
    for (int k = 0; k < d; ++k) q += v[k] * v[k];
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> terms(w.size());
    for (std::size_t m = 0; m < w.size(); ++m) {
      terms[m] = std::log(w[m]) - 0.5 * d * std::log(vars[m]) - 0.5 * q / vars[m];
      best = std::max(best, terms[m]);
    }
    double acc = 0;
    for (double t : terms) acc += std::exp(t - best);
    return best + std::log(acc);
  };
  s.sampler = [d, w, vars](Rng& rng, double* out) {
    double u = uniform01(rng);
    std::size_t m = 0;
    double acc = 0;
    for (; m + 1 < w.size(); ++m) {
      acc += w[m];
      if (u < acc) break;
    }
    double sd = std::sqrt(vars[m]);
    for (int k = 0; k < d; ++k) out[k] = sd * normal01(rng);
  };
  s.mean_norm = 0.0;
  double e = 0;
  for (std::size_t m = 0; m < w.size(); ++m) e += w[m] * d * vars[m];
  s.energy = e;
  double vmax = *std::max_element(vars.begin(), vars.end());
  for (int k = 0; k <= 6; ++k)
    s.moment_bounds[k] = gaussian_abs_moment(d, k) * std::pow(vmax, 0.5 * k);
  return s;
}

DensitySpec make_uniform_box(int d, double lo, double hi) {
  if (!(hi > lo)) throw std::invalid_argument("uniform box: hi must exceed lo");
  DensitySpec s;
  s.name = "uniform_box";
  s.d = d;
  s.log_density = [d, lo, hi](const double* v) {
    for (int k = 0; k < d; ++k)
      if (v[k] < lo || v[k] > hi) return -std::numeric_limits<double>::infinity();
    return 0.0;
  };
  s.sampler = [d, lo, hi](Rng& rng, double* out) {
    for (int k = 0; k < d; ++k) out[k] = lo + (hi - lo) * uniform01(rng);
  };
  double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  s.mean_norm = std::abs(c) * std::sqrt(static_cast<double>(d));
  s.energy = d * (c * c + h * h / 3.0);
  double r = std::max(std::abs(lo), std::abs(hi)) * std::sqrt(static_cast<double>(d));
  for (int k = 0; k <= 6; ++k) s.moment_bounds[k] = std::pow(r, k);
  return s;
}

DensitySpec make_point_mass(int d) {
  DensitySpec s;
  s.name = "point_mass";
  s.d = d;
  s.log_density = [](const double*) { return 0.0; };  // degenerate, sampling only
  s.sampler = [d](Rng&, double* out) {
    for (int k = 0; k < d; ++k) out[k] = 0.0;
  };
  s.mean_norm = 0.0;
  s.energy = 0.0;
  s.moment_bounds.fill(0.0);
  s.moment_bounds[0] = 1.0;
  return s;
}

void SphereSpec::validate() const {
  if (N < 2) throw std::invalid_argument("sphere: N must be at least 2");
  if (variant == SphereVariant::KacSphere && d != 1)
    throw std::invalid_argument("sphere: the Kac sphere is defined for d = 1 only");
  if (d < 1 || d > 3) throw std::invalid_argument("sphere: d must be 1, 2 or 3");
}

State sample_product(const DensitySpec& f, int N, Rng& rng) {
  if (!f.has_sampler())
    throw std::runtime_error("sample_product: density " + f.name + " has no direct sampler");
  State s(N, f.d);
  for (int i = 0; i < N; ++i) f.sampler(rng, s.vel(i));
  return s;
}

State sample_uniform_boltzmann_sphere(int N, int d, Rng& rng) {
  if (N < 2) throw std::invalid_argument("boltzmann sphere: N must be at least 2");
  State s(N, d);
  for (double& x : s.v) x = normal01(rng);
  for (int k = 0; k < d; ++k) {
    double m = 0;
    for (int i = 0; i < N; ++i) m += s.vel(i)[k];
    m /= N;
    for (int i = 0; i < N; ++i) s.vel(i)[k] -= m;
  }
  double e = 0;
  for (double x : s.v) e += x * x;
  double scale = std::sqrt(sphere_energy(N, d) / e);
  for (double& x : s.v) x *= scale;
  return s;
}

State sample_uniform_kac_sphere(int N, Rng& rng) {
  if (N < 2) throw std::invalid_argument("kac sphere: N must be at least 2");
  State s(N, 1);
  for (double& x : s.v) x = normal01(rng);
  double e = 0;
  for (double x : s.v) e += x * x;
  double scale = std::sqrt(static_cast<double>(N) / e);
  for (double& x : s.v) x *= scale;
  return s;
}

ConditionedSampler::ConditionedSampler(DensitySpec f, SphereSpec sphere, McmcParams p,
                                       Rng& rng)
    : f_(std::move(f)), sphere_(sphere), p_(p) {
  sphere_.validate();
  if (!f_.log_density)
    throw std::invalid_argument("conditioned sampler: log density required");
  if (f_.d != sphere_.d)
    throw std::invalid_argument("conditioned sampler: density/sphere dimension mismatch");
  // Matched normalization is required for the conditioning to be chaotic:
  // unit energy per scalar component, and zero mean on the Boltzmann sphere.
  double per_comp = f_.energy / f_.d;
  if (std::abs(per_comp - 1.0) > 1e-9)
    throw std::invalid_argument(
        "conditioned sampler: density must have unit energy per component");
  if (sphere_.variant == SphereVariant::BoltzmannSphere && f_.mean_norm > 1e-9)
    throw std::invalid_argument("conditioned sampler: density must be centered");

  if (p_.n_burn < 0) p_.n_burn = 50L * sphere_.N;
  if (p_.n_thin < 0) p_.n_thin = 5L * sphere_.N;

  for (int attempt = 0;; ++attempt) {
    state_ = (sphere_.variant == SphereVariant::KacSphere)
                 ? sample_uniform_kac_sphere(sphere_.N, rng)
                 : sample_uniform_boltzmann_sphere(sphere_.N, sphere_.d, rng);
    logf_.resize(sphere_.N);
    bool ok = true;
    for (int i = 0; i < sphere_.N; ++i) {
      logf_[i] = f_.log_density(state_.vel(i));
      if (!std::isfinite(logf_[i])) ok = false;
    }
    if (ok) break;
    if (attempt >= p_.max_restarts)
      throw std::runtime_error(
          "conditioned sampler: could not find a positive-density start");
  }
  for (long k = 0; k < p_.n_burn; ++k) propose(rng);
}

void ConditionedSampler::propose(Rng& rng) {
  int N = sphere_.N;
  int i = static_cast<int>(uniform_index(rng, N));
  int j = static_cast<int>(uniform_index(rng, N - 1));
  if (j >= i) ++j;

  double* vi = state_.vel(i);
  double* vj = state_.vel(j);
  double ni[3], nj[3];
  if (sphere_.variant == SphereVariant::KacSphere) {
    double a = 2.0 * kPi * uniform01(rng);
    double c = std::cos(a), s = std::sin(a);
    ni[0] = c * vi[0] + s * vj[0];
    nj[0] = -s * vi[0] + c * vj[0];
  } else {
    Vec sigma = sample_unit_vector(sphere_.d, rng);
    for (int k = 0; k < sphere_.d; ++k) {
      ni[k] = vi[k];
      nj[k] = vj[k];
    }
    post_collision_inplace(ni, nj, sigma.data(), sphere_.d);
  }
  double li = f_.log_density(ni);
  double lj = f_.log_density(nj);
  ++proposed_;
  double dlog = li + lj - logf_[i] - logf_[j];
  if (dlog >= 0 || std::log(uniform01(rng)) < dlog) {
    for (int k = 0; k < sphere_.d; ++k) {
      vi[k] = ni[k];
      vj[k] = nj[k];
    }
    logf_[i] = li;
    logf_[j] = lj;
    ++accepted_;
  }
}

const State& ConditionedSampler::next(Rng& rng) {
  for (long k = 0; k < p_.n_thin; ++k) propose(rng);
  return state_;
}

double ConditionedSampler::acceptance_rate() const {
  return proposed_ ? static_cast<double>(accepted_) / proposed_ : 0.0;
}

State sample_conditioned_product(const DensitySpec& f, const SphereSpec& sphere,
                                 Rng& rng, McmcParams p) {
  ConditionedSampler chain(f, sphere, p, rng);
  return chain.current();
}

PointCloud marginal_samples(const Ensemble& e, int j, int t_index, bool pooled) {
  if (j < 1 || j > e.N) throw std::invalid_argument("marginal_samples: need 1 <= j <= N");
  if (t_index < 0 || t_index >= static_cast<int>(e.grid.size()))
    throw std::invalid_argument("marginal_samples: t_index out of range");
  PointCloud c = PointCloud::empty(j, e.d);
  int blocks = pooled ? e.N / j : 1;
  c.correlated = pooled && blocks > 1;
  c.pts.reserve(static_cast<std::size_t>(e.R) * blocks * j * e.d);
  for (int r = 0; r < e.R; ++r) {
    const double* v = e.velocities(r, t_index);
    for (int b = 0; b < blocks; ++b)
      c.push(v + static_cast<std::size_t>(b) * j * e.d);
  }
  return c;
}

}  // namespace kaclab
