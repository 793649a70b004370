#include "kaclab/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kaclab {

namespace {
constexpr double kPi = std::numbers::pi;

double sphere_area(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return 2.0 * kPi;
    case 3: return 4.0 * kPi;
    default: throw std::invalid_argument("radial_integral: d must be 1, 2 or 3");
  }
}

}  // namespace

GaussHermite::GaussHermite(int n) {
  nodes.resize(n);
  weights.resize(n);
  // Newton on H_n with asymptotic initial guesses (Numerical Recipes
  // style); symmetric rule, compute the upper half.
  const double pim4 = 0.7511255444649425;  // pi^{-1/4}
  int m = (n + 1) / 2;
  double z = 0;
  for (int i = 0; i < m; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    else if (i == 1)
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * nodes[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * nodes[1];
    else
      z = 2.0 * z - nodes[i - 2];
    double pp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    nodes[i] = z;
    nodes[n - 1 - i] = -z;
    weights[i] = 2.0 / (pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

double radial_integral(const std::function<double(double)>& h, int d, double scale,
                       double tol) {
  if (!(scale > 0)) throw std::invalid_argument("radial_integral: scale must be positive");
  double area = sphere_area(d);
  double prev = 0;
  for (int n = 20; n <= 320; n *= 2) {
    GaussHermite gh(n);
    // r = scale * x, even extension: int_0^inf = 1/2 int_R
    double acc = 0;
    for (int i = 0; i < n; ++i) {
      double x = gh.nodes[i];
      double r = scale * std::abs(x);
      if (r == 0.0) continue;
      double f = h(r) * std::pow(r, d - 1);
      // divide out the GH weight exp(-x^2)
      acc += gh.weights[i] * f * std::exp(x * x);
    }
    double val = 0.5 * area * scale * acc;
    if (n > 20 && std::abs(val - prev) <= tol * std::max(1.0, std::abs(val))) return val;
    prev = val;
  }
  return prev;
}

namespace {

double simpson(const std::function<double(double)>& g, double a, double m, double b,
               double fa, double fm, double fb, double whole, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = g(lm), frm = g(rm);
  double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson(g, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(g, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_1d(const std::function<double(double)>& g, double a, double b,
                    double tol) {
  double m = 0.5 * (a + b);
  double fa = g(a), fm = g(m), fb = g(b);
  double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
  return simpson(g, a, m, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace kaclab
