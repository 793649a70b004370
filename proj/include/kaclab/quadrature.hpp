#pragma once

#include <functional>
#include <vector>

namespace kaclab {

// Gauss-Hermite rule for integral of exp(-x^2) g(x) dx over the real
// line (physicists' weight). Nodes/weights by Newton iteration on the
// Hermite recurrence.
struct GaussHermite {
  std::vector<double> nodes, weights;
  explicit GaussHermite(int n);
};

// Integral over R^d of an isotropic integrand h(r) (r = |v|), i.e.
// |S^{d-1}| * int_0^inf h(r) r^{d-1} dr, by order-escalating
// Gauss-Hermite with scale parameter. `scale` should match the Gaussian
// width of the integrand (h ~ exp(-r^2/(2 scale^2)) * smooth).
double radial_integral(const std::function<double(double)>& h, int d, double scale,
                       double tol = 1e-10);

// Plain 1d integral of g over [a, b] (adaptive Simpson).
double integrate_1d(const std::function<double(double)>& g, double a, double b,
                    double tol = 1e-10);

}  // namespace kaclab
