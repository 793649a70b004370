#include "kaclab/state.hpp"

#include <cmath>
#include <stdexcept>

namespace kaclab {

namespace {

// Neumaier compensated accumulator.
struct Kahan {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      c += (sum - t) + x;
    else
      c += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

}  // namespace

void State::validate() const {
  if (N < 2) throw std::invalid_argument("state: N must be at least 2");
  if (d < 1 || d > 3) throw std::invalid_argument("state: d must be 1, 2 or 3");
  if (v.size() != static_cast<std::size_t>(N) * d)
    throw std::invalid_argument("state: velocity buffer size mismatch");
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument("state: non-finite velocity");
}

ConservedSummary conserved_check(const State& s) {
  ConservedSummary out;
  Kahan mom[3];
  Kahan en;
  for (int i = 0; i < s.N; ++i) {
    const double* vi = s.vel(i);
    for (int k = 0; k < s.d; ++k) {
      mom[k].add(vi[k]);
      en.add(vi[k] * vi[k]);
    }
  }
  double m2 = 0.0;
  for (int k = 0; k < s.d; ++k) {
    out.momentum[k] = mom[k].value();
    m2 += out.momentum[k] * out.momentum[k];
  }
  out.energy = en.value();
  out.momentum_residual = std::sqrt(m2);
  out.energy_residual = std::abs(out.energy - sphere_energy(s.N, s.d));
  return out;
}

}  // namespace kaclab
