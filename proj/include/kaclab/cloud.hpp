#pragma once

#include <cstddef>
#include <vector>

namespace kaclab {

// Uniformly weighted sample of n points in (R^d)^j, stored row-major
// n x (j*d).
struct PointCloud {
  int j = 1;
  int d = 1;
  std::size_t n = 0;
  std::vector<double> pts;
  bool correlated = false;  // pooled overlapping tuples, not i.i.d. rows

  int point_dim() const { return j * d; }
  double* point(std::size_t i) { return pts.data() + i * point_dim(); }
  const double* point(std::size_t i) const { return pts.data() + i * point_dim(); }

  static PointCloud empty(int j, int d) {
    PointCloud c;
    c.j = j;
    c.d = d;
    return c;
  }
  void push(const double* p) {
    pts.insert(pts.end(), p, p + point_dim());
    ++n;
  }
};

}  // namespace kaclab
