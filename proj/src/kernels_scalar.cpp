#include "cfc/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace cfc::kernels::scalar {

double sum_abs(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::fabs(x[i]);
  return s;
}

double sum_sq(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

double diff_sum_abs(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

double diff_sum_sq(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double diff_max_abs(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

ArgMin min_plus_2d(const double* gx, const double* gy, const double* v, std::size_t n,
                   double qx, double qy, Metric metric) {
  ArgMin best{INFINITY, 0};
  for (std::size_t j = 0; j < n; ++j) {
    const double dx = std::fabs(qx - gx[j]);
    const double dy = std::fabs(qy - gy[j]);
    double d;
    switch (metric) {
      case Metric::l1: d = dx + dy; break;
      case Metric::l2: d = std::sqrt(dx * dx + dy * dy); break;
      default: d = std::max(dx, dy); break;
    }
    const double c = v[j] + d;
    if (c < best.value) best = {c, j};
  }
  return best;
}

}  // namespace cfc::kernels::scalar
