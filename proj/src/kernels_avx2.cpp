#include "cfc/kernels.hpp"

#include <algorithm>
#include <cmath>

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace cfc::kernels::avx2 {

#if defined(__AVX2__)

namespace {

inline __m256d abs_pd(__m256d x) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

// Fixed-order horizontal reductions so results do not depend on the compiler.
inline double hsum(__m256d v) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  return (t[0] + t[1]) + (t[2] + t[3]);
}

inline double hmax(__m256d v) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  return std::max(std::max(t[0], t[1]), std::max(t[2], t[3]));
}

}  // namespace

double sum_abs(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, abs_pd(_mm256_loadu_pd(x + i)));
  double s = hsum(acc);
  for (; i < n; ++i) s += std::fabs(x[i]);
  return s;
}

double sum_sq(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

double max_abs(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, abs_pd(_mm256_loadu_pd(x + i)));
  double m = hmax(acc);
  for (; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

double diff_sum_abs(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, abs_pd(d));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

double diff_sum_sq(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double diff_max_abs(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_max_pd(acc, abs_pd(d));
  }
  double m = hmax(acc);
  for (; i < n; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

ArgMin min_plus_2d(const double* gx, const double* gy, const double* v, std::size_t n,
                   double qx, double qy, Metric metric) {
  const __m256d vqx = _mm256_set1_pd(qx);
  const __m256d vqy = _mm256_set1_pd(qy);
  __m256d best = _mm256_set1_pd(INFINITY);
  __m256d best_idx = _mm256_setzero_pd();
  __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
  const __m256d four = _mm256_set1_pd(4.0);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d dx = abs_pd(_mm256_sub_pd(vqx, _mm256_loadu_pd(gx + j)));
    const __m256d dy = abs_pd(_mm256_sub_pd(vqy, _mm256_loadu_pd(gy + j)));
    __m256d d;
    switch (metric) {
      case Metric::l1: d = _mm256_add_pd(dx, dy); break;
      case Metric::l2:
        d = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
        break;
      default: d = _mm256_max_pd(dx, dy); break;
    }
    const __m256d c = _mm256_add_pd(_mm256_loadu_pd(v + j), d);
    const __m256d lt = _mm256_cmp_pd(c, best, _CMP_LT_OQ);
    best = _mm256_blendv_pd(best, c, lt);
    best_idx = _mm256_blendv_pd(best_idx, idx, lt);
    idx = _mm256_add_pd(idx, four);
  }
  alignas(32) double bv[4];
  alignas(32) double bi[4];
  _mm256_store_pd(bv, best);
  _mm256_store_pd(bi, best_idx);
  ArgMin out{INFINITY, 0};
  for (int l = 0; l < 4; ++l) {
    const auto li = static_cast<std::size_t>(bi[l]);
    if (bv[l] < out.value || (bv[l] == out.value && li < out.index)) out = {bv[l], li};
  }
  for (; j < n; ++j) {
    const double dx = std::fabs(qx - gx[j]);
    const double dy = std::fabs(qy - gy[j]);
    double d;
    switch (metric) {
      case Metric::l1: d = dx + dy; break;
      case Metric::l2: d = std::sqrt(dx * dx + dy * dy); break;
      default: d = std::max(dx, dy); break;
    }
    const double c = v[j] + d;
    if (c < out.value) out = {c, j};
  }
  return out;
}

#else  // no AVX2 in this build: forward to the reference code

double sum_abs(const double* x, std::size_t n) { return scalar::sum_abs(x, n); }
double sum_sq(const double* x, std::size_t n) { return scalar::sum_sq(x, n); }
double max_abs(const double* x, std::size_t n) { return scalar::max_abs(x, n); }
double diff_sum_abs(const double* a, const double* b, std::size_t n) { return scalar::diff_sum_abs(a, b, n); }
double diff_sum_sq(const double* a, const double* b, std::size_t n) { return scalar::diff_sum_sq(a, b, n); }
double diff_max_abs(const double* a, const double* b, std::size_t n) { return scalar::diff_max_abs(a, b, n); }
double dot(const double* a, const double* b, std::size_t n) { return scalar::dot(a, b, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) { scalar::axpy(alpha, x, y, n); }
ArgMin min_plus_2d(const double* gx, const double* gy, const double* v, std::size_t n,
                   double qx, double qy, Metric metric) {
  return scalar::min_plus_2d(gx, gy, v, n, qx, qy, metric);
}

#endif

}  // namespace cfc::kernels::avx2
