#pragma once

// Inner loops with a scalar reference and an AVX2 variant. The public
// entry points dispatch once at startup on the running CPU.

#include <cstddef>

namespace cfc::kernels {

enum class Isa { scalar, avx2 };

Isa active_isa();
const char* isa_name(Isa isa);
bool avx2_available();

// Movement metric used by min_plus_2d; general p goes through the scalar path.
enum class Metric { l1, l2, linf };

struct ArgMin {
  double value;
  std::size_t index;
};

double sum_abs(const double* x, std::size_t n);
double sum_sq(const double* x, std::size_t n);
double max_abs(const double* x, std::size_t n);
double diff_sum_abs(const double* a, const double* b, std::size_t n);
double diff_sum_sq(const double* a, const double* b, std::size_t n);
double diff_max_abs(const double* a, const double* b, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
// min_j v[j] + dist((qx,qy), (gx[j],gy[j])); first index wins ties.
ArgMin min_plus_2d(const double* gx, const double* gy, const double* v, std::size_t n,
                   double qx, double qy, Metric metric);

namespace scalar {
double sum_abs(const double* x, std::size_t n);
double sum_sq(const double* x, std::size_t n);
double max_abs(const double* x, std::size_t n);
double diff_sum_abs(const double* a, const double* b, std::size_t n);
double diff_sum_sq(const double* a, const double* b, std::size_t n);
double diff_max_abs(const double* a, const double* b, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
ArgMin min_plus_2d(const double* gx, const double* gy, const double* v, std::size_t n,
                   double qx, double qy, Metric metric);
}  // namespace scalar

namespace avx2 {
double sum_abs(const double* x, std::size_t n);
double sum_sq(const double* x, std::size_t n);
double max_abs(const double* x, std::size_t n);
double diff_sum_abs(const double* a, const double* b, std::size_t n);
double diff_sum_sq(const double* a, const double* b, std::size_t n);
double diff_max_abs(const double* a, const double* b, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
ArgMin min_plus_2d(const double* gx, const double* gy, const double* v, std::size_t n,
                   double qx, double qy, Metric metric);
}  // namespace avx2

}  // namespace cfc::kernels
