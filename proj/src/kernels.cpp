#include "cfc/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace cfc::kernels {

namespace {

struct Table {
  Isa isa;
  double (*sum_abs)(const double*, std::size_t);
  double (*sum_sq)(const double*, std::size_t);
  double (*max_abs)(const double*, std::size_t);
  double (*diff_sum_abs)(const double*, const double*, std::size_t);
  double (*diff_sum_sq)(const double*, const double*, std::size_t);
  double (*diff_max_abs)(const double*, const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  ArgMin (*min_plus_2d)(const double*, const double*, const double*, std::size_t, double, double,
                        Metric);
};

constexpr Table kScalar{Isa::scalar,         scalar::sum_abs,      scalar::sum_sq,
                        scalar::max_abs,     scalar::diff_sum_abs, scalar::diff_sum_sq,
                        scalar::diff_max_abs, scalar::dot,         scalar::axpy,
                        scalar::min_plus_2d};
constexpr Table kAvx2{Isa::avx2,         avx2::sum_abs,      avx2::sum_sq,
                      avx2::max_abs,     avx2::diff_sum_abs, avx2::diff_sum_sq,
                      avx2::diff_max_abs, avx2::dot,         avx2::axpy,
                      avx2::min_plus_2d};

const Table& table() {
  // CFC_FORCE_SCALAR=1 pins the reference path (useful when comparing runs).
  static const Table& t = [] () -> const Table& {
    const char* force = std::getenv("CFC_FORCE_SCALAR");
    if (force != nullptr && std::strcmp(force, "0") != 0) return kScalar;
    return avx2_available() ? kAvx2 : kScalar;
  }();
  return t;
}

}  // namespace

bool avx2_available() {
#if defined(CFC_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() { return table().isa; }

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

double sum_abs(const double* x, std::size_t n) { return table().sum_abs(x, n); }
double sum_sq(const double* x, std::size_t n) { return table().sum_sq(x, n); }
double max_abs(const double* x, std::size_t n) { return table().max_abs(x, n); }
double diff_sum_abs(const double* a, const double* b, std::size_t n) { return table().diff_sum_abs(a, b, n); }
double diff_sum_sq(const double* a, const double* b, std::size_t n) { return table().diff_sum_sq(a, b, n); }
double diff_max_abs(const double* a, const double* b, std::size_t n) { return table().diff_max_abs(a, b, n); }
double dot(const double* a, const double* b, std::size_t n) { return table().dot(a, b, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) { table().axpy(alpha, x, y, n); }
ArgMin min_plus_2d(const double* gx, const double* gy, const double* v, std::size_t n, double qx,
                   double qy, Metric metric) {
  return table().min_plus_2d(gx, gy, v, n, qx, qy, metric);
}

}  // namespace cfc::kernels
