#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace cfc {

// Seed mixing for deriving independent streams from (master, index).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ (index * 0xd1b54a32d192ed03ULL));
}

// mt19937_64 with hand-rolled transforms so streams do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t bits() { return eng_(); }
  int below(int n) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  Eigen::VectorXd normal_vector(int dim) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = normal();
    return v;
  }

  Eigen::VectorXd uniform_vector(int dim, double lo, double hi) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = uniform(lo, hi);
    return v;
  }

  // Uniform on the Euclidean unit sphere.
  Eigen::VectorXd unit_sphere(int dim) {
    for (;;) {
      Eigen::VectorXd v = normal_vector(dim);
      const double n = v.norm();
      if (n > 1e-300) return v / n;
    }
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace cfc
