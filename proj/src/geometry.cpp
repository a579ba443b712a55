#include "cfc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cfc/error.hpp"
#include "cfc/kernels.hpp"
#include "cfc/rng.hpp"

namespace cfc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_dim(const Vector& a, const Vector& b, const char* what) {
  if (a.size() != b.size()) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a.size() << " vs " << b.size() << ")";
    throw DimensionMismatch(os.str());
  }
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// sum_i (|x_i|/m)^p for the common exponents without calling pow.
double scaled_power_sum(const double* x, std::size_t n, double m, double p) {
  double s = 0.0;
  if (p == 1.5) {
    for (std::size_t i = 0; i < n; ++i) {
      const double t = std::fabs(x[i]) / m;
      s += t * std::sqrt(t);
    }
  } else if (p == 3.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double t = std::fabs(x[i]) / m;
      s += t * t * t;
    }
  } else if (p == 4.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double t = std::fabs(x[i]) / m;
      s += (t * t) * (t * t);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) s += std::pow(std::fabs(x[i]) / m, p);
  }
  return s;
}

double root_p(double s, double p) {
  if (p == 1.5) return std::cbrt(s * s);
  if (p == 3.0) return std::cbrt(s);
  if (p == 4.0) return std::sqrt(std::sqrt(s));
  return std::pow(s, 1.0 / p);
}

double raw_norm(const double* x, std::size_t n, double p) {
  if (n == 0) return 0.0;
  if (p == 1.0) return kernels::sum_abs(x, n);
  if (p == kInf) return kernels::max_abs(x, n);
  if (p == 2.0) {
    const double s = kernels::sum_sq(x, n);
    if (s > 1e-280 && s < 1e280) return std::sqrt(s);
  }
  const double m = kernels::max_abs(x, n);
  if (m == 0.0) return 0.0;
  return m * root_p(scaled_power_sum(x, n, m, p), p);
}

}  // namespace

NormTag::NormTag(double p) : p_(p) {
  if (!(p >= 1.0)) throw InvalidArgument("norm exponent p must be >= 1");
}

NormTag NormTag::parse(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF" || text == "infinity") return linf();
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("cannot parse norm exponent '" + text + "'");
  }
  if (used != text.size()) throw InvalidArgument("cannot parse norm exponent '" + text + "'");
  return NormTag(p);
}

double NormTag::dual() const {
  if (p_ == 1.0) return kInf;
  if (is_inf()) return 1.0;
  return p_ / (p_ - 1.0);
}

std::string NormTag::str() const {
  if (is_inf()) return "inf";
  std::ostringstream os;
  os << p_;
  return os.str();
}

double norm(const Vector& x, NormTag tag) {
  return raw_norm(x.data(), static_cast<std::size_t>(x.size()), tag.p());
}

double distance(const Vector& a, const Vector& b, NormTag tag) {
  require_same_dim(a, b, "distance");
  const auto n = static_cast<std::size_t>(a.size());
  const double p = tag.p();
  if (p == 1.0) return kernels::diff_sum_abs(a.data(), b.data(), n);
  if (p == kInf) return kernels::diff_max_abs(a.data(), b.data(), n);
  if (p == 2.0) {
    const double s = kernels::diff_sum_sq(a.data(), b.data(), n);
    if (s > 1e-280 && s < 1e280) return std::sqrt(s);
    if (s == 0.0) return 0.0;
  }
  const Vector d = a - b;
  return raw_norm(d.data(), n, p);
}

Vector norm_gradient(const Vector& v, NormTag tag) {
  Vector g = Vector::Zero(v.size());
  const double n = norm(v, tag);
  if (n == 0.0) return g;
  const double p = tag.p();
  if (p == 1.0) {
    for (Eigen::Index i = 0; i < v.size(); ++i) g[i] = sign(v[i]);
  } else if (p == 2.0) {
    g = v / n;
  } else if (tag.is_inf()) {
    Eigen::Index j = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
      if (std::fabs(v[i]) > std::fabs(v[j])) j = i;
    g[j] = sign(v[j]);
  } else {
    for (Eigen::Index i = 0; i < v.size(); ++i)
      g[i] = sign(v[i]) * std::pow(std::fabs(v[i]) / n, p - 1.0);
  }
  return g;
}

Vector radial_retraction(const Vector& x, double r, NormTag tag) {
  if (!(r >= 0.0)) throw InvalidArgument("radial_retraction: radius must be >= 0");
  const double n = norm(x, tag);
  if (n <= r) return x;
  return x * (r / n);
}

double rectangular_constant_upper(double p) {
  if (!(p >= 1.0)) throw InvalidArgument("rectangular_constant_upper: p must be >= 1");
  if (p == 1.0 || p == kInf) return 3.0;
  double mu;
  if (p <= 2.0) {
    const double q = p - 1.0;
    // (2^{1/q} - 1)^q computed without overflow for p near 1
    const double inner = 2.0 * std::exp(q * std::log1p(-std::exp2(-1.0 / q)));
    const double first = std::pow(1.0 + inner, 1.0 / p);
    const double second = std::sqrt(p / q);
    mu = std::min(first, second);
  } else {
    const double q = p - 1.0;
    // (2^q - 1)^{1/q}
    const double inner = 2.0 * std::exp(std::log1p(-std::exp2(-q)) / q);
    mu = std::pow(1.0 + inner, q / p);
  }
  return std::clamp(mu, std::sqrt(2.0), 3.0);
}

double lipschitz_constant_upper(double p) {
  if (!(p >= 1.0)) throw InvalidArgument("lipschitz_constant_upper: p must be >= 1");
  if (p == 2.0) return 1.0;
  return std::min(2.0, rectangular_constant_upper(p));
}

SpaceConstants space_constants(NormTag tag) {
  return {rectangular_constant_upper(tag.p()), lipschitz_constant_upper(tag.p())};
}

double estimate_lipschitz_empirical(NormTag tag, int dim, long samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("estimate_lipschitz_empirical: samples must be >= 1");
  if (dim < 1) throw InvalidArgument("estimate_lipschitz_empirical: dim must be >= 1");
  Rng rng(seed);
  double best = 0.0;
  for (long s = 0; s < samples; ++s) {
    Vector x = rng.normal_vector(dim);
    const double nx = norm(x, tag);
    if (nx > 0.0) x *= rng.uniform(0.3, 2.0) / nx;
    Vector y;
    if (rng.uniform() < 0.25) {
      y = rng.normal_vector(dim);
      const double ny = norm(y, tag);
      if (ny > 0.0) y *= rng.uniform(0.3, 2.0) / ny;
    } else {
      Vector w = rng.normal_vector(dim);
      const double nw = norm(w, tag);
      if (nw > 0.0) w /= nw;
      y = x + std::pow(10.0, rng.uniform(-3.0, 0.0)) * w;
    }
    const double den = distance(x, y, tag);
    if (!(den > 0.0)) continue;
    const double num = distance(radial_retraction(x, 1.0, tag), radial_retraction(y, 1.0, tag), tag);
    best = std::max(best, num / den);
  }
  return best;
}

bool bj_orthogonal(const Vector& x, const Vector& y, NormTag tag, int lambda_grid) {
  if (lambda_grid < 3) throw InvalidArgument("bj_orthogonal: lambda_grid must be >= 3");
  require_same_dim(x, y, "bj_orthogonal");
  const double nx = norm(x, tag);
  const double ny = norm(y, tag);
  const double L = 1e3 * nx / std::max(ny, 1e-300);
  if (L == 0.0) return true;
  const int half = (lambda_grid - 1) / 2;
  for (int i = 0; i < half; ++i) {
    const double e = half == 1 ? 0.0 : -9.0 + 9.0 * i / (half - 1);
    const double mag = L * std::pow(10.0, e);
    for (double lam : {mag, -mag}) {
      if (nx > norm(x + lam * y, tag) + 1e-12) return false;
    }
  }
  return true;
}

int body_dim(const ConvexBody& body) {
  return std::visit(
      [](const auto& b) -> int {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ball>) return static_cast<int>(b.center.size());
        else if constexpr (std::is_same_v<T, Box>) return static_cast<int>(b.lower.size());
        else if constexpr (std::is_same_v<T, AffineSliceOfBox>) return static_cast<int>(b.lower.size());
        else if constexpr (std::is_same_v<T, Hyperplane>) return static_cast<int>(b.normal.size());
        else return static_cast<int>(b.point.size());
      },
      body);
}

const char* body_kind_name(const ConvexBody& body) {
  static const char* names[] = {"ball", "box", "affine_slice", "hyperplane", "singleton"};
  return names[body.index()];
}

void validate_body(const ConvexBody& body) {
  auto finite = [](const Vector& v) { return v.allFinite(); };
  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ball>) {
          if (b.center.size() == 0 || !finite(b.center)) throw InvalidArgument("ball: bad center");
          if (!(b.radius >= 0.0) || !std::isfinite(b.radius)) throw InvalidArgument("ball: radius must be >= 0");
        } else if constexpr (std::is_same_v<T, Box>) {
          if (b.lower.size() == 0 || b.lower.size() != b.upper.size()) throw InvalidArgument("box: bound sizes differ");
          for (Eigen::Index i = 0; i < b.lower.size(); ++i)
            if (!(b.lower[i] <= b.upper[i])) throw InvalidArgument("box: lower > upper");
        } else if constexpr (std::is_same_v<T, AffineSliceOfBox>) {
          if (b.lower.size() == 0 || b.lower.size() != b.upper.size()) throw InvalidArgument("affine_slice: bound sizes differ");
          if (b.fixed_index.size() != b.fixed_value.size()) throw InvalidArgument("affine_slice: index/value sizes differ");
          std::vector<int> seen(b.fixed_index);
          std::sort(seen.begin(), seen.end());
          if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) throw InvalidArgument("affine_slice: repeated fixed index");
          for (std::size_t k = 0; k < b.fixed_index.size(); ++k) {
            if (b.fixed_index[k] < 0 || b.fixed_index[k] >= b.lower.size()) throw InvalidArgument("affine_slice: fixed index out of range");
            if (!std::isfinite(b.fixed_value[k])) throw InvalidArgument("affine_slice: fixed value not finite");
          }
          for (Eigen::Index i = 0; i < b.lower.size(); ++i)
            if (!(b.lower[i] <= b.upper[i])) throw InvalidArgument("affine_slice: lower > upper");
        } else if constexpr (std::is_same_v<T, Hyperplane>) {
          if (b.normal.size() == 0 || !finite(b.normal) || b.normal.isZero(0.0)) throw InvalidArgument("hyperplane: normal must be nonzero");
          if (!std::isfinite(b.offset)) throw InvalidArgument("hyperplane: offset not finite");
        } else {
          if (b.point.size() == 0 || !finite(b.point)) throw InvalidArgument("singleton: bad point");
        }
      },
      body);
}

Vector project_body(const Vector& x, const ConvexBody& body, NormTag tag) {
  if (body_dim(body) != x.size()) throw DimensionMismatch("project_body: dimension mismatch");
  return std::visit(
      [&](const auto& b) -> Vector {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return b.center + radial_retraction(x - b.center, b.radius, tag);
        } else if constexpr (std::is_same_v<T, Box>) {
          // Coordinatewise clamping is nearest in every l^p norm.
          return x.cwiseMax(b.lower).cwiseMin(b.upper);
        } else if constexpr (std::is_same_v<T, AffineSliceOfBox>) {
          Vector y = x.cwiseMax(b.lower).cwiseMin(b.upper);
          for (std::size_t k = 0; k < b.fixed_index.size(); ++k) y[b.fixed_index[k]] = b.fixed_value[k];
          return y;
        } else if constexpr (std::is_same_v<T, Hyperplane>) {
          const double residual = b.normal.dot(x) - b.offset;
          if (residual == 0.0) return x;
          // Move along the direction that norms the normal in the dual space.
          const Vector w = norm_gradient(b.normal, NormTag(tag.dual()));
          return x - (residual / b.normal.dot(w)) * w;
        } else {
          return b.point;
        }
      },
      body);
}

Vector support_point(const ConvexBody& body, const Vector& u, NormTag tag) {
  if (body_dim(body) != u.size()) throw DimensionMismatch("support_point: dimension mismatch");
  if (u.isZero(0.0)) throw InvalidArgument("support_point: direction must be nonzero");
  auto corner = [&](const Vector& lo, const Vector& hi) {
    Vector y(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (u[i] > 0.0) y[i] = hi[i];
      else if (u[i] < 0.0) y[i] = lo[i];
      else y[i] = std::isfinite(lo[i] + hi[i]) ? 0.5 * (lo[i] + hi[i]) : (std::isfinite(lo[i]) ? lo[i] : hi[i]);
      if (!std::isfinite(y[i])) throw UnsupportedOracle("support_point: unbounded direction");
    }
    return y;
  };
  return std::visit(
      [&](const auto& b) -> Vector {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return b.center + b.radius * norm_gradient(u, NormTag(tag.dual()));
        } else if constexpr (std::is_same_v<T, Box>) {
          return corner(b.lower, b.upper);
        } else if constexpr (std::is_same_v<T, AffineSliceOfBox>) {
          Vector lo = b.lower, hi = b.upper;
          for (std::size_t k = 0; k < b.fixed_index.size(); ++k) {
            lo[b.fixed_index[k]] = b.fixed_value[k];
            hi[b.fixed_index[k]] = b.fixed_value[k];
          }
          return corner(lo, hi);
        } else if constexpr (std::is_same_v<T, Hyperplane>) {
          throw UnsupportedOracle("support_point: hyperplane is unbounded");
        } else {
          return b.point;
        }
      },
      body);
}

bool body_contains(const ConvexBody& body, const Vector& x, double tol, NormTag tag) {
  if (!(tol >= 0.0)) throw InvalidArgument("body_contains: tol must be >= 0");
  return distance(x, project_body(x, body, tag), tag) <= tol;
}

bool body_nested_in(const ConvexBody& inner, const ConvexBody& outer, double tol, NormTag tag) {
  if (body_dim(inner) != body_dim(outer)) throw DimensionMismatch("body_nested_in: dimension mismatch");
  if (const auto* s = std::get_if<Singleton>(&inner)) return body_contains(outer, s->point, tol, tag);
  const auto* bi = std::get_if<Ball>(&inner);
  const auto* xi = std::get_if<Box>(&inner);
  const auto* bo = std::get_if<Ball>(&outer);
  const auto* xo = std::get_if<Box>(&outer);
  if (bi && bo) return distance(bi->center, bo->center, tag) + bi->radius <= bo->radius + tol;
  if (bi && xo) {
    // |x_i| <= ||x||_p, so the ball reaches exactly r along each axis.
    for (Eigen::Index i = 0; i < bi->center.size(); ++i) {
      if (bi->center[i] - bi->radius < xo->lower[i] - tol) return false;
      if (bi->center[i] + bi->radius > xo->upper[i] + tol) return false;
    }
    return true;
  }
  if (xi && bo) {
    Vector far(xi->lower.size());
    for (Eigen::Index i = 0; i < far.size(); ++i)
      far[i] = std::max(std::fabs(xi->lower[i] - bo->center[i]), std::fabs(xi->upper[i] - bo->center[i]));
    return norm(far, tag) <= bo->radius + tol;
  }
  if (xi && xo) {
    for (Eigen::Index i = 0; i < xi->lower.size(); ++i) {
      if (xi->lower[i] < xo->lower[i] - tol || xi->upper[i] > xo->upper[i] + tol) return false;
    }
    return true;
  }
  // Fallback: random points of the inner body must lie in the outer one.
  Rng rng(0x5eed);
  const int d = body_dim(inner);
  for (int s = 0; s < 1000; ++s) {
    const Vector p = project_body(4.0 * rng.normal_vector(d), inner, tag);
    if (!body_contains(outer, p, tol, tag)) return false;
  }
  return true;
}

}  // namespace cfc
