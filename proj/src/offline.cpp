#include "cfc/offline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cfc/algorithms.hpp"
#include "cfc/error.hpp"
#include "cfc/kernels.hpp"
#include "cfc/rng.hpp"

namespace cfc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void include_point(GridBox& b, const Vector& p) {
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i])) continue;
    b.lower[i] = std::min(b.lower[i], p[i]);
    b.upper[i] = std::max(b.upper[i], p[i]);
  }
}

void include_body(GridBox& b, const ConvexBody& body) {
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Ball>) {
          include_point(b, k.center - Vector::Constant(k.center.size(), k.radius));
          include_point(b, k.center + Vector::Constant(k.center.size(), k.radius));
        } else if constexpr (std::is_same_v<T, Box> || std::is_same_v<T, AffineSliceOfBox>) {
          include_point(b, k.lower);
          include_point(b, k.upper);
          if constexpr (std::is_same_v<T, AffineSliceOfBox>) {
            Vector p = b.lower;
            for (std::size_t j = 0; j < k.fixed_index.size(); ++j) {
              p = b.lower;
              p[k.fixed_index[j]] = k.fixed_value[j];
              include_point(b, p);
            }
          }
        } else if constexpr (std::is_same_v<T, Singleton>) {
          include_point(b, k.point);
        }
      },
      body);
}

std::vector<Vector> box_vertices(const GridBox& box) {
  const int d = static_cast<int>(box.lower.size());
  std::vector<Vector> out;
  const int n = d <= 12 ? (1 << d) : 0;
  for (int m = 0; m < n; ++m) {
    Vector v(d);
    for (int i = 0; i < d; ++i) v[i] = (m >> i) & 1 ? box.upper[i] : box.lower[i];
    out.push_back(v);
  }
  return out;
}

}  // namespace

GridBox default_grid_box(const Instance& inst) {
  GridBox b{inst.x0, inst.x0};
  for (int t = 1; t <= inst.T(); ++t) {
    std::visit(
        [&](const auto& f) {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, BodyDistance>) include_body(b, f.body);
          else include_point(b, f.center);
        },
        inst.cost(t));
    if (const ConvexBody* k = inst.body(t)) include_body(b, *k);
  }
  // Anisotropic quadratics can pull the optimum slightly outside the hull.
  const Vector extent = b.upper - b.lower;
  const double pad = 0.25 * extent.maxCoeff() + 0.25;
  b.lower.array() -= pad;
  b.upper.array() += pad;
  return b;
}

double lipschitz_on_box(const CostFunction& f, const GridBox& box, NormTag norm) {
  const NormTag dual(norm.dual());
  double L = 0.0;
  std::vector<Vector> pts = box_vertices(box);
  Rng rng(0x11b);
  for (int s = 0; s < 64; ++s) {
    Vector p(box.lower.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = rng.uniform(box.lower[i], box.upper[i]);
    pts.push_back(p);
  }
  for (const auto& p : pts) L = std::max(L, cfc::norm(subgradient(f, p), dual));
  if (const auto* c = std::get_if<BodyDistance>(&f)) L = std::max(L, c->scale);
  if (const auto* c = std::get_if<NormPolyhedral>(&f)) L = std::max(L, c->alpha);
  return L;
}

OptResult opt_grid_dp(const Instance& inst, const std::optional<GridBox>& box_in, int points_per_dim) {
  const int d = inst.dim();
  if (d > 2) throw InvalidArgument("opt_grid_dp: only dimensions 1 and 2 are supported");
  if (points_per_dim < 3) throw InvalidArgument("opt_grid_dp: need at least 3 points per dimension");
  if (d == 1 && points_per_dim > 100001) throw InvalidArgument("opt_grid_dp: 1D grid capped at 100001 points");
  if (d == 2 && points_per_dim > 250) throw InvalidArgument("opt_grid_dp: 2D grid capped at 250 points per dimension");

  GridBox box = default_grid_box(inst);
  if (box_in) {
    if (box_in->lower.size() != d || box_in->upper.size() != d) throw DimensionMismatch("opt_grid_dp: box dimension");
    GridBox given = *box_in;
    GridBox tight{inst.x0, inst.x0};
    for (int t = 1; t <= inst.T(); ++t) {
      std::visit(
          [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, BodyDistance>) include_body(tight, f.body);
            else include_point(tight, f.center);
          },
          inst.cost(t));
    }
    given.lower = given.lower.cwiseMin(tight.lower);
    given.upper = given.upper.cwiseMax(tight.upper);
    box = given;
  }

  const int n = points_per_dim;
  Vector h(d);
  for (int i = 0; i < d; ++i) h[i] = (box.upper[i] - box.lower[i]) / (n - 1);
  const std::size_t G = d == 1 ? n : static_cast<std::size_t>(n) * n;
  std::vector<double> gx(G), gy(d == 2 ? G : 0);
  std::vector<Vector> nodes(G, Vector(d));
  for (std::size_t g = 0; g < G; ++g) {
    if (d == 1) {
      gx[g] = box.lower[0] + static_cast<double>(g) * h[0];
      nodes[g][0] = gx[g];
    } else {
      const std::size_t ix = g % n, iy = g / n;
      gx[g] = box.lower[0] + static_cast<double>(ix) * h[0];
      gy[g] = box.lower[1] + static_cast<double>(iy) * h[1];
      nodes[g][0] = gx[g];
      nodes[g][1] = gy[g];
    }
  }

  const int T = inst.T();
  std::vector<double> V(G), W(G);
  std::vector<std::vector<std::uint32_t>> parent(T, std::vector<std::uint32_t>(G, 0));
  for (std::size_t g = 0; g < G; ++g) V[g] = eval(inst.cost(1), nodes[g]) + distance(nodes[g], inst.x0, inst.norm);

  kernels::Metric metric = kernels::Metric::l2;
  bool fast_metric = true;
  if (inst.norm.p() == 1.0) metric = kernels::Metric::l1;
  else if (inst.norm.is_inf()) metric = kernels::Metric::linf;
  else if (!inst.norm.is_l2()) fast_metric = false;

  for (int t = 2; t <= T; ++t) {
    auto& par = parent[t - 1];
    if (d == 1) {
      // min-plus with |g - g'| on a uniform grid: forward and backward sweeps
      std::vector<std::uint32_t> arg(G);
      for (std::size_t g = 0; g < G; ++g) {
        W[g] = V[g];
        arg[g] = static_cast<std::uint32_t>(g);
      }
      for (std::size_t g = 1; g < G; ++g) {
        const double c = W[g - 1] + (gx[g] - gx[g - 1]);
        if (c < W[g]) {
          W[g] = c;
          arg[g] = arg[g - 1];
        }
      }
      for (std::size_t g = G - 1; g-- > 0;) {
        const double c = W[g + 1] + (gx[g + 1] - gx[g]);
        if (c < W[g]) {
          W[g] = c;
          arg[g] = arg[g + 1];
        }
      }
      par = arg;
    } else {
      for (std::size_t g = 0; g < G; ++g) {
        if (fast_metric) {
          const auto m = kernels::min_plus_2d(gx.data(), gy.data(), V.data(), G, gx[g], gy[g], metric);
          W[g] = m.value;
          par[g] = static_cast<std::uint32_t>(m.index);
        } else {
          double best = kInf;
          std::size_t bi = 0;
          for (std::size_t j = 0; j < G; ++j) {
            const double c = V[j] + distance(nodes[g], nodes[j], inst.norm);
            if (c < best) {
              best = c;
              bi = j;
            }
          }
          W[g] = best;
          par[g] = static_cast<std::uint32_t>(bi);
        }
      }
    }
    for (std::size_t g = 0; g < G; ++g) V[g] = W[g] + eval(inst.cost(t), nodes[g]);
  }

  std::size_t g = static_cast<std::size_t>(std::min_element(V.begin(), V.end()) - V.begin());
  std::vector<Vector> traj(T);
  for (int t = T; t >= 1; --t) {
    traj[t - 1] = nodes[g];
    if (t > 1) g = parent[t - 1][g];
  }

  double L = 0.0;
  for (int t = 1; t <= T; ++t) L = std::max(L, lipschitz_on_box(inst.cost(t), box, inst.norm));
  OptResult out;
  out.trajectory = std::move(traj);
  out.cost = evaluate_trajectory(inst, out.trajectory).total();
  out.method = "grid_dp";
  out.gap_estimate = T * (L + 1.0) * norm(h, inst.norm);
  return out;
}

namespace {

// Smooth upper approximation of an l^p norm and its gradient.
double smooth_norm(const Vector& v, NormTag tag, double mu, Vector* grad) {
  const Eigen::Index n = v.size();
  const double p = tag.p();
  if (tag.is_inf()) {
    // mu * log sum_i (e^{v_i/mu} + e^{-v_i/mu})
    const double m = v.cwiseAbs().maxCoeff();
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) s += std::exp((v[i] - m) / mu) + std::exp((-v[i] - m) / mu);
    if (grad) {
      grad->resize(n);
      for (Eigen::Index i = 0; i < n; ++i)
        (*grad)[i] = (std::exp((v[i] - m) / mu) - std::exp((-v[i] - m) / mu)) / s;
    }
    return m + mu * std::log(s);
  }
  if (p == 1.0) {
    double s = 0.0;
    if (grad) grad->resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double w = std::sqrt(v[i] * v[i] + mu * mu);
      s += w;
      if (grad) (*grad)[i] = v[i] / w;
    }
    return s;
  }
  if (p == 2.0) {
    const double w = std::sqrt(v.squaredNorm() + mu * mu);
    if (grad) *grad = v / w;
    return w;
  }
  // (sum_i (v_i^2 + mu^2)^{p/2})^{1/p}
  Vector w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = std::sqrt(v[i] * v[i] + mu * mu);
  const double m = w.maxCoeff();
  double s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) s += std::pow(w[i] / m, p);
  const double N = m * std::pow(s, 1.0 / p);
  if (grad) {
    grad->resize(n);
    for (Eigen::Index i = 0; i < n; ++i) (*grad)[i] = std::pow(w[i] / N, p - 1.0) * v[i] / w[i];
  }
  return N;
}

using Path = Eigen::MatrixXd;  // column t-1 holds x_t

class Objective {
 public:
  explicit Objective(const Instance& inst) : inst_(inst), d_(inst.dim()), T_(inst.T()) {}

  double exact(const Path& X) const {
    double s = 0.0;
    for (int t = 0; t < T_; ++t) {
      const Vector x = X.col(t);
      s += eval(inst_.costs[t], x);
      s += distance(x, t == 0 ? inst_.x0 : Vector(X.col(t - 1)), inst_.norm);
    }
    return s;
  }

  double smooth(const Path& X, double mu, Path* G) const {
    if (G) G->setZero(d_, T_);
    double s = 0.0;
    Vector g;
    for (int t = 0; t < T_; ++t) {
      const Vector x = X.col(t);
      s += smooth_cost(inst_.costs[t], x, mu, G ? &g : nullptr);
      if (G) G->col(t) += g;
      const Vector v = x - (t == 0 ? inst_.x0 : Vector(X.col(t - 1)));
      s += smooth_norm(v, inst_.norm, mu, G ? &g : nullptr);
      if (G) {
        G->col(t) += g;
        if (t > 0) G->col(t - 1) -= g;
      }
    }
    return s;
  }

  void subgrad(const Path& X, Path& G) const {
    G.setZero(d_, T_);
    for (int t = 0; t < T_; ++t) {
      const Vector x = X.col(t);
      G.col(t) += subgradient(inst_.costs[t], x);
      const Vector g = norm_gradient(x - (t == 0 ? inst_.x0 : Vector(X.col(t - 1))), inst_.norm);
      G.col(t) += g;
      if (t > 0) G.col(t - 1) -= g;
    }
  }

 private:
  static double smooth_cost(const CostFunction& f, const Vector& x, double mu, Vector* g) {
    return std::visit(
        [&](const auto& c) -> double {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, Quadratic>) {
            const Vector r = x - c.center;
            const Vector qr = c.Q * r;
            if (g) *g = 2.0 * qr;
            return r.dot(qr) + c.offset;
          } else if constexpr (std::is_same_v<T, NormPolyhedral>) {
            const double n = smooth_norm(x - c.center, c.norm, mu, g);
            if (g) *g *= c.alpha;
            return c.offset + c.alpha * n;
          } else if constexpr (std::is_same_v<T, NormPower>) {
            const double n = smooth_norm(x - c.center, c.norm, mu, g);
            if (g) *g *= 0.5 * c.coefficient * c.exponent * std::pow(n, c.exponent - 1.0);
            return 0.5 * c.coefficient * std::pow(n, c.exponent);
          } else {
            const Vector r = x - project_body(x, c.body, c.norm);
            const double n = smooth_norm(r, c.norm, mu, g);
            if (g) *g *= c.scale;
            return c.scale * n;
          }
        },
        f);
  }

  const Instance& inst_;
  int d_, T_;
};

// Accelerated gradient with backtracking and adaptive restart.
void accelerated(const Objective& obj, Path& X, double mu, int iters) {
  Path Y = X, Xprev = X, G, Xn;
  double L = 1.0 / mu;
  double theta = 1.0;
  double fx = obj.smooth(X, mu, nullptr);
  for (int k = 0; k < iters; ++k) {
    const double fy = obj.smooth(Y, mu, &G);
    const double g2 = G.squaredNorm();
    if (g2 < 1e-30) break;
    for (int bt = 0; bt < 60; ++bt) {
      Xn = Y - G / L;
      const double fn = obj.smooth(Xn, mu, nullptr);
      if (fn <= fy - 0.5 * g2 / L + 1e-15 * std::fabs(fy)) {
        break;
      }
      L *= 2.0;
    }
    const double fn = obj.smooth(Xn, mu, nullptr);
    if (fn > fx) {
      // restart momentum
      theta = 1.0;
      Y = X;
      continue;
    }
    const double theta_n = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
    Y = Xn + ((theta - 1.0) / theta_n) * (Xn - X);
    const double rel = (fx - fn) / std::max(1e-12, std::fabs(fx));
    Xprev = X;
    X = Xn;
    fx = fn;
    theta = theta_n;
    L *= 0.95;
    if (rel < 1e-13 && k > 20) break;
  }
}

Path to_path(const std::vector<Vector>& xs, int d) {
  Path X(d, static_cast<int>(xs.size()));
  for (std::size_t t = 0; t < xs.size(); ++t) X.col(static_cast<int>(t)) = xs[t];
  return X;
}

std::vector<Vector> from_path(const Path& X) {
  std::vector<Vector> xs;
  for (int t = 0; t < X.cols(); ++t) xs.emplace_back(X.col(t));
  return xs;
}

}  // namespace

OptResult opt_first_order(const Instance& inst, int iters, std::uint64_t seed,
                          const std::vector<std::vector<Vector>>& extra_starts) {
  if (iters < 1) throw InvalidArgument("opt_first_order: iters must be >= 1");
  const int d = inst.dim();
  const int T = inst.T();
  const Objective obj(inst);

  std::vector<std::vector<Vector>> starts;
  starts.emplace_back(T, inst.x0);
  {
    std::vector<Vector> g;
    Vector prev = inst.x0;
    for (int t = 1; t <= T; ++t) {
      prev = minimizer(inst.cost(t), prev);
      g.push_back(prev);
    }
    starts.push_back(std::move(g));
  }
  for (const auto& s : extra_starts)
    if (static_cast<int>(s.size()) == T) starts.push_back(s);

  // problem scale for the smoothing schedule
  double scale = 1e-3;
  for (const auto& s : starts)
    for (const auto& x : s) scale = std::max(scale, (x - inst.x0).cwiseAbs().maxCoeff());

  const int stages = 5;
  const int per_stage = std::max(1, iters / (2 * stages));
  const int polish = std::max(1, iters / 2);

  Path best;
  double best_f = kInf;
  double best_gap = 0.0;
  Rng rng(seed);
  // a jittered copy of the StayPut path; the jitter is tiny and seeded
  {
    std::vector<Vector> j(T, inst.x0);
    for (auto& x : j) x += 1e-6 * rng.normal_vector(d);
    starts.push_back(std::move(j));
  }
  for (const auto& s : starts) {
    Path X = to_path(s, d);
    double mu = 0.1 * scale;
    for (int st = 0; st < stages; ++st, mu *= 0.1) accelerated(obj, X, mu, per_stage);

    // subgradient polishing: diminishing steps, best-so-far and a running average
    double fx = obj.exact(X);
    Path Xb = X, G, Avg = Path::Zero(d, T);
    double fb = fx;
    int avg_n = 0;
    std::vector<double> tail;
    const double step0 = 1e-3 * scale;
    for (int k = 0; k < polish; ++k) {
      obj.subgrad(X, G);
      const double gn = G.norm();
      if (gn < 1e-14) break;
      const double step = (fx - fb + step0 / std::sqrt(k + 1.0)) / gn;
      X -= (step / gn) * G;
      fx = obj.exact(X);
      if (fx < fb) {
        fb = fx;
        Xb = X;
      }
      if (k >= polish / 2) {
        Avg += X;
        ++avg_n;
      }
      if (polish - k <= 1000) tail.push_back(fx);
    }
    if (avg_n > 0) {
      const Path A = Avg / avg_n;
      const double fa = obj.exact(A);
      if (fa < fb) {
        fb = fa;
        Xb = A;
      }
    }
    double gap = 0.0;
    if (!tail.empty()) {
      const auto [mn, mx] = std::minmax_element(tail.begin(), tail.end());
      gap = *mx - *mn;
    }
    // ties: lexicographic order of the trajectory keeps merging deterministic
    bool take = fb < best_f;
    if (fb == best_f) {
      for (Eigen::Index i = 0; i < Xb.size(); ++i) {
        if (Xb.data()[i] != best.data()[i]) {
          take = Xb.data()[i] < best.data()[i];
          break;
        }
      }
    }
    if (take) {
      best_f = fb;
      best = Xb;
      best_gap = gap;
    }
  }
  OptResult out;
  out.trajectory = from_path(best);
  out.cost = evaluate_trajectory(inst, out.trajectory).total();
  out.method = "first_order";
  out.gap_estimate = best_gap;
  if (!std::isfinite(out.cost)) throw RuntimeFailure("opt_first_order: non-finite objective");
  return out;
}

OptResult opt_for_ncbc(const Instance& inst, int iters, std::uint64_t seed) {
  if (!inst.bodies) throw InvalidArgument("opt_for_ncbc: instance has no bodies");
  OptResult r = opt_first_order(inst, iters, seed);
  for (int t = 1; t <= inst.T(); ++t) r.trajectory[t - 1] = project_body(r.trajectory[t - 1], *inst.body(t), inst.norm);
  r.cost = evaluate_trajectory(inst, r.trajectory).total();
  return r;
}

}  // namespace cfc
