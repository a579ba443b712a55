#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "cfc/error.hpp"
#include "cfc/harness.hpp"
#include "cfc/rng.hpp"

namespace cfc {

namespace {

// Positive when lhs exceeds rhs, relative to the larger side.
double rel_margin(double lhs, double rhs) {
  const double scale = std::max({std::fabs(lhs), std::fabs(rhs), 1e-300});
  return (lhs - rhs) / scale;
}

struct Sampler {
  Rng rng;
  NormTag tag;
  int dim;

  double scale() { return std::pow(10.0, rng.uniform(-1.0, 1.0)); }
  Vector point() { return scale() * rng.normal_vector(dim); }
  Vector unit() {
    Vector u = rng.normal_vector(dim);
    const double n = norm(u, tag);
    return n > 0.0 ? Vector(u / n) : unit();
  }
  // Sparse and axis-aligned directions hit the corners of l1/linf balls.
  Vector direction() {
    const double c = rng.uniform();
    if (c < 0.15) {
      Vector u = Vector::Zero(dim);
      u[rng.below(dim)] = rng.below(2) ? 1.0 : -1.0;
      return u;
    }
    if (c < 0.3) {
      Vector u(dim);
      for (int i = 0; i < dim; ++i) u[i] = rng.below(2) ? 1.0 : -1.0;
      return u / norm(u, tag);
    }
    return unit();
  }
};

using Check = std::function<double(Sampler&)>;

}  // namespace

LemmaReport verify_lemmas(const std::vector<NormTag>& norms, const std::vector<int>& dims, long samples,
                          std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("verify_lemmas: samples must be >= 1");
  if (norms.empty() || dims.empty()) throw InvalidArgument("verify_lemmas: empty norm or dim list");
  for (int d : dims)
    if (d < 1) throw InvalidArgument("verify_lemmas: dim must be >= 1");
  LemmaReport rep;
  std::uint64_t stream = 0;
  for (NormTag tag : norms) {
    const SpaceConstants sc = space_constants(tag);
    const double mu = sc.mu_upper;
    const double k = sc.k_upper;
    for (int dim : dims) {
      auto N = [tag](const Vector& v) { return norm(v, tag); };
      auto rho = [tag](const Vector& v, double r) { return radial_retraction(v, r, tag); };

      std::vector<std::pair<std::string, std::pair<double, Check>>> checks;
      checks.push_back({"retraction_bound", {0.0, [&](Sampler& s) {
                          const Vector x = s.point();
                          const double r = s.rng.uniform(0.0, 2.0) * N(x);
                          const Vector y = rho(x, r);
                          if (N(x) <= r) return (y - x).cwiseAbs().maxCoeff() > 0.0 ? 1.0 : 0.0;
                          return (N(y) - r - 1e-12) / std::max(r, 1e-300);
                        }}});
      checks.push_back({"lemma_c1", {0.0, [&](Sampler& s) {
                          const Vector x = s.point();
                          Vector y = s.point();
                          if (N(y - x) == 0.0) y += s.unit();
                          const double r = s.rng.uniform(0.0, 2.0) * N(y - x);
                          const Vector yh = x + r * (y - x) / N(y - x);
                          Vector w;
                          if (s.rng.uniform() < 0.5) {
                            w = x + r * s.direction();
                          } else {
                            Vector v = (y - x) / N(y - x) + 1e-3 * s.unit();
                            w = x + r * v / N(v);
                          }
                          return rel_margin(N(y - yh), N(y - w));
                        }}});
      checks.push_back({"lemma_c2", {0.0, [&](Sampler& s) {
                          const Vector a = s.point();
                          const Vector b = s.point();
                          const Vector c = s.rng.uniform() < 0.3 ? Vector(b + 1e-2 * s.scale() * s.unit()) : s.point();
                          const double r = s.rng.uniform(0.0, 1.2) * std::max(N(a - b), N(a - c));
                          const Vector x = b + rho(a - b, r);
                          const Vector y = c + rho(a - c, r);
                          return rel_margin(N(x - y), N(b - c));
                        }}});
      checks.push_back({"lemma_c3", {mu, [&](Sampler& s) {
                          const double r = s.scale();
                          const Vector x = r * s.direction();
                          const Vector y = r * s.direction();
                          const double t = 1.0 + std::pow(10.0, s.rng.uniform(-3.0, 1.0));
                          return rel_margin(N(y - x) + (t - 1.0) * N(y), mu * N(t * y - x));
                        }}});
      checks.push_back({"lemma_c4", {mu, [&](Sampler& s) {
                          const Vector w = s.point();
                          const double r = s.scale();
                          const Vector x = w + r * (1.0 + s.rng.uniform(0.0, 2.0)) * s.direction();
                          const Vector y = s.rng.uniform() < 0.5 ? Vector(w + r * s.rng.uniform(0.0, 3.0) * s.direction())
                                                                 : s.point();
                          const Vector xh = w + rho(x - w, r);
                          const Vector yh = w + rho(y - w, r);
                          return rel_margin(N(yh - xh) + N(y - yh), mu * N(y - x) + N(x - xh));
                        }}});

      // Interp states: x_{t-1} is the retraction of the previous advice onto a ball about s_{t-1}.
      struct State {
        Vector s_prev, s, a_prev, a, x_prev, y, z, x;
      };
      auto state = [&](Sampler& s) {
        State st;
        st.s_prev = s.point();
        st.s = s.rng.uniform() < 0.5 ? Vector(st.s_prev + 0.1 * s.scale() * s.direction()) : s.point();
        st.a_prev = s.point();
        st.a = s.rng.uniform() < 0.5 ? Vector(st.a_prev + 0.1 * s.scale() * s.direction()) : s.point();
        const double R = s.rng.uniform(0.0, 1.2) * N(st.a_prev - st.s_prev);
        st.x_prev = st.s_prev + rho(st.a_prev - st.s_prev, R);
        const double c_adv = s.scale();
        const double gamma = s.rng.uniform(0.0, 0.5);
        st.y = st.s_prev + rho(st.a - st.s_prev, N(st.x_prev - st.s_prev));
        st.z = st.s_prev + rho(st.y - st.s_prev, std::max(N(st.y - st.s_prev) - gamma * c_adv, 0.0));
        st.x = st.s + rho(st.a - st.s, N(st.z - st.s_prev));
        return st;
      };
      checks.push_back({"corollary_d1", {0.0, [&](Sampler& s) {
                          const State st = state(s);
                          return rel_margin(N(st.x - st.z), N(st.s - st.s_prev));
                        }}});
      checks.push_back({"corollary_d2", {k, [&](Sampler& s) {
                          const State st = state(s);
                          return rel_margin(N(st.y - st.x_prev), k * N(st.a - st.a_prev));
                        }}});
      checks.push_back({"corollary_d3", {mu, [&](Sampler& s) {
                          const State st = state(s);
                          return rel_margin(N(st.y - st.x_prev) + N(st.a - st.y),
                                            mu * N(st.a - st.a_prev) + N(st.a_prev - st.x_prev));
                        }}});

      for (auto& [name, pc] : checks) {
        Sampler s{Rng(derive_seed(seed, stream++)), tag, dim};
        double worst = -std::numeric_limits<double>::infinity();
        for (long i = 0; i < samples; ++i) worst = std::max(worst, pc.second(s));
        LemmaResult row{name, tag.str(), dim, samples, worst, pc.first, worst <= rep.tolerance};
        rep.pass = rep.pass && row.pass;
        rep.rows.push_back(row);
      }
      {
        const double bound = std::min(2.0, mu);
        const double est = estimate_lipschitz_empirical(tag, dim, samples, derive_seed(seed, stream++));
        LemmaResult row{"proposition_c1", tag.str(), dim, samples, est - bound, bound, est <= bound + 1e-9};
        rep.pass = rep.pass && row.pass;
        rep.rows.push_back(row);
      }
    }
  }
  return rep;
}

}  // namespace cfc
