#include "cfc/instance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cfc/error.hpp"
#include "cfc/rng.hpp"

namespace cfc {

const char* subclass_name(Subclass s) {
  switch (s) {
    case Subclass::CFC: return "CFC";
    case Subclass::CBC: return "CBC";
    case Subclass::NCBC: return "NCBC";
    default: return "alphaCFC";
  }
}

Subclass parse_subclass(const std::string& s) {
  if (s == "CFC") return Subclass::CFC;
  if (s == "CBC") return Subclass::CBC;
  if (s == "NCBC") return Subclass::NCBC;
  if (s == "alphaCFC") return Subclass::alphaCFC;
  throw InvalidArgument("unknown subclass '" + s + "'");
}

void validate_instance(const Instance& inst) {
  if (inst.x0.size() == 0 || !inst.x0.allFinite()) throw InvalidArgument("instance: x0 must be a finite nonempty vector");
  if (inst.T() < 1) throw InvalidArgument("instance: need at least one cost");
  for (int t = 1; t <= inst.T(); ++t) {
    const auto& f = inst.cost(t);
    if (cost_dim(f) != inst.dim()) {
      std::ostringstream os;
      os << "instance: cost " << t << " has dimension " << cost_dim(f) << ", expected " << inst.dim();
      throw DimensionMismatch(os.str());
    }
    validate_cost(f);
    if (inst.subclass == Subclass::alphaCFC && !std::holds_alternative<NormPolyhedral>(f))
      throw InvalidArgument("instance: alphaCFC costs must be norm_polyhedral");
  }
  if (inst.bodies) {
    if (static_cast<int>(inst.bodies->size()) != inst.T()) throw InvalidArgument("instance: bodies not aligned with costs");
    for (const auto& b : *inst.bodies) {
      if (body_dim(b) != inst.dim()) throw DimensionMismatch("instance: body dimension mismatch");
      validate_body(b);
    }
  } else if (inst.subclass == Subclass::CBC || inst.subclass == Subclass::NCBC) {
    throw InvalidArgument("instance: CBC/NCBC instances need bodies");
  }
}

bool check_nested(const Instance& inst, int points, std::uint64_t seed) {
  if (!inst.bodies) return false;
  Rng rng(seed);
  const auto& bodies = *inst.bodies;
  for (std::size_t t = 1; t < bodies.size(); ++t) {
    if (!body_nested_in(bodies[t], bodies[t - 1], 1e-9, inst.norm)) return false;
    for (int k = 0; k < points; ++k) {
      const Vector p = project_body(3.0 * rng.normal_vector(inst.dim()), bodies[t], inst.norm);
      if (!body_contains(bodies[t - 1], p, 1e-9, inst.norm)) return false;
    }
  }
  return true;
}

Instance rescale_instance(const Instance& inst, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("rescale_instance: lambda must be positive");
  Instance out = inst;
  out.x0 = lambda * inst.x0;
  for (auto& f : out.costs) f = rescale_cost(f, lambda);
  if (out.bodies)
    for (auto& b : *out.bodies) b = rescale_body(b, lambda);
  auto text = [](double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };
  double prior = 1.0;
  if (auto it = inst.metadata.find("rescale"); it != inst.metadata.end()) prior = std::stod(it->second);
  out.metadata["rescale"] = text(prior * lambda);
  if (auto it = inst.metadata.find("radius"); it != inst.metadata.end())
    out.metadata["radius"] = text(std::stod(it->second) * lambda);
  return out;
}

namespace {

Eigen::MatrixXd random_psd(Rng& rng, int dim, double lo, double hi) {
  Eigen::MatrixXd G(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) G(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  const Eigen::MatrixXd R = qr.householderQ();
  Vector eig(dim);
  for (int i = 0; i < dim; ++i) eig[i] = rng.uniform(lo, hi);
  Eigen::MatrixXd Q = R * eig.asDiagonal() * R.transpose();
  return 0.5 * (Q + Q.transpose());
}

void check_params(int dim, int T, const QuadraticGenParams& p) {
  if (dim < 1 || T < 1) throw InvalidArgument("generator: dim and T must be >= 1");
  if (!(p.eig_lo >= 0.0 && p.eig_lo <= p.eig_hi)) throw InvalidArgument("generator: bad eigenvalue range");
  if (!(p.center_lo <= p.center_hi)) throw InvalidArgument("generator: bad center range");
  if (!(p.offset_hi >= 0.0)) throw InvalidArgument("generator: offset_hi must be >= 0");
  if (!(p.jump_prob >= 0.0 && p.jump_prob <= 1.0)) throw InvalidArgument("generator: jump_prob must be in [0,1]");
}

std::vector<Vector> center_path(Rng& rng, int dim, int T, const QuadraticGenParams& p) {
  std::vector<Vector> out;
  Vector c = rng.uniform_vector(dim, p.center_lo, p.center_hi);
  const double width = p.center_hi - p.center_lo;
  for (int t = 0; t < T; ++t) {
    if (t > 0) {
      if (rng.uniform() < p.jump_prob) {
        c = rng.uniform_vector(dim, p.center_lo, p.center_hi);
      } else {
        c += 0.1 * width * rng.normal_vector(dim);
        c = c.cwiseMax(p.center_lo).cwiseMin(p.center_hi);
      }
    }
    out.push_back(c);
  }
  return out;
}

std::string to_text(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Instance gen_random_quadratic_cfc(int dim, int T, std::uint64_t seed, const QuadraticGenParams& params,
                                  NormTag norm) {
  check_params(dim, T, params);
  Rng rng(seed);
  Instance inst;
  inst.norm = norm;
  inst.subclass = Subclass::CFC;
  inst.x0 = rng.uniform_vector(dim, params.center_lo, params.center_hi);
  for (const Vector& c : center_path(rng, dim, T, params)) {
    Quadratic q{random_psd(rng, dim, params.eig_lo, params.eig_hi), c, rng.uniform(0.0, params.offset_hi)};
    inst.costs.emplace_back(std::move(q));
  }
  inst.metadata["generator"] = "quadratic";
  inst.metadata["seed"] = std::to_string(seed);
  return inst;
}

Instance gen_alpha_polyhedral(int dim, int T, double alpha, std::uint64_t seed, NormTag norm,
                              const QuadraticGenParams& params) {
  if (!(alpha > 0.0)) throw InvalidArgument("gen_alpha_polyhedral: alpha must be > 0");
  check_params(dim, T, params);
  Rng rng(seed);
  Instance inst;
  inst.norm = norm;
  inst.subclass = Subclass::alphaCFC;
  inst.x0 = rng.uniform_vector(dim, params.center_lo, params.center_hi);
  for (const Vector& c : center_path(rng, dim, T, params))
    inst.costs.emplace_back(NormPolyhedral{c, alpha, rng.uniform(0.0, params.offset_hi), norm});
  inst.metadata["generator"] = "alpha_polyhedral";
  inst.metadata["alpha"] = to_text(alpha);
  inst.metadata["seed"] = std::to_string(seed);
  return inst;
}

Instance gen_box_confined(int dim, int T, double half_width, std::uint64_t seed, const QuadraticGenParams& params,
                          NormTag norm) {
  if (!(half_width > 0.0)) throw InvalidArgument("gen_box_confined: half_width must be > 0");
  QuadraticGenParams q = params;
  q.center_lo = -half_width;
  q.center_hi = half_width;
  Instance inst = gen_random_quadratic_cfc(dim, T, seed, q, norm);
  inst.subclass = Subclass::CBC;
  const Box box{Vector::Constant(dim, -half_width), Vector::Constant(dim, half_width)};
  inst.bodies.emplace(T, box);
  inst.metadata["generator"] = "box_confined";
  inst.metadata["half_width"] = to_text(half_width);
  return inst;
}

Instance gen_phase_forcing(int dim, int T, double step, std::uint64_t seed, const QuadraticGenParams& params,
                           NormTag norm) {
  if (!(step > 0.0)) throw InvalidArgument("gen_phase_forcing: step must be > 0");
  check_params(dim, T, params);
  Rng rng(seed);
  Instance inst;
  inst.norm = norm;
  inst.subclass = Subclass::CFC;
  inst.x0 = rng.uniform_vector(dim, params.center_lo, params.center_hi);
  const Vector u = rng.unit_sphere(dim);
  for (int t = 1; t <= T; ++t) {
    const Vector c = inst.x0 + (t * step) * u + 0.1 * step * rng.unit_sphere(dim);
    inst.costs.emplace_back(Quadratic{random_psd(rng, dim, params.eig_lo, params.eig_hi), c,
                                      rng.uniform(0.0, params.offset_hi)});
  }
  inst.metadata["generator"] = "phase_forcing";
  inst.metadata["step"] = to_text(step);
  inst.metadata["seed"] = std::to_string(seed);
  return inst;
}

Instance gen_nested_bodies(int dim, int T, double r, std::uint64_t seed, NestedShape shape) {
  if (dim < 1 || T < 1) throw InvalidArgument("gen_nested_bodies: dim and T must be >= 1");
  if (!(r > 0.0)) throw InvalidArgument("gen_nested_bodies: r must be > 0");
  Rng rng(seed);
  Instance inst;
  inst.norm = NormTag::l2();
  inst.subclass = Subclass::NCBC;
  const Vector y = rng.uniform_vector(dim, -2.0, 2.0);
  const double u = std::pow(rng.uniform(), 1.0 / dim);
  inst.x0 = y + r * u * rng.unit_sphere(dim);
  bool balls = shape == NestedShape::balls;
  if (shape == NestedShape::random) balls = rng.uniform() < 0.5;
  std::vector<ConvexBody> bodies;
  if (balls) {
    double rad = r * rng.uniform(0.4, 0.8);
    Vector c = y + (r - rad) * rng.uniform() * rng.unit_sphere(dim);
    for (int t = 0; t < T; ++t) {
      if (t > 0) {
        const double next = rad * rng.uniform(0.6, 0.95);
        c += (rad - next) * rng.uniform() * rng.unit_sphere(dim);
        rad = next;
      }
      bodies.emplace_back(Ball{c, rad});
    }
  } else {
    // start inside the cube inscribed in B(y, r)
    const double h = r / std::sqrt(static_cast<double>(dim));
    Vector lo(dim), width(dim);
    for (int i = 0; i < dim; ++i) {
      width[i] = 2.0 * h * rng.uniform(0.4, 0.9);
      lo[i] = y[i] - h + rng.uniform() * (2.0 * h - width[i]);
    }
    for (int t = 0; t < T; ++t) {
      if (t > 0) {
        for (int i = 0; i < dim; ++i) {
          const double next = width[i] * rng.uniform(0.6, 0.95);
          lo[i] += rng.uniform() * (width[i] - next);
          width[i] = next;
        }
      }
      bodies.emplace_back(Box{lo, lo + width});
    }
  }
  for (const auto& b : bodies) inst.costs.emplace_back(BodyDistance{b, 3.0, inst.norm});
  inst.bodies = std::move(bodies);
  inst.metadata["generator"] = "nested_bodies";
  inst.metadata["shape"] = balls ? "balls" : "boxes";
  inst.metadata["radius"] = to_text(r);
  std::ostringstream ys;
  ys.precision(17);
  for (int i = 0; i < dim; ++i) ys << (i ? "," : "") << y[i];
  inst.metadata["ball_center"] = ys.str();
  inst.metadata["seed"] = std::to_string(seed);
  return inst;
}

}  // namespace cfc
