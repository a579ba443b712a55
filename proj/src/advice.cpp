#include "cfc/advice.hpp"

#include "cfc/error.hpp"
#include "cfc/rng.hpp"

namespace cfc {

const char* advice_kind_name(AdviceSpec::Kind k) {
  switch (k) {
    case AdviceSpec::Kind::Perfect: return "perfect";
    case AdviceSpec::Kind::Noisy: return "noisy";
    case AdviceSpec::Kind::Constant: return "constant";
    case AdviceSpec::Kind::Adversarial: return "adversarial";
    default: return "replay";
  }
}

AdviceSpec::Kind parse_advice_kind(const std::string& s) {
  if (s == "perfect") return AdviceSpec::Kind::Perfect;
  if (s == "noisy") return AdviceSpec::Kind::Noisy;
  if (s == "constant") return AdviceSpec::Kind::Constant;
  if (s == "adversarial") return AdviceSpec::Kind::Adversarial;
  if (s == "replay") return AdviceSpec::Kind::Replay;
  throw InvalidArgument("unknown advice kind '" + s + "'");
}

std::unique_ptr<OnlineAlgorithm> make_advice(const AdviceSpec& spec, const Instance& inst,
                                             const std::optional<std::vector<Vector>>& opt_trajectory) {
  const int T = inst.T();
  const int d = inst.dim();
  const bool project = inst.bodies.has_value();
  std::vector<Vector> xs;
  switch (spec.kind) {
    case AdviceSpec::Kind::Perfect:
    case AdviceSpec::Kind::Noisy: {
      if (!opt_trajectory) throw InvalidArgument("advice: perfect/noisy advice needs an OPT trajectory");
      if (static_cast<int>(opt_trajectory->size()) != T) throw InvalidArgument("advice: OPT trajectory length != T");
      if (!(spec.sigma >= 0.0)) throw InvalidArgument("advice: sigma must be >= 0");
      xs = *opt_trajectory;
      if (spec.kind == AdviceSpec::Kind::Noisy && spec.sigma > 0.0) {
        Rng rng(spec.seed);
        for (auto& x : xs) x += spec.sigma * rng.unit_sphere(d);
      }
      break;
    }
    case AdviceSpec::Kind::Constant: {
      const Vector p = spec.point.size() == 0 ? inst.x0 : spec.point;
      if (p.size() != d) throw DimensionMismatch("advice: constant point has wrong dimension");
      xs.assign(T, p);
      break;
    }
    case AdviceSpec::Kind::Adversarial: {
      Rng rng(spec.seed);
      for (int t = 0; t < T; ++t) xs.push_back(rng.uniform_vector(d, -spec.amplitude, spec.amplitude));
      break;
    }
    case AdviceSpec::Kind::Replay: {
      if (static_cast<int>(spec.trajectory.size()) != T) throw InvalidArgument("advice: replay trajectory length != T");
      xs = spec.trajectory;
      break;
    }
  }
  return replay(std::move(xs), project, std::string("advice_") + advice_kind_name(spec.kind));
}

}  // namespace cfc
