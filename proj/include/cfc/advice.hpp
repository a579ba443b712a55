#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cfc/algorithms.hpp"

namespace cfc {

struct AdviceSpec {
  enum class Kind { Perfect, Noisy, Constant, Adversarial, Replay };
  Kind kind = Kind::Perfect;
  double sigma = 0.0;               // Noisy: per-round perturbation length
  Vector point;                     // Constant
  double amplitude = 5.0;           // Adversarial: half-width of the jump box
  std::vector<Vector> trajectory;   // Replay
  std::uint64_t seed = 1;
};

const char* advice_kind_name(AdviceSpec::Kind k);
AdviceSpec::Kind parse_advice_kind(const std::string& s);

// Decisions are projected into K_t whenever the instance has bodies.
std::unique_ptr<OnlineAlgorithm> make_advice(const AdviceSpec& spec, const Instance& inst,
                                             const std::optional<std::vector<Vector>>& opt_trajectory);

}  // namespace cfc
