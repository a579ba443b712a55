#include <gtest/gtest.h>

#include <string>

#include "cfc/config.hpp"
#include "cfc/error.hpp"

using namespace cfc;

namespace {

Json minimal() {
  return Json::parse(R"({
    "master_seed": 3,
    "suites": [{
      "name": "q",
      "generator": {"kind": "quadratic", "dims": 1, "horizons": [5]},
      "advice": [{"kind": "perfect"}],
      "algorithms": [{"kind": "interp", "epsilons": [0.5, 1]}]
    }]
  })");
}

std::string error_of(const Json& doc) {
  try {
    parse_sweep_config(doc);
  } catch (const InvalidArgument& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, MinimalParses) {
  const SweepSpec s = parse_sweep_config(minimal());
  ASSERT_EQ(s.suites.size(), 1u);
  EXPECT_EQ(s.master_seed, 3u);
  EXPECT_EQ(s.suites[0].generator.dims, std::vector<int>{1});
  EXPECT_EQ(s.suites[0].algorithms[0].epsilons, (std::vector<double>{0.5, 1.0}));
  EXPECT_EQ(count_runs(s), 2);
}

TEST(Config, FieldPathDiagnostics) {
  Json d = minimal();
  d["suites"][0]["algorithms"][0]["epsilons"][1] = -1;
  EXPECT_EQ(error_of(d), "config.suites[0].algorithms[0].epsilons[1]: must be > 0");
  d = minimal();
  d["bogus"] = 1;
  EXPECT_EQ(error_of(d), "config.bogus: unknown key");
  d = minimal();
  d["suites"][0]["generator"]["kind"] = "nope";
  EXPECT_NE(error_of(d).find("config.suites[0].generator.kind"), std::string::npos);
  d = minimal();
  d["suites"][0]["generator"]["norms"] = {"inf", 0.5};
  EXPECT_NE(error_of(d).find("config.suites[0].generator.norms[1]"), std::string::npos);
}

TEST(Config, GammaDeltaConstraint) {
  Json d = minimal();
  d["suites"][0]["algorithms"][0]["epsilons"] = {1.0};
  d["suites"][0]["algorithms"][0]["gamma"] = 0.25;
  EXPECT_FALSE(error_of(d).empty());
  d["suites"][0]["algorithms"][0]["delta"] = 0.25;
  EXPECT_TRUE(error_of(d).empty());
  d["suites"][0]["algorithms"][0]["delta"] = 0.3;
  EXPECT_FALSE(error_of(d).empty());
}

TEST(Config, NormsAcceptInf) {
  Json d = minimal();
  d["suites"][0]["generator"]["norms"] = {1, 2, "inf"};
  const SweepSpec s = parse_sweep_config(d);
  EXPECT_TRUE(std::isinf(s.suites[0].generator.norms[2]));
}

TEST(Config, LoadErrors) {
  EXPECT_THROW(load_sweep_config("/nonexistent/config.json"), InvalidArgument);
}
