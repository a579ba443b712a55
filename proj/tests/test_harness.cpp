#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cfc/error.hpp"
#include "cfc/harness.hpp"

using namespace cfc;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

ExperimentOptions quick_opts() {
  ExperimentOptions o;
  o.opt.points_1d = 4001;
  o.opt.iters = 400;
  return o;
}

}  // namespace

TEST(SafeRatio, Conventions) {
  EXPECT_EQ(safe_ratio(0.0, 0.0), 1.0);
  EXPECT_TRUE(std::isinf(safe_ratio(1.0, 0.0)));
  EXPECT_EQ(safe_ratio(3.0, 2.0), 1.5);
}

TEST(Csv, HeaderOrder) {
  const std::string expect =
      "instance_hash,subclass,algorithm,epsilon,gamma,delta,d,T,p,C_adv,C_rob,C_opt_lo,C_alg,ratio_adv,ratio_rob,"
      "bound_c,bound_r,violated_c,violated_r,measured_D,rescale,seed,wall_ms";
  EXPECT_EQ(csv_header(), expect);
}

TEST(Experiment, PerfectAdviceInterpIsConsistent) {
  const Instance inst = gen_random_quadratic_cfc(1, 15, 3);
  AlgorithmSpec alg;
  const RunReport r = run_experiment(inst, AdviceSpec{}, alg, 0.5, quick_opts());
  EXPECT_LE(r.ratio_adv, std::sqrt(2.0) + 0.5);
  EXPECT_FALSE(r.violated());
  EXPECT_NEAR(r.bound_c, std::sqrt(2.0) + 0.5, 1e-12);
  EXPECT_EQ(static_cast<int>(r.c_alg.size()), 15);
  EXPECT_NEAR(r.C_alg, r.c_alg.back(), 0.0);
  EXPECT_NEAR(r.ratio_adv, safe_ratio(r.C_alg, r.C_adv), 0.0);
  EXPECT_NEAR(r.ratio_rob, safe_ratio(r.C_alg, r.C_rob), 0.0);
  EXPECT_TRUE(r.per_round_consistency);
  EXPECT_EQ(split(csv_row(r), ',').size(), split(csv_header(), ',').size());
  const Json j = report_to_json(r);
  for (const char* k : {"instance_hash", "costs", "ratios", "bounds", "violations", "series", "phase_log", "rescale", "measured_D"}) {
    EXPECT_TRUE(j.contains(k)) << k;
  }
}

TEST(Experiment, FarConstantAdviceInterpIsRobust) {
  const Instance inst = gen_random_quadratic_cfc(2, 20, 4);
  AdviceSpec adv;
  adv.kind = AdviceSpec::Kind::Constant;
  adv.point = Vector::Constant(2, 25.0);
  AlgorithmSpec alg;
  const RunReport r = run_experiment(inst, adv, alg, 1.0, quick_opts());
  EXPECT_LE(r.ratio_rob, r.bound_r);
  EXPECT_FALSE(r.violated());
  EXPECT_GE(r.C_rob * r.rescale, 0.0);
}

TEST(Experiment, FollowAdviceIsIdentity) {
  const Instance inst = gen_random_quadratic_cfc(1, 10, 5);
  AlgorithmSpec alg;
  alg.kind = "follow_advice";
  AdviceSpec adv;
  adv.kind = AdviceSpec::Kind::Noisy;
  adv.sigma = 0.2;
  const RunReport r = run_experiment(inst, adv, alg, 1.0, quick_opts());
  EXPECT_EQ(r.ratio_adv, 1.0);
  EXPECT_FALSE(r.violated());
}

TEST(Experiment, BdInterpUsesMeasuredD) {
  const Instance inst = gen_box_confined(2, 15, 1.0, 6);
  AlgorithmSpec alg;
  alg.kind = "bd_interp";
  AdviceSpec adv;
  adv.kind = AdviceSpec::Kind::Adversarial;
  adv.amplitude = 1.0;
  ExperimentOptions o = quick_opts();
  o.robust = "project_greedy";
  const RunReport r = run_experiment(inst, adv, alg, 0.5, o);
  EXPECT_FALSE(r.violated());
  EXPECT_LE(r.ratio_adv, 1.5 + 1e-9);
  EXPECT_GE(r.C_rob, 1.0);
  double D = 0.0;
  for (std::size_t t = 0; t < r.log.adv.size(); ++t) D = std::max(D, (r.log.adv[t] - r.log.rob[t]).norm());
  EXPECT_NEAR(r.measured_D, D, 1e-12);
  const InterpParams p = optimal_params_bdinterp(0.5, D, true);
  EXPECT_NEAR(r.bound_r, bound_bdinterp(0.5, p.gamma, p.delta, D).r, 1e-9 * r.bound_r);
}

TEST(Experiment, Deterministic) {
  const Instance inst = gen_random_quadratic_cfc(2, 10, 7);
  AlgorithmSpec alg;
  alg.kind = "switch";
  AdviceSpec adv;
  adv.kind = AdviceSpec::Kind::Adversarial;
  const RunReport a = run_experiment(inst, adv, alg, 0.5, quick_opts());
  const RunReport b = run_experiment(inst, adv, alg, 0.5, quick_opts());
  EXPECT_EQ(csv_row(a), csv_row(b));
}

namespace {

SweepSpec small_sweep() {
  SweepSpec s;
  s.master_seed = 17;
  SuiteSpec q;
  q.name = "quad";
  q.generator.kind = "quadratic";
  q.generator.dims = {1, 2};
  q.generator.horizons = {8};
  q.generator.count = 2;
  AdviceSpec noisy;
  noisy.kind = AdviceSpec::Kind::Noisy;
  noisy.sigma = 0.5;
  q.advice = {AdviceSpec{}, noisy};
  AlgorithmSpec i;
  i.epsilons = {0.5, 1.0};
  AlgorithmSpec sw;
  sw.kind = "switch";
  sw.epsilons = {1.0};
  q.algorithms = {i, sw};
  q.opt.points_1d = 2001;
  q.opt.iters = 300;
  s.suites = {q};
  return s;
}

}  // namespace

TEST(Sweep, CountAndCap) {
  SweepSpec s = small_sweep();
  EXPECT_EQ(count_runs(s), 2 * 2 * 2 * 3);
  s.max_runs = 5;
  EXPECT_THROW(run_sweep(s), InvalidArgument);
}

TEST(Sweep, DeterministicAcrossWorkers) {
  SweepSpec a = small_sweep();
  SweepSpec b = small_sweep();
  b.workers = 3;
  const SweepResult ra = run_sweep(a);
  const SweepResult rb = run_sweep(b);
  EXPECT_EQ(ra.summary.dump(), rb.summary.dump());
  ASSERT_EQ(ra.reports.size(), rb.reports.size());
  for (std::size_t i = 0; i < ra.reports.size(); ++i) EXPECT_EQ(csv_row(ra.reports[i]), csv_row(rb.reports[i]));
  EXPECT_EQ(ra.violations, 0);
  SweepSpec c = small_sweep();
  c.master_seed = 18;
  EXPECT_NE(run_sweep(c).reports[0].instance_hash, ra.reports[0].instance_hash);
}

TEST(Lemmas, SmallRunPasses) {
  const LemmaReport r = verify_lemmas({NormTag::l2(), NormTag::l1(), NormTag(3.0)}, {2, 8}, 3000, 5);
  EXPECT_TRUE(r.pass);
  EXPECT_FALSE(r.rows.empty());
  for (const auto& row : r.rows) EXPECT_LE(row.max_margin, r.tolerance) << row.name << " p=" << row.p;
  EXPECT_THROW(verify_lemmas({NormTag::l2()}, {2}, 0, 1), InvalidArgument);
}

TEST(Adversary, SmallestDimension) {
  const AdversaryReport r = adversary_demo({16}, 0.1, 1e-3);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_LE(r.rows[0].interp_ratio, std::sqrt(2.0) + 0.1 + 1e-9);
  EXPECT_GT(r.rows[0].switch_ratio, r.rows[0].interp_ratio);
  EXPECT_FALSE(r.rows[0].truncated);
  EXPECT_THROW(adversary_demo({15}, 0.1, 1e-3), InvalidArgument);
}
