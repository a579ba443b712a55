#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfc/advice.hpp"
#include "cfc/instance_io.hpp"
#include "cfc/meta.hpp"
#include "cfc/offline.hpp"

namespace cfc {

struct AlgorithmSpec {
  std::string kind = "interp";  // interp, bd_interp, switch, nested_switch, follow_advice
  std::vector<double> epsilons{0.5};
  std::optional<double> gamma;  // interp / bd_interp overrides
  std::optional<double> delta;
  std::optional<double> radius;  // nested_switch r; defaults to the instance "radius" metadata
  double robust_slack = 1.0;     // multiplies bound_r (Monte-Carlo Steiner allowance)
};

struct OptSpec {
  std::string method = "auto";  // auto, grid, first_order
  int points_1d = 20001;
  int points_2d = 101;
  int iters = 1500;
};

struct ExperimentOptions {
  std::string robust = "greedy";
  long steiner_samples = 100000;
  OptSpec opt;
  std::uint64_t seed = 1;
  bool record_wall_time = false;
  bool keep_trajectories = false;
};

struct RunReport {
  std::string suite;
  std::size_t run_index = 0;
  std::string instance_hash;
  std::string subclass;
  std::string algorithm;
  std::string advice;
  std::string robust;
  double epsilon = 0.0, gamma = 0.0, delta = 0.0;
  int d = 0, T = 0;
  std::string p;
  std::vector<double> c_alg, c_adv, c_rob, c_opt;  // C(1,t)
  double C_alg = 0.0, C_adv = 0.0, C_rob = 0.0, C_opt = 0.0, opt_gap = 0.0, C_opt_lo = 0.0;
  std::string opt_method;
  double ratio_adv = 0.0, ratio_rob = 0.0, ratio_opt = 0.0;
  double bound_c = 0.0, bound_r = 0.0;
  std::string robust_reference = "rob";  // denominator of the robustness check: rob or opt_lower
  bool per_round_consistency = false;
  std::vector<int> violated_c_round;
  bool violated_c = false, violated_r = false;
  double measured_D = 0.0;
  double rescale = 1.0;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;
  int phase_changes = 0;
  int max_phase = 0;
  double max_infeasibility = 0.0;
  PhaseLog log;
  std::vector<Vector> alg_trajectory;  // only with keep_trajectories

  bool violated() const { return violated_c || violated_r; }
};

// Ratio with the 0/0 = 1 convention; x/0 = inf for x > 0.
double safe_ratio(double num, double den);

OptResult solve_opt(const Instance& inst, const OptSpec& spec, std::uint64_t seed);

// Runs advice, robust baseline, meta-algorithm and the offline oracle.
RunReport run_experiment(const Instance& inst, const AdviceSpec& advice, const AlgorithmSpec& alg, double epsilon,
                         const ExperimentOptions& opts);

Json report_to_json(const RunReport& r);
std::string csv_header();
std::string csv_row(const RunReport& r);

// ---------------------------------------------------------------- sweeps

struct GeneratorSpec {
  std::string kind = "quadratic";  // quadratic, alpha_polyhedral, nested, box_confined, phase_forcing, file
  std::vector<int> dims{1};
  std::vector<int> horizons{10};
  std::vector<double> norms{2.0};  // inf allowed
  std::vector<double> alphas{1.0};
  std::vector<double> radii{1.0};
  std::string shape = "random";
  QuadraticGenParams quad;
  double box_half_width = 1.0;  // box_confined
  double step = 0.5;            // phase_forcing
  int count = 1;
  std::string path;  // file
};

struct SuiteSpec {
  std::string name;
  GeneratorSpec generator;
  std::vector<AdviceSpec> advice;
  std::string robust = "greedy";
  long steiner_samples = 100000;
  std::vector<AlgorithmSpec> algorithms;
  OptSpec opt;
};

struct SweepSpec {
  std::string name = "sweep";
  std::uint64_t master_seed = 1;
  int workers = 1;
  long max_runs = 100000;
  std::string output_dir;
  bool record_wall_time = false;
  bool write_run_reports = true;
  std::vector<SuiteSpec> suites;
};

struct SweepResult {
  std::vector<RunReport> reports;
  Json summary;
  long violations = 0;
};

long count_runs(const SweepSpec& spec);
// Instances of one suite in enumeration order, with their seeds.
std::vector<std::pair<Instance, std::uint64_t>> suite_instances(const SuiteSpec& suite, std::uint64_t master_seed,
                                                                std::size_t first_index);
SweepResult run_sweep(const SweepSpec& spec);
// Writes runs.csv, summary.json and (optionally) one report per run.
void write_sweep_outputs(const SweepSpec& spec, const SweepResult& res);

// ---------------------------------------------------------------- lemmas

struct LemmaResult {
  std::string name;
  std::string p;
  int dim = 0;
  long samples = 0;
  double max_margin = 0.0;  // relative; <= tolerance passes
  double constant = 0.0;    // mu or k bound used, when relevant
  bool pass = true;
};

struct LemmaReport {
  std::vector<LemmaResult> rows;
  double tolerance = 1e-8;
  bool pass = true;
};

LemmaReport verify_lemmas(const std::vector<NormTag>& norms, const std::vector<int>& dims, long samples,
                          std::uint64_t seed);

// ---------------------------------------------------------------- adversary

struct AdversaryRow {
  int d = 0;
  int T = 0;
  std::string phase_two_case;
  bool truncated = false;
  double adv_cost = 0.0;
  double switch_cost = 0.0;
  double interp_cost = 0.0;
  double switch_ratio = 0.0;
  double interp_ratio = 0.0;
};

struct AdversaryReport {
  double eps = 0.0, delta = 0.0;
  double interp_bound = 0.0;
  std::vector<AdversaryRow> rows;
  bool switch_nondecreasing = true;
  bool switch_reaches_two = true;
  bool interp_within = true;
  bool pass() const { return switch_nondecreasing && switch_reaches_two && interp_within; }
};

AdversaryReport adversary_demo(const std::vector<int>& d_list, double eps, double delta);

}  // namespace cfc
