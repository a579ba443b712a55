#include "cfc/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "cfc/adversary.hpp"
#include "cfc/error.hpp"
#include "cfc/rng.hpp"

namespace cfc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTol = 1e-9;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json jnum(double v) {
  if (std::isfinite(v)) return v;
  return num(v);
}

// Shortest %g form that reads back to the same double.
std::string short_num(double v) {
  char buf[40];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string p_text(NormTag n) { return n.is_inf() ? "inf" : num(n.p()); }

bool needs_rob_rescale(const std::string& kind) { return kind == "bd_interp" || kind == "switch"; }

// Robust baseline, OPT and the robust trajectory for one (instance, rescale).
struct Prepared {
  Instance inst;
  OptResult opt;
  Trajectory rob;
  double lambda = 1.0;
};

Prepared prepare(const Instance& base, const OptResult& base_opt, double lambda, const ExperimentOptions& o) {
  Prepared p;
  p.lambda = lambda;
  if (lambda == 1.0) {
    p.inst = base;
    p.opt = base_opt;
  } else {
    p.inst = rescale_instance(base, lambda);
    p.opt = base_opt;
    for (auto& x : p.opt.trajectory) x *= lambda;
    p.opt.cost = evaluate_trajectory(p.inst, p.opt.trajectory).total();
    p.opt.gap_estimate *= lambda;
  }
  auto rob = make_baseline(o.robust, o.steiner_samples, derive_seed(o.seed, 0x0b));
  p.rob = run(*rob, p.inst);
  return p;
}

std::unique_ptr<MetaAlgorithm> build_meta(const AlgorithmSpec& a, double eps, const Instance& inst, double D,
                                          std::unique_ptr<OnlineAlgorithm> adv, std::unique_ptr<OnlineAlgorithm> rob,
                                          RunReport& r) {
  const SpaceConstants sc = space_constants(inst.norm);
  if (a.kind == "interp") {
    InterpParams p = optimal_params_interp(eps, sc.mu_upper, sc.k_upper);
    if (a.gamma) p.gamma = *a.gamma;
    if (a.delta) p.delta = *a.delta;
    validate_interp_params(p);
    r.gamma = p.gamma;
    r.delta = p.delta;
    const BoundPair b = bound_interp(eps, p.gamma, p.delta, sc.mu_upper, sc.k_upper);
    r.bound_c = b.c;
    r.bound_r = b.r;
    r.per_round_consistency = true;
    return interp(std::move(adv), std::move(rob), p);
  }
  if (a.kind == "bd_interp") {
    InterpParams p = optimal_params_bdinterp(eps, D, true);
    if (a.gamma) p.gamma = *a.gamma;
    if (a.delta) p.delta = *a.delta;
    validate_interp_params(p);
    r.gamma = p.gamma;
    r.delta = p.delta;
    const BoundPair b = bound_bdinterp(eps, p.gamma, p.delta, D);
    r.bound_c = b.c;
    r.bound_r = b.r;
    r.per_round_consistency = true;
    return bd_interp(std::move(adv), std::move(rob), p);
  }
  if (a.kind == "switch") {
    const SwitchParams p = switch_params_from_epsilon(eps);
    r.gamma = std::sqrt(eps / 4.0);
    r.delta = p.delta_sw;
    const BoundPair b = bound_switch(p.b, p.delta_sw);
    r.bound_c = b.c;
    r.bound_r = b.r;
    return switch_meta(std::move(adv), std::move(rob), p.b, p.delta_sw);
  }
  if (a.kind == "nested_switch") {
    double radius = 0.0;
    const auto lam = inst.metadata.find("rescale");
    if (a.radius) radius = *a.radius * (lam == inst.metadata.end() ? 1.0 : std::stod(lam->second));
    else if (auto it = inst.metadata.find("radius"); it != inst.metadata.end()) radius = std::stod(it->second);
    else throw InvalidArgument("nested_switch: no radius given and instance has no radius metadata");
    const BoundPair b = bound_nested_switch(eps, radius, inst.dim());
    r.bound_c = b.c;
    r.bound_r = b.r;
    r.robust_reference = "opt_lower";
    return nested_switch(std::move(adv), std::move(rob), eps, radius, inst.dim());
  }
  if (a.kind == "follow_advice") {
    r.bound_c = 1.0;
    r.bound_r = kInf;
    return follow_advice(std::move(adv), std::move(rob));
  }
  throw InvalidArgument("unknown algorithm kind '" + a.kind + "'");
}

RunReport run_prepared(const Prepared& prep, const AdviceSpec& advice, const AlgorithmSpec& alg, double eps,
                       const ExperimentOptions& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const Instance& inst = prep.inst;
  RunReport r;
  r.instance_hash = instance_hash(inst);
  r.subclass = subclass_name(inst.subclass);
  r.algorithm = alg.kind;
  r.advice = advice_kind_name(advice.kind);
  r.robust = o.robust;
  r.epsilon = eps;
  r.d = inst.dim();
  r.T = inst.T();
  r.p = p_text(inst.norm);
  r.seed = o.seed;
  r.rescale = prep.lambda;

  auto adv_alg = make_advice(advice, inst, prep.opt.trajectory);
  const Trajectory adv = run(*adv_alg, inst);
  const Trajectory& rob = prep.rob;
  for (int t = 1; t <= inst.T(); ++t)
    r.measured_D = std::max(r.measured_D, distance(adv.at(t), rob.at(t), inst.norm));

  auto meta = build_meta(alg, eps, inst, r.measured_D, replay(adv.decisions, false, "advice"),
                         replay(rob.decisions, false, o.robust), r);
  const Trajectory x = run(*meta, inst);
  r.log = meta->log();

  r.c_alg = x.cumulative;
  r.c_adv = adv.cumulative;
  r.c_rob = rob.cumulative;
  r.c_opt = evaluate_trajectory(inst, prep.opt.trajectory).cumulative;
  r.C_alg = x.total();
  r.C_adv = adv.total();
  r.C_rob = rob.total();
  r.C_opt = prep.opt.cost;
  r.opt_gap = prep.opt.gap_estimate;
  r.C_opt_lo = prep.opt.lower_bound();
  r.opt_method = prep.opt.method;
  r.ratio_adv = safe_ratio(r.C_alg, r.C_adv);
  r.ratio_rob = safe_ratio(r.C_alg, r.C_rob);
  r.ratio_opt = safe_ratio(r.C_alg, r.C_opt_lo);
  r.max_infeasibility = x.max_infeasibility();

  const int T = inst.T();
  for (int t = 1; t <= T; ++t) {
    if (!r.per_round_consistency && t < T) continue;
    const double ca = r.c_adv[t - 1];
    if (r.c_alg[t - 1] > r.bound_c * ca + kTol * (1.0 + ca)) r.violated_c_round.push_back(t);
  }
  r.violated_c = !r.violated_c_round.empty();
  if (std::isfinite(r.bound_r)) {
    const double ref = r.robust_reference == "rob" ? r.C_rob : r.C_opt_lo;
    r.violated_r = r.C_alg > r.bound_r * alg.robust_slack * ref + kTol * (1.0 + ref);
  }
  for (std::size_t i = 0; i < r.log.phase.size(); ++i) {
    r.max_phase = std::max(r.max_phase, r.log.phase[i]);
    if (i > 0 && r.log.phase[i] != r.log.phase[i - 1]) ++r.phase_changes;
  }
  if (o.keep_trajectories) r.alg_trajectory = x.decisions;
  if (o.record_wall_time)
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

double rescale_for(const std::string& kind, const Prepared& base) {
  double measured = kInf;
  if (needs_rob_rescale(kind)) measured = base.rob.total();
  else if (kind == "nested_switch") measured = base.opt.lower_bound();
  if (!std::isfinite(measured)) return 1.0;
  if (measured <= 0.0) throw RuntimeFailure("rescale: measured cost is zero, cannot rescale to >= 1");
  return std::max(1.0, 1.05 / measured);
}

}  // namespace

double safe_ratio(double num, double den) {
  if (den > 0.0) return num / den;
  return num <= 1e-12 ? 1.0 : kInf;
}

OptResult solve_opt(const Instance& inst, const OptSpec& spec, std::uint64_t seed) {
  std::string m = spec.method;
  if (m == "auto") m = inst.dim() == 1 ? "grid" : "first_order";
  if (m == "grid") return opt_grid_dp(inst, std::nullopt, inst.dim() == 1 ? spec.points_1d : spec.points_2d);
  if (m == "first_order") {
    if (inst.bodies) return opt_for_ncbc(inst, spec.iters, seed);
    return opt_first_order(inst, spec.iters, seed);
  }
  throw InvalidArgument("unknown opt method '" + spec.method + "'");
}

RunReport run_experiment(const Instance& inst, const AdviceSpec& advice, const AlgorithmSpec& alg, double epsilon,
                         const ExperimentOptions& opts) {
  validate_instance(inst);
  const OptResult opt = solve_opt(inst, opts.opt, derive_seed(opts.seed, 0x0f));
  const Prepared base = prepare(inst, opt, 1.0, opts);
  const double lambda = rescale_for(alg.kind, base);
  if (lambda == 1.0) return run_prepared(base, advice, alg, epsilon, opts);
  return run_prepared(prepare(inst, opt, lambda, opts), advice, alg, epsilon, opts);
}

Json report_to_json(const RunReport& r) {
  Json j;
  j["suite"] = r.suite;
  j["run_index"] = r.run_index;
  j["instance_hash"] = r.instance_hash;
  j["subclass"] = r.subclass;
  j["algorithm"] = {{"kind", r.algorithm}, {"epsilon", r.epsilon}, {"gamma", r.gamma}, {"delta", r.delta}};
  j["advice"] = r.advice;
  j["robust"] = r.robust;
  j["d"] = r.d;
  j["T"] = r.T;
  j["p"] = r.p;
  j["series"] = {{"alg", r.c_alg}, {"adv", r.c_adv}, {"rob", r.c_rob}, {"opt", r.c_opt}};
  j["costs"] = {{"alg", r.C_alg}, {"adv", r.C_adv}, {"rob", r.C_rob}, {"opt", r.C_opt},
                {"opt_gap", r.opt_gap}, {"opt_lower", r.C_opt_lo}, {"opt_method", r.opt_method}};
  j["ratios"] = {{"adv", jnum(r.ratio_adv)}, {"rob", jnum(r.ratio_rob)}, {"opt_lower", jnum(r.ratio_opt)}};
  j["bounds"] = {{"c", jnum(r.bound_c)}, {"r", jnum(r.bound_r)}, {"robust_reference", r.robust_reference},
                 {"per_round_consistency", r.per_round_consistency}};
  j["violations"] = {{"c", r.violated_c}, {"r", r.violated_r}, {"c_rounds", r.violated_c_round}};
  j["measured_D"] = r.measured_D;
  j["rescale"] = r.rescale;
  j["seed"] = r.seed;
  j["wall_ms"] = r.wall_ms;
  j["phase_log"] = {{"phase", r.log.phase}, {"threshold", r.log.threshold}, {"potential", r.log.potential}};
  j["phase_changes"] = r.phase_changes;
  j["max_infeasibility"] = r.max_infeasibility;
  if (!r.alg_trajectory.empty()) j["trajectory"] = trajectory_to_json(r.alg_trajectory);
  return j;
}

std::string csv_header() {
  return "instance_hash,subclass,algorithm,epsilon,gamma,delta,d,T,p,C_adv,C_rob,C_opt_lo,C_alg,ratio_adv,ratio_rob,"
         "bound_c,bound_r,violated_c,violated_r,measured_D,rescale,seed,wall_ms";
}

std::string csv_row(const RunReport& r) {
  std::ostringstream os;
  os << r.instance_hash << ',' << r.subclass << ',' << r.algorithm << ',' << num(r.epsilon) << ',' << num(r.gamma)
     << ',' << num(r.delta) << ',' << r.d << ',' << r.T << ',' << r.p << ',' << num(r.C_adv) << ',' << num(r.C_rob)
     << ',' << num(r.C_opt_lo) << ',' << num(r.C_alg) << ',' << num(r.ratio_adv) << ',' << num(r.ratio_rob) << ','
     << num(r.bound_c) << ',' << num(r.bound_r) << ',' << (r.violated_c ? 1 : 0) << ',' << (r.violated_r ? 1 : 0)
     << ',' << num(r.measured_D) << ',' << num(r.rescale) << ',' << r.seed << ',' << num(r.wall_ms);
  return os.str();
}

// ---------------------------------------------------------------- sweeps

namespace {

struct InstanceJob {
  std::size_t suite;
  Instance inst;
  std::uint64_t seed;
};

std::size_t instances_per_suite(const SuiteSpec& s) {
  const GeneratorSpec& g = s.generator;
  if (g.kind == "file") return 1;
  std::size_t n = g.dims.size() * g.horizons.size() * g.norms.size() * static_cast<std::size_t>(g.count);
  if (g.kind == "alpha_polyhedral") n *= g.alphas.size();
  if (g.kind == "nested") n *= g.radii.size();
  return n;
}

std::size_t runs_per_instance(const SuiteSpec& s) {
  std::size_t n = 0;
  for (const auto& a : s.algorithms) n += a.epsilons.size();
  return n * s.advice.size();
}

NestedShape parse_shape(const std::string& s) {
  if (s == "random") return NestedShape::random;
  if (s == "balls") return NestedShape::balls;
  if (s == "boxes") return NestedShape::boxes;
  throw InvalidArgument("unknown nested shape '" + s + "'");
}

}  // namespace

long count_runs(const SweepSpec& spec) {
  long n = 0;
  for (const auto& s : spec.suites) n += static_cast<long>(instances_per_suite(s) * runs_per_instance(s));
  return n;
}

std::vector<std::pair<Instance, std::uint64_t>> suite_instances(const SuiteSpec& suite, std::uint64_t master_seed,
                                                                std::size_t first_index) {
  std::vector<std::pair<Instance, std::uint64_t>> out;
  const GeneratorSpec& g = suite.generator;
  if (g.kind == "file") {
    out.emplace_back(load_instance(g.path), derive_seed(master_seed, first_index));
    return out;
  }
  std::vector<double> extra{0.0};
  if (g.kind == "alpha_polyhedral") extra = g.alphas;
  if (g.kind == "nested") extra = g.radii;
  std::size_t idx = first_index;
  for (int d : g.dims)
    for (int T : g.horizons)
      for (double p : g.norms)
        for (double e : extra)
          for (int c = 0; c < g.count; ++c) {
            const std::uint64_t seed = derive_seed(master_seed, idx++);
            const NormTag n(p);
            Instance inst;
            if (g.kind == "quadratic") inst = gen_random_quadratic_cfc(d, T, seed, g.quad, n);
            else if (g.kind == "alpha_polyhedral") inst = gen_alpha_polyhedral(d, T, e, seed, n, g.quad);
            else if (g.kind == "nested") inst = gen_nested_bodies(d, T, e, seed, parse_shape(g.shape));
            else if (g.kind == "box_confined") inst = gen_box_confined(d, T, g.box_half_width, seed, g.quad, n);
            else if (g.kind == "phase_forcing") inst = gen_phase_forcing(d, T, g.step, seed, g.quad, n);
            else throw InvalidArgument("unknown generator kind '" + g.kind + "'");
            out.emplace_back(std::move(inst), seed);
          }
  return out;
}

SweepResult run_sweep(const SweepSpec& spec) {
  if (spec.suites.empty()) throw InvalidArgument("sweep: no suites");
  const long total = count_runs(spec);
  if (total > spec.max_runs) throw InvalidArgument("sweep: run count exceeds max_runs");

  std::vector<InstanceJob> jobs;
  std::size_t idx = 0;
  for (std::size_t s = 0; s < spec.suites.size(); ++s) {
    for (auto& [inst, seed] : suite_instances(spec.suites[s], spec.master_seed, idx)) {
      jobs.push_back({s, std::move(inst), seed});
      ++idx;
    }
  }

  std::vector<std::vector<RunReport>> results(jobs.size());
  std::vector<std::string> errors(jobs.size());
  auto work = [&](std::size_t j) {
    const InstanceJob& job = jobs[j];
    const SuiteSpec& suite = spec.suites[job.suite];
    ExperimentOptions o;
    o.robust = suite.robust;
    o.steiner_samples = suite.steiner_samples;
    o.opt = suite.opt;
    o.seed = job.seed;
    o.record_wall_time = spec.record_wall_time;
    const OptResult opt = solve_opt(job.inst, o.opt, derive_seed(job.seed, 0x0f));
    std::map<double, Prepared> cache;
    cache.emplace(1.0, prepare(job.inst, opt, 1.0, o));
    for (std::size_t a = 0; a < suite.advice.size(); ++a) {
      AdviceSpec adv = suite.advice[a];
      adv.seed = derive_seed(job.seed, 0x100 + a);
      for (const auto& alg : suite.algorithms) {
        const double lambda = rescale_for(alg.kind, cache.at(1.0));
        if (!cache.count(lambda)) cache.emplace(lambda, prepare(job.inst, opt, lambda, o));
        for (double eps : alg.epsilons) {
          RunReport r = run_prepared(cache.at(lambda), adv, alg, eps, o);
          r.suite = suite.name;
          results[j].push_back(std::move(r));
        }
      }
    }
  };

  const int workers = std::max(1, spec.workers);
  std::atomic<std::size_t> next{0};
  auto loop = [&]() {
    for (std::size_t j; (j = next.fetch_add(1)) < jobs.size();) {
      try {
        work(j);
      } catch (const std::exception& e) {
        errors[j] = e.what();
      }
    }
  };
  if (workers == 1) {
    loop();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(loop);
    for (auto& t : pool) t.join();
  }
  for (std::size_t j = 0; j < jobs.size(); ++j)
    if (!errors[j].empty())
      throw RuntimeFailure("sweep: suite '" + spec.suites[jobs[j].suite].name + "' instance " + std::to_string(j) +
                           ": " + errors[j]);

  SweepResult res;
  for (auto& v : results)
    for (auto& r : v) {
      r.run_index = res.reports.size();
      res.reports.push_back(std::move(r));
    }

  // deterministic fold in run order
  struct Agg {
    long runs = 0, violations = 0;
    double max_ratio_adv = 0.0, max_ratio_rob = 0.0, max_ratio_opt = 0.0;
    double bound_c = 0.0, bound_r = 0.0;
    double min_margin_c = kInf, min_margin_r = kInf;
    int max_phase = 0;
  };
  std::map<std::string, Agg> agg;
  std::vector<std::string> order;
  for (const auto& r : res.reports) {
    const std::string key = r.suite + "/" + r.algorithm + "/eps=" + short_num(r.epsilon);
    if (!agg.count(key)) order.push_back(key);
    Agg& a = agg[key];
    ++a.runs;
    if (r.violated()) {
      ++a.violations;
      ++res.violations;
    }
    a.max_ratio_adv = std::max(a.max_ratio_adv, r.ratio_adv);
    a.max_ratio_rob = std::max(a.max_ratio_rob, r.ratio_rob);
    a.max_ratio_opt = std::max(a.max_ratio_opt, r.ratio_opt);
    a.bound_c = std::max(a.bound_c, r.bound_c);
    a.bound_r = std::max(a.bound_r, r.bound_r);
    a.min_margin_c = std::min(a.min_margin_c, r.bound_c - r.ratio_adv);
    const double rr = r.robust_reference == "rob" ? r.ratio_rob : r.ratio_opt;
    a.min_margin_r = std::min(a.min_margin_r, r.bound_r - rr);
    a.max_phase = std::max(a.max_phase, r.max_phase);
  }
  Json groups = Json::array();
  for (const auto& key : order) {
    const Agg& a = agg[key];
    groups.push_back({{"group", key},
                      {"runs", a.runs},
                      {"violations", a.violations},
                      {"max_ratio_adv", jnum(a.max_ratio_adv)},
                      {"max_ratio_rob", jnum(a.max_ratio_rob)},
                      {"max_ratio_opt_lower", jnum(a.max_ratio_opt)},
                      {"max_bound_c", jnum(a.bound_c)},
                      {"max_bound_r", jnum(a.bound_r)},
                      {"min_margin_c", jnum(a.min_margin_c)},
                      {"min_margin_r", jnum(a.min_margin_r)},
                      {"max_phase", a.max_phase}});
  }
  res.summary = {{"name", spec.name},
                 {"master_seed", spec.master_seed},
                 {"runs", static_cast<long>(res.reports.size())},
                 {"violations", res.violations},
                 {"groups", groups}};
  return res;
}

void write_sweep_outputs(const SweepSpec& spec, const SweepResult& res) {
  namespace fs = std::filesystem;
  if (spec.output_dir.empty()) return;
  fs::create_directories(spec.output_dir);
  {
    std::ofstream csv(fs::path(spec.output_dir) / "runs.csv", std::ios::binary);
    csv << csv_header() << '\n';
    for (const auto& r : res.reports) csv << csv_row(r) << '\n';
    if (!csv) throw RuntimeFailure("cannot write runs.csv");
  }
  {
    std::ofstream s(fs::path(spec.output_dir) / "summary.json", std::ios::binary);
    s << res.summary.dump(2) << '\n';
  }
  if (spec.write_run_reports) {
    const fs::path dir = fs::path(spec.output_dir) / "runs";
    fs::create_directories(dir);
    for (const auto& r : res.reports) {
      char name[32];
      std::snprintf(name, sizeof name, "run_%06zu.json", r.run_index);
      std::ofstream f(dir / name, std::ios::binary);
      f << report_to_json(r).dump(1) << '\n';
    }
  }
}

// ---------------------------------------------------------------- adversary

AdversaryReport adversary_demo(const std::vector<int>& d_list, double eps, double delta) {
  if (d_list.empty()) throw InvalidArgument("adversary_demo: empty d list");
  if (!(eps > 0.0) || !(delta > 0.0)) throw InvalidArgument("adversary_demo: eps and delta must be > 0");
  AdversaryReport rep;
  rep.eps = eps;
  rep.delta = delta;
  const InterpParams ip = optimal_params_interp(eps, std::sqrt(2.0), 1.0);
  rep.interp_bound = std::sqrt(2.0) + eps;
  for (int d : d_list) {
    SwitchingLowerBoundParams p;
    p.d = d;
    p.delta = delta;
    p.eps_drift = eps;
    const SwitchingLowerBound lb = gen_switching_lowerbound(
        p, [] { return project_greedy(); },
        [eps](std::unique_ptr<OnlineAlgorithm> adv, std::unique_ptr<OnlineAlgorithm> rob)
            -> std::unique_ptr<OnlineAlgorithm> { return switch_from_epsilon(std::move(adv), std::move(rob), eps); });
    const Instance& inst = lb.instance;
    const Trajectory adv = evaluate_trajectory(inst, lb.advice.trajectory);
    const Trajectory sw = evaluate_trajectory(inst, lb.alg_decisions);
    auto in = interp(replay(lb.advice.trajectory), project_greedy(), ip);
    const Trajectory it = run(*in, inst);
    AdversaryRow row;
    row.d = d;
    row.T = inst.T();
    row.phase_two_case = lb.phase_two_case;
    row.truncated = lb.truncated;
    row.adv_cost = adv.total();
    row.switch_cost = sw.total();
    row.interp_cost = it.total();
    row.switch_ratio = safe_ratio(row.switch_cost, row.adv_cost);
    row.interp_ratio = safe_ratio(row.interp_cost, row.adv_cost);
    if (row.interp_ratio > rep.interp_bound + kTol) rep.interp_within = false;
    if (!rep.rows.empty() && row.switch_ratio < rep.rows.back().switch_ratio - kTol) rep.switch_nondecreasing = false;
    rep.rows.push_back(row);
  }
  rep.switch_reaches_two = rep.rows.back().switch_ratio >= 2.0;
  return rep;
}

}  // namespace cfc
