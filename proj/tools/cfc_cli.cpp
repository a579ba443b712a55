// cfc: command-line front end for runs, sweeps, the lemma suite, the
// switching adversary and the offline oracle.
//
// Exit codes: 0 ok, 1 bound violation or failed check, 2 bad input.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "cfc/config.hpp"
#include "cfc/error.hpp"
#include "cfc/harness.hpp"
#include "cfc/instance_io.hpp"
#include "cfc/kernels.hpp"
#include "cfc/offline.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kBadInput = 2;

struct SweepFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> workers;
  bool dry_run = false;
};

cfc::SweepSpec load_with_overrides(const SweepFlags& f) {
  cfc::SweepSpec spec = cfc::load_sweep_config(f.config);
  if (f.seed) spec.master_seed = *f.seed;
  if (!f.out.empty()) spec.output_dir = f.out;
  if (f.workers) {
    if (*f.workers < 1) throw cfc::InvalidArgument("--workers must be >= 1");
    spec.workers = *f.workers;
  }
  return spec;
}

void print_summary(const cfc::SweepResult& res) {
  std::cout << "runs " << res.reports.size() << ", violations " << res.violations << "\n";
  for (const auto& g : res.summary["groups"]) {
    std::cout << "  " << g["group"].get<std::string>() << ": runs " << g["runs"] << ", max ratio adv "
              << g["max_ratio_adv"].dump() << " (bound " << g["max_bound_c"].dump() << "), max ratio rob "
              << g["max_ratio_rob"].dump() << ", violations " << g["violations"] << "\n";
  }
}

int cmd_sweep(const SweepFlags& f, bool single) {
  cfc::SweepSpec spec;
  long n = 0;
  try {
    spec = load_with_overrides(f);
    n = cfc::count_runs(spec);
    if (n > spec.max_runs) {
      std::cerr << "error: " << n << " runs exceed max_runs " << spec.max_runs << "\n";
      return kBadInput;
    }
    if (single && n != 1) {
      std::cerr << "error: run expects a config with exactly one grid point (" << n << " given); use sweep\n";
      return kBadInput;
    }
  } catch (const cfc::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kBadInput;
  }
  if (f.dry_run) {
    std::cout << "runs " << n << "\n";
    return kOk;
  }
  cfc::SweepResult res;
  try {
    res = cfc::run_sweep(spec);
  } catch (const cfc::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kBadInput;
  }
  cfc::write_sweep_outputs(spec, res);
  if (single) {
    std::cout << cfc::csv_header() << "\n" << cfc::csv_row(res.reports.front()) << "\n";
  } else {
    print_summary(res);
  }
  return res.violations > 0 ? kViolation : kOk;
}

std::vector<cfc::NormTag> parse_norms(const std::vector<std::string>& items) {
  std::vector<cfc::NormTag> out;
  for (const auto& s : items) out.push_back(cfc::NormTag::parse(s));
  return out;
}

int cmd_lemmas(const std::vector<std::string>& ps, const std::vector<int>& dims, long samples, std::uint64_t seed) {
  if (samples < 1) {
    std::cerr << "error: --samples must be >= 1\n";
    return kBadInput;
  }
  std::vector<cfc::NormTag> norms;
  try {
    norms = parse_norms(ps);
  } catch (const cfc::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  for (int d : dims)
    if (d < 1) {
      std::cerr << "error: --dim entries must be >= 1\n";
      return kBadInput;
    }
  const cfc::LemmaReport rep = cfc::verify_lemmas(norms, dims, samples, seed);
  std::printf("%-18s %-5s %4s %9s %14s %10s %s\n", "check", "p", "dim", "samples", "max_margin", "constant", "pass");
  for (const auto& r : rep.rows)
    std::printf("%-18s %-5s %4d %9ld %14.6e %10.6f %s\n", r.name.c_str(), r.p.c_str(), r.dim, r.samples, r.max_margin,
                r.constant, r.pass ? "yes" : "NO");
  std::printf("tolerance %.1e: %s\n", rep.tolerance, rep.pass ? "all pass" : "FAILURES");
  return rep.pass ? kOk : kViolation;
}

int cmd_adversary(const std::vector<int>& ds, double eps, double delta, const std::string& out) {
  for (int d : ds) {
    const int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d))));
    if (d < 9 || s * s != d) {
      std::cerr << "error: --d entries need an integer square root and d >= 9 (got " << d << ")\n";
      return kBadInput;
    }
  }
  if (!(eps > 0.0) || !(delta > 0.0)) {
    std::cerr << "error: --eps and --delta must be > 0\n";
    return kBadInput;
  }
  const cfc::AdversaryReport rep = cfc::adversary_demo(ds, eps, delta);
  std::ostringstream csv;
  csv << "d,T,case,adv_cost,switch_cost,interp_cost,switch_ratio,interp_ratio,interp_bound\n";
  csv.precision(17);
  for (const auto& r : rep.rows)
    csv << r.d << ',' << r.T << ',' << r.phase_two_case << ',' << r.adv_cost << ',' << r.switch_cost << ','
        << r.interp_cost << ',' << r.switch_ratio << ',' << r.interp_ratio << ',' << rep.interp_bound << "\n";
  std::cout << csv.str();
  if (!out.empty()) {
    std::filesystem::create_directories(out);
    std::ofstream(std::filesystem::path(out) / "adversary.csv") << csv.str();
    std::ofstream plot(std::filesystem::path(out) / "adversary_plot.dat");
    plot << "# d switch interp\n";
    plot.precision(17);
    for (const auto& r : rep.rows) plot << r.d << ' ' << r.switch_ratio << ' ' << r.interp_ratio << "\n";
  }
  std::cout << "switch nondecreasing: " << (rep.switch_nondecreasing ? "yes" : "no")
            << ", switch >= 2 at largest d: " << (rep.switch_reaches_two ? "yes" : "no")
            << ", interp within sqrt(2)+eps: " << (rep.interp_within ? "yes" : "no") << "\n";
  return rep.pass() ? kOk : kViolation;
}

int cmd_opt(const std::string& file, const std::string& method, int points, int iters, std::uint64_t seed,
            const std::string& out) {
  cfc::Instance inst;
  try {
    inst = cfc::load_instance(file);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  cfc::OptResult r;
  try {
    if (method == "grid") {
      if (inst.dim() > 2) {
        std::cerr << "error: grid method supports dimensions 1 and 2 only\n";
        return kBadInput;
      }
      r = cfc::opt_grid_dp(inst, std::nullopt, points > 0 ? points : (inst.dim() == 1 ? 4001 : 101));
    } else if (method == "first_order") {
      r = inst.bodies ? cfc::opt_for_ncbc(inst, iters, seed) : cfc::opt_first_order(inst, iters, seed);
    } else {
      cfc::OptSpec spec;
      if (points > 0) spec.points_1d = spec.points_2d = points;
      spec.iters = iters;
      r = cfc::solve_opt(inst, spec, seed);
    }
  } catch (const cfc::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  std::printf("method %s\ncost %.17g\ngap %.17g\nlower_bound %.17g\n", r.method.c_str(), r.cost, r.gap_estimate,
              r.lower_bound());
  const cfc::Json traj = cfc::trajectory_to_json(r.trajectory);
  if (out.empty()) {
    std::cout << "trajectory " << traj.dump() << "\n";
  } else {
    std::ofstream(out) << cfc::Json{{"method", r.method},
                                    {"cost", r.cost},
                                    {"gap_estimate", r.gap_estimate},
                                    {"trajectory", traj}}
                              .dump(1)
                       << "\n";
    std::cout << "trajectory written to " << out << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex function chasing with advice: runs, sweeps, lemma checks, adversary demo, offline optimum"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("cfc 1.0 (kernels: ") + cfc::kernels::isa_name(cfc::kernels::active_isa()) + ")");

  SweepFlags run_f, sweep_f;
  auto add_common = [](CLI::App* sub, SweepFlags& f) {
    sub->add_option("--config", f.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", f.seed, "override the master seed");
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--workers", f.workers, "worker threads");
  };
  CLI::App* run = app.add_subcommand("run", "run a single-experiment config");
  add_common(run, run_f);
  CLI::App* sweep = app.add_subcommand("sweep", "run every grid point of a config");
  add_common(sweep, sweep_f);
  sweep->add_flag("--dry-run", sweep_f.dry_run, "print the run count and exit");

  std::vector<std::string> ps{"1", "1.5", "2", "3", "inf"};
  std::vector<int> dims{2, 8, 16};
  long samples = 100000;
  std::uint64_t lemma_seed = 1;
  CLI::App* lem = app.add_subcommand("verify-lemmas", "sample the geometric lemma suite");
  lem->add_option("--p", ps, "norms, e.g. 1,1.5,2,3,inf")->delimiter(',');
  lem->add_option("--dim", dims, "dimensions")->delimiter(',');
  lem->add_option("--samples", samples, "samples per lemma");
  lem->add_option("--seed", lemma_seed, "seed");

  std::vector<int> ds{16, 64, 256};
  double eps = 0.1, delta = 1e-3;
  std::string adv_out;
  CLI::App* adv = app.add_subcommand("adversary", "switching lower-bound construction: Switch vs Interp");
  adv->add_option("--d", ds, "dimensions with integer square roots")->delimiter(',');
  adv->add_option("--eps", eps, "Switch/Interp epsilon and advice drift step");
  adv->add_option("--delta", delta, "stationarity tolerance");
  adv->add_option("--out", adv_out, "directory for adversary.csv and adversary_plot.dat");

  std::string inst_file, method = "auto", opt_out;
  int points = 0, iters = 3000;
  std::uint64_t opt_seed = 1;
  CLI::App* opt = app.add_subcommand("opt", "offline optimum of an instance file");
  opt->add_option("instance", inst_file, "instance file")->required();
  opt->add_option("--method", method, "auto, grid or first_order")
      ->check(CLI::IsMember({"auto", "grid", "first_order"}));
  opt->add_option("--points", points, "grid points per dimension");
  opt->add_option("--iters", iters, "first-order iterations")->check(CLI::PositiveNumber);
  opt->add_option("--seed", opt_seed, "seed");
  opt->add_option("--out", opt_out, "write the result as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*run) return cmd_sweep(run_f, true);
    if (*sweep) return cmd_sweep(sweep_f, false);
    if (*lem) return cmd_lemmas(ps, dims, samples, lemma_seed);
    if (*adv) return cmd_adversary(ds, eps, delta, adv_out);
    if (*opt) return cmd_opt(inst_file, method, points, iters, opt_seed, opt_out);
  } catch (const cfc::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 3;
  }
  return kOk;
}
