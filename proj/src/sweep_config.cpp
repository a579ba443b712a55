#include <fstream>
#include <set>
#include <sstream>

#include "cfc/config.hpp"
#include "cfc/error.hpp"

namespace cfc {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw InvalidArgument(path + ": " + msg); }

void allow_keys(const Json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(path, "expected an object");
  std::set<std::string> ok(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) fail(path + "." + it.key(), "unknown key");
}

double get_num(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

long get_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long>();
}

std::string get_str(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

bool get_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

double get_norm(const Json& j, const std::string& path) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    fail(path, "norm must be a number >= 1 or \"inf\"");
  }
  const double p = get_num(j, path);
  if (!(p >= 1.0)) fail(path, "norm must be >= 1");
  return p;
}

template <class T, class F>
std::vector<T> get_list(const Json& j, const std::string& path, F item) {
  std::vector<T> out;
  if (!j.is_array()) {
    out.push_back(item(j, path));  // a scalar is a one-point grid
    return out;
  }
  if (j.empty()) fail(path, "grid must be nonempty");
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(item(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<int> positive_ints(const Json& j, const std::string& path) {
  return get_list<int>(j, path, [](const Json& v, const std::string& p) {
    const long x = get_int(v, p);
    if (x < 1) fail(p, "must be >= 1");
    return static_cast<int>(x);
  });
}

std::vector<double> positive_nums(const Json& j, const std::string& path) {
  return get_list<double>(j, path, [](const Json& v, const std::string& p) {
    const double x = get_num(v, p);
    if (!(x > 0.0) || !std::isfinite(x)) fail(p, "must be > 0");
    return x;
  });
}

GeneratorSpec parse_generator(const Json& j, const std::string& path) {
  allow_keys(j, path,
             {"kind", "dims", "horizons", "norms", "alphas", "radii", "shape", "count", "box_half_width", "step",
              "path", "quadratic"});
  GeneratorSpec g;
  if (!j.contains("kind")) fail(path + ".kind", "missing");
  g.kind = get_str(j["kind"], path + ".kind");
  static const std::set<std::string> kinds{"quadratic", "alpha_polyhedral", "nested", "box_confined", "phase_forcing",
                                           "file"};
  if (!kinds.count(g.kind)) fail(path + ".kind", "unknown generator '" + g.kind + "'");
  if (j.contains("dims")) g.dims = positive_ints(j["dims"], path + ".dims");
  if (j.contains("horizons")) g.horizons = positive_ints(j["horizons"], path + ".horizons");
  if (j.contains("norms")) g.norms = get_list<double>(j["norms"], path + ".norms", get_norm);
  if (j.contains("alphas")) g.alphas = positive_nums(j["alphas"], path + ".alphas");
  if (j.contains("radii")) g.radii = positive_nums(j["radii"], path + ".radii");
  if (j.contains("shape")) {
    g.shape = get_str(j["shape"], path + ".shape");
    if (g.shape != "random" && g.shape != "balls" && g.shape != "boxes") fail(path + ".shape", "unknown shape");
  }
  if (j.contains("count")) {
    const long c = get_int(j["count"], path + ".count");
    if (c < 1) fail(path + ".count", "must be >= 1");
    g.count = static_cast<int>(c);
  }
  if (j.contains("box_half_width")) {
    g.box_half_width = get_num(j["box_half_width"], path + ".box_half_width");
    if (!(g.box_half_width > 0.0)) fail(path + ".box_half_width", "must be > 0");
  }
  if (j.contains("step")) {
    g.step = get_num(j["step"], path + ".step");
    if (!(g.step > 0.0)) fail(path + ".step", "must be > 0");
  }
  if (j.contains("path")) g.path = get_str(j["path"], path + ".path");
  if (g.kind == "file" && g.path.empty()) fail(path + ".path", "required for file generator");
  if (j.contains("quadratic")) {
    const Json& q = j["quadratic"];
    const std::string qp = path + ".quadratic";
    allow_keys(q, qp, {"eig_lo", "eig_hi", "center_lo", "center_hi", "offset_hi", "jump_prob"});
    if (q.contains("eig_lo")) g.quad.eig_lo = get_num(q["eig_lo"], qp + ".eig_lo");
    if (q.contains("eig_hi")) g.quad.eig_hi = get_num(q["eig_hi"], qp + ".eig_hi");
    if (q.contains("center_lo")) g.quad.center_lo = get_num(q["center_lo"], qp + ".center_lo");
    if (q.contains("center_hi")) g.quad.center_hi = get_num(q["center_hi"], qp + ".center_hi");
    if (q.contains("offset_hi")) g.quad.offset_hi = get_num(q["offset_hi"], qp + ".offset_hi");
    if (q.contains("jump_prob")) g.quad.jump_prob = get_num(q["jump_prob"], qp + ".jump_prob");
    if (!(g.quad.eig_lo >= 0.0 && g.quad.eig_lo <= g.quad.eig_hi)) fail(qp, "need 0 <= eig_lo <= eig_hi");
    if (!(g.quad.center_lo <= g.quad.center_hi)) fail(qp, "need center_lo <= center_hi");
    if (!(g.quad.offset_hi >= 0.0)) fail(qp + ".offset_hi", "must be >= 0");
    if (!(g.quad.jump_prob >= 0.0 && g.quad.jump_prob <= 1.0)) fail(qp + ".jump_prob", "must be in [0, 1]");
  }
  return g;
}

AdviceSpec parse_advice(const Json& j, const std::string& path) {
  allow_keys(j, path, {"kind", "sigma", "point", "amplitude"});
  AdviceSpec a;
  if (!j.contains("kind")) fail(path + ".kind", "missing");
  try {
    a.kind = parse_advice_kind(get_str(j["kind"], path + ".kind"));
  } catch (const InvalidArgument& e) {
    fail(path + ".kind", e.what());
  }
  if (a.kind == AdviceSpec::Kind::Replay) fail(path + ".kind", "replay advice is not available in configs");
  if (j.contains("sigma")) {
    a.sigma = get_num(j["sigma"], path + ".sigma");
    if (!(a.sigma >= 0.0)) fail(path + ".sigma", "must be >= 0");
  }
  if (j.contains("amplitude")) {
    a.amplitude = get_num(j["amplitude"], path + ".amplitude");
    if (!(a.amplitude > 0.0)) fail(path + ".amplitude", "must be > 0");
  }
  if (j.contains("point")) {
    const Json& p = j["point"];
    if (!p.is_array() || p.empty()) fail(path + ".point", "expected a nonempty array");
    a.point.resize(static_cast<Eigen::Index>(p.size()));
    for (std::size_t i = 0; i < p.size(); ++i)
      a.point[static_cast<Eigen::Index>(i)] = get_num(p[i], path + ".point[" + std::to_string(i) + "]");
  }
  return a;
}

AlgorithmSpec parse_algorithm(const Json& j, const std::string& path) {
  allow_keys(j, path, {"kind", "epsilons", "gamma", "delta", "radius", "robust_slack"});
  AlgorithmSpec a;
  if (!j.contains("kind")) fail(path + ".kind", "missing");
  a.kind = get_str(j["kind"], path + ".kind");
  static const std::set<std::string> kinds{"interp", "bd_interp", "switch", "nested_switch", "follow_advice"};
  if (!kinds.count(a.kind)) fail(path + ".kind", "unknown algorithm '" + a.kind + "'");
  if (j.contains("epsilons")) a.epsilons = positive_nums(j["epsilons"], path + ".epsilons");
  auto pos = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key)) return std::nullopt;
    const double v = get_num(j[key], path + "." + key);
    if (!(v > 0.0)) fail(path + "." + key, "must be > 0");
    return v;
  };
  a.gamma = pos("gamma");
  a.delta = pos("delta");
  a.radius = pos("radius");
  if (auto s = pos("robust_slack")) a.robust_slack = *s;
  if (a.robust_slack < 1.0) fail(path + ".robust_slack", "must be >= 1");
  if (a.gamma.has_value() != a.delta.has_value()) fail(path, "gamma and delta must be given together");
  if (a.gamma) {
    for (double e : a.epsilons)
      if (std::fabs(2.0 * *a.gamma + 2.0 * *a.delta - e) > 1e-12)
        fail(path, "gamma and delta must satisfy 2 gamma + 2 delta = epsilon");
  }
  return a;
}

OptSpec parse_opt(const Json& j, const std::string& path) {
  allow_keys(j, path, {"method", "points_1d", "points_2d", "iters"});
  OptSpec o;
  if (j.contains("method")) {
    o.method = get_str(j["method"], path + ".method");
    if (o.method != "auto" && o.method != "grid" && o.method != "first_order") fail(path + ".method", "unknown method");
  }
  auto at_least = [&](const char* key, long lo, int& dst) {
    if (!j.contains(key)) return;
    const long v = get_int(j[key], path + "." + key);
    if (v < lo) fail(path + "." + key, "must be >= " + std::to_string(lo));
    dst = static_cast<int>(v);
  };
  at_least("points_1d", 3, o.points_1d);
  at_least("points_2d", 3, o.points_2d);
  at_least("iters", 1, o.iters);
  return o;
}

SuiteSpec parse_suite(const Json& j, const std::string& path) {
  allow_keys(j, path, {"name", "generator", "advice", "robust", "steiner_samples", "algorithms", "opt"});
  SuiteSpec s;
  s.name = j.contains("name") ? get_str(j["name"], path + ".name") : path;
  if (!j.contains("generator")) fail(path + ".generator", "missing");
  s.generator = parse_generator(j["generator"], path + ".generator");
  if (!j.contains("advice")) fail(path + ".advice", "missing");
  s.advice = get_list<AdviceSpec>(j["advice"], path + ".advice", parse_advice);
  if (j.contains("robust")) {
    s.robust = get_str(j["robust"], path + ".robust");
    static const std::set<std::string> names{"stay_put", "greedy", "project_greedy", "steiner"};
    if (!names.count(s.robust)) fail(path + ".robust", "unknown robust baseline '" + s.robust + "'");
  }
  if (j.contains("steiner_samples")) {
    s.steiner_samples = get_int(j["steiner_samples"], path + ".steiner_samples");
    if (s.steiner_samples < 1) fail(path + ".steiner_samples", "must be >= 1");
  }
  if (!j.contains("algorithms")) fail(path + ".algorithms", "missing");
  s.algorithms = get_list<AlgorithmSpec>(j["algorithms"], path + ".algorithms", parse_algorithm);
  if (j.contains("opt")) s.opt = parse_opt(j["opt"], path + ".opt");
  return s;
}

}  // namespace

SweepSpec parse_sweep_config(const Json& doc) {
  allow_keys(doc, "config",
             {"name", "master_seed", "workers", "max_runs", "output_dir", "record_wall_time", "write_run_reports",
              "suites"});
  SweepSpec s;
  if (doc.contains("name")) s.name = get_str(doc["name"], "config.name");
  if (doc.contains("master_seed")) {
    if (!doc["master_seed"].is_number_unsigned()) fail("config.master_seed", "expected a nonnegative integer");
    s.master_seed = doc["master_seed"].get<std::uint64_t>();
  }
  if (doc.contains("workers")) {
    const long w = get_int(doc["workers"], "config.workers");
    if (w < 1) fail("config.workers", "must be >= 1");
    s.workers = static_cast<int>(w);
  }
  if (doc.contains("max_runs")) {
    s.max_runs = get_int(doc["max_runs"], "config.max_runs");
    if (s.max_runs < 1) fail("config.max_runs", "must be >= 1");
  }
  if (doc.contains("output_dir")) s.output_dir = get_str(doc["output_dir"], "config.output_dir");
  if (doc.contains("record_wall_time")) s.record_wall_time = get_bool(doc["record_wall_time"], "config.record_wall_time");
  if (doc.contains("write_run_reports"))
    s.write_run_reports = get_bool(doc["write_run_reports"], "config.write_run_reports");
  if (!doc.contains("suites")) fail("config.suites", "missing");
  const Json& suites = doc["suites"];
  if (!suites.is_array() || suites.empty()) fail("config.suites", "expected a nonempty array");
  for (std::size_t i = 0; i < suites.size(); ++i)
    s.suites.push_back(parse_suite(suites[i], "config.suites[" + std::to_string(i) + "]"));
  return s;
}

SweepSpec load_sweep_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument(path + ": cannot open config");
  std::stringstream ss;
  ss << in.rdbuf();
  Json doc;
  try {
    doc = Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
  return parse_sweep_config(doc);
}

}  // namespace cfc
