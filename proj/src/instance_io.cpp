#include "cfc/instance_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "cfc/error.hpp"

namespace cfc {

namespace {

constexpr int kVersion = 1;

void only_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw InvalidArgument(path + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!ok.count(it.key())) throw InvalidArgument(path + "." + it.key() + ": unknown key");
}

const Json& need(const Json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InvalidArgument(path + "." + key + ": missing");
  return *it;
}

// Infinite values are written as the strings "inf" / "-inf".
Json number_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? Json("inf") : Json("-inf");
  return Json(v);
}

double number_from_json(const Json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
  }
  throw InvalidArgument(path + ": expected a number");
}

Json norm_to_json(NormTag tag) { return tag.is_inf() ? Json("inf") : Json(tag.p()); }

NormTag norm_from_json(const Json& j, const std::string& path) {
  try {
    if (j.is_string()) return NormTag::parse(j.get<std::string>());
    if (j.is_number()) return NormTag(j.get<double>());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
  throw InvalidArgument(path + ": expected a number or \"inf\"");
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_to_json(m.row(i).transpose()));
  return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw InvalidArgument(path + ": expected a nonempty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector row = vector_from_json(j[i], path + "[" + std::to_string(i) + "]");
    if (row.size() != n) throw InvalidArgument(path + ": matrix must be square");
    m.row(i) = row.transpose();
  }
  return m;
}

Json body_to_json(const ConvexBody& body) {
  return std::visit(
      [](const auto& b) -> Json {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return {{"kind", "ball"}, {"center", vector_to_json(b.center)}, {"radius", b.radius}};
        } else if constexpr (std::is_same_v<T, Box>) {
          return {{"kind", "box"}, {"lower", vector_to_json(b.lower)}, {"upper", vector_to_json(b.upper)}};
        } else if constexpr (std::is_same_v<T, AffineSliceOfBox>) {
          Json vals = Json::array();
          for (double v : b.fixed_value) vals.push_back(v);
          return {{"kind", "affine_slice"},
                  {"fixed_index", b.fixed_index},
                  {"fixed_value", vals},
                  {"lower", vector_to_json(b.lower)},
                  {"upper", vector_to_json(b.upper)}};
        } else if constexpr (std::is_same_v<T, Hyperplane>) {
          return {{"kind", "hyperplane"}, {"normal", vector_to_json(b.normal)}, {"offset", b.offset}};
        } else {
          return {{"kind", "singleton"}, {"point", vector_to_json(b.point)}};
        }
      },
      body);
}

ConvexBody body_from_json(const Json& j, const std::string& path) {
  const auto kind = need(j, "kind", path).get<std::string>();
  ConvexBody out;
  if (kind == "ball") {
    only_keys(j, path, {"kind", "center", "radius"});
    out = Ball{vector_from_json(need(j, "center", path), path + ".center"),
               number_from_json(need(j, "radius", path), path + ".radius")};
  } else if (kind == "box") {
    only_keys(j, path, {"kind", "lower", "upper"});
    out = Box{vector_from_json(need(j, "lower", path), path + ".lower"),
              vector_from_json(need(j, "upper", path), path + ".upper")};
  } else if (kind == "affine_slice") {
    only_keys(j, path, {"kind", "fixed_index", "fixed_value", "lower", "upper"});
    AffineSliceOfBox s;
    for (const auto& v : need(j, "fixed_index", path)) s.fixed_index.push_back(v.get<int>());
    for (const auto& v : need(j, "fixed_value", path)) s.fixed_value.push_back(number_from_json(v, path + ".fixed_value"));
    s.lower = vector_from_json(need(j, "lower", path), path + ".lower");
    s.upper = vector_from_json(need(j, "upper", path), path + ".upper");
    out = s;
  } else if (kind == "hyperplane") {
    only_keys(j, path, {"kind", "normal", "offset"});
    out = Hyperplane{vector_from_json(need(j, "normal", path), path + ".normal"),
                     number_from_json(need(j, "offset", path), path + ".offset")};
  } else if (kind == "singleton") {
    only_keys(j, path, {"kind", "point"});
    out = Singleton{vector_from_json(need(j, "point", path), path + ".point")};
  } else {
    throw InvalidArgument(path + ".kind: unknown body kind '" + kind + "'");
  }
  try {
    validate_body(out);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
  return out;
}

Json cost_to_json(const CostFunction& f) {
  return std::visit(
      [](const auto& c) -> Json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Quadratic>) {
          return {{"kind", "quadratic"}, {"Q", matrix_to_json(c.Q)}, {"center", vector_to_json(c.center)},
                  {"offset", c.offset}};
        } else if constexpr (std::is_same_v<T, NormPolyhedral>) {
          return {{"kind", "norm_polyhedral"}, {"center", vector_to_json(c.center)}, {"alpha", c.alpha},
                  {"offset", c.offset}, {"norm_p", norm_to_json(c.norm)}};
        } else if constexpr (std::is_same_v<T, NormPower>) {
          return {{"kind", "norm_power"}, {"center", vector_to_json(c.center)}, {"coefficient", c.coefficient},
                  {"exponent", c.exponent}, {"norm_p", norm_to_json(c.norm)}};
        } else {
          return {{"kind", "body_distance"}, {"body", body_to_json(c.body)}, {"scale", c.scale},
                  {"norm_p", norm_to_json(c.norm)}};
        }
      },
      f);
}

CostFunction cost_from_json(const Json& j, const std::string& path) {
  const auto kind = need(j, "kind", path).get<std::string>();
  auto num = [&](const char* key) { return number_from_json(need(j, key, path), path + "." + key); };
  auto vec = [&](const char* key) { return vector_from_json(need(j, key, path), path + "." + key); };
  auto nrm = [&]() { return norm_from_json(need(j, "norm_p", path), path + ".norm_p"); };
  CostFunction out;
  if (kind == "quadratic") {
    only_keys(j, path, {"kind", "Q", "center", "offset"});
    out = Quadratic{matrix_from_json(need(j, "Q", path), path + ".Q"), vec("center"), num("offset")};
  } else if (kind == "norm_polyhedral") {
    only_keys(j, path, {"kind", "center", "alpha", "offset", "norm_p"});
    out = NormPolyhedral{vec("center"), num("alpha"), num("offset"), nrm()};
  } else if (kind == "norm_power") {
    only_keys(j, path, {"kind", "center", "coefficient", "exponent", "norm_p"});
    out = NormPower{vec("center"), num("coefficient"), num("exponent"), nrm()};
  } else if (kind == "body_distance") {
    only_keys(j, path, {"kind", "body", "scale", "norm_p"});
    out = BodyDistance{body_from_json(need(j, "body", path), path + ".body"), num("scale"), nrm()};
  } else {
    throw InvalidArgument(path + ".kind: unknown cost kind '" + kind + "'");
  }
  try {
    validate_cost(out);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
  return out;
}

}  // namespace

Json vector_to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number_to_json(v[i]));
  return a;
}

Vector vector_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) throw InvalidArgument(path + ": expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = number_from_json(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Json trajectory_to_json(const std::vector<Vector>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(vector_to_json(x));
  return a;
}

std::vector<Vector> trajectory_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) throw InvalidArgument(path + ": expected an array");
  std::vector<Vector> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(vector_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Json instance_to_json(const Instance& inst) {
  Json doc;
  doc["version"] = kVersion;
  doc["norm_p"] = norm_to_json(inst.norm);
  doc["x0"] = vector_to_json(inst.x0);
  doc["subclass"] = subclass_name(inst.subclass);
  Json costs = Json::array();
  for (const auto& f : inst.costs) costs.push_back(cost_to_json(f));
  doc["costs"] = costs;
  if (inst.bodies) {
    Json bodies = Json::array();
    for (const auto& b : *inst.bodies) bodies.push_back(body_to_json(b));
    doc["bodies"] = bodies;
  }
  doc["metadata"] = inst.metadata;
  return doc;
}

namespace {

Instance instance_from_json_impl(const Json& doc) {
  const std::string root = "instance";
  only_keys(doc, root, {"version", "norm_p", "x0", "subclass", "costs", "bodies", "metadata"});
  const auto& ver = need(doc, "version", root);
  if (!ver.is_number_integer() || ver.get<int>() != kVersion)
    throw InvalidArgument(root + ".version: unsupported version (expected 1)");
  Instance inst;
  inst.norm = norm_from_json(need(doc, "norm_p", root), root + ".norm_p");
  inst.x0 = vector_from_json(need(doc, "x0", root), root + ".x0");
  inst.subclass = parse_subclass(need(doc, "subclass", root).get<std::string>());
  const auto& costs = need(doc, "costs", root);
  if (!costs.is_array()) throw InvalidArgument(root + ".costs: expected an array");
  for (std::size_t i = 0; i < costs.size(); ++i)
    inst.costs.push_back(cost_from_json(costs[i], root + ".costs[" + std::to_string(i) + "]"));
  if (auto it = doc.find("bodies"); it != doc.end()) {
    if (!it->is_array()) throw InvalidArgument(root + ".bodies: expected an array");
    std::vector<ConvexBody> bodies;
    for (std::size_t i = 0; i < it->size(); ++i)
      bodies.push_back(body_from_json((*it)[i], root + ".bodies[" + std::to_string(i) + "]"));
    inst.bodies = std::move(bodies);
  }
  if (auto it = doc.find("metadata"); it != doc.end()) {
    if (!it->is_object()) throw InvalidArgument(root + ".metadata: expected an object");
    for (auto m = it->begin(); m != it->end(); ++m) {
      if (!m.value().is_string()) throw InvalidArgument(root + ".metadata." + m.key() + ": expected a string");
      inst.metadata[m.key()] = m.value().get<std::string>();
    }
  }
  validate_instance(inst);
  return inst;
}

}  // namespace

Instance instance_from_json(const Json& doc) {
  try {
    return instance_from_json_impl(doc);
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("instance: malformed document: ") + e.what());
  }
}

std::string serialize_instance(const Instance& inst) { return instance_to_json(inst).dump(1) + "\n"; }

Instance parse_instance(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument(std::string("instance: parse error: ") + e.what());
  }
  return instance_from_json(doc);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open instance file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write instance file '" + path + "'");
  out << serialize_instance(inst);
}

std::string content_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string instance_hash(const Instance& inst) { return content_hash(instance_to_json(inst).dump()); }

}  // namespace cfc
