#pragma once

#include <string>
#include <vector>

#include "cfc/instance.hpp"
#include "json.hpp"

namespace cfc {

using Json = nlohmann::json;

// Versioned JSON instance documents. Doubles round-trip exactly.
Json instance_to_json(const Instance& inst);
Instance instance_from_json(const Json& doc);
std::string serialize_instance(const Instance& inst);
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j, const std::string& path);
Json trajectory_to_json(const std::vector<Vector>& xs);
std::vector<Vector> trajectory_from_json(const Json& j, const std::string& path);

// 64-bit FNV-1a over the canonical serialization, as 16 hex digits.
std::string content_hash(const std::string& text);
std::string instance_hash(const Instance& inst);

}  // namespace cfc
