#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "mcover/core.hpp"
#include "mcover/generators.hpp"

namespace mcover {

// {"m": int, "sizes": [number, ...]}
nlohmann::json instance_to_json(const Instance& instance);
Instance instance_from_json(const nlohmann::json& j, bool log_domain = false);

struct InstanceMeta {
  std::optional<double> known_opt;
  std::string family;
  nlohmann::json params = nlohmann::json::object();
  bool log_domain = false;
};

nlohmann::json meta_to_json(const InstanceMeta& meta);
InstanceMeta meta_from_json(const nlohmann::json& j);
InstanceMeta meta_of(const GeneratedInstance& generated);

// Sidecar path for an instance file: "<path>.meta.json".
std::string meta_path(const std::string& instance_path);

struct LoadedInstance {
  Instance instance;
  std::optional<InstanceMeta> meta;
};

// Writes the instance file and its sidecar. Throws std::runtime_error on I/O failure.
void write_instance(const std::string& path, const GeneratedInstance& generated);
// Reads an instance file, honoring the sidecar's log_domain flag when present.
LoadedInstance read_instance(const std::string& path);

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace mcover
