#include "mcover/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mcover {

nlohmann::json instance_to_json(const Instance& instance) {
  return {{"m", instance.m}, {"sizes", instance.sizes}};
}

Instance instance_from_json(const nlohmann::json& j, bool log_domain) {
  if (!j.is_object() || !j.contains("m") || !j.contains("sizes")) {
    throw std::invalid_argument("instance JSON needs \"m\" and \"sizes\"");
  }
  if (!j.at("m").is_number_integer()) throw std::invalid_argument("\"m\" must be an integer");
  if (!j.at("sizes").is_array()) throw std::invalid_argument("\"sizes\" must be an array");
  std::vector<double> sizes;
  sizes.reserve(j.at("sizes").size());
  for (const auto& s : j.at("sizes")) {
    if (!s.is_number()) throw std::invalid_argument("sizes must be numbers");
    sizes.push_back(s.get<double>());
  }
  return make_instance(j.at("m").get<int>(), std::move(sizes), log_domain);
}

nlohmann::json meta_to_json(const InstanceMeta& meta) {
  nlohmann::json j;
  j["known_opt"] = meta.known_opt ? nlohmann::json(*meta.known_opt) : nlohmann::json(nullptr);
  j["family"] = meta.family;
  j["params"] = meta.params;
  j["log_domain"] = meta.log_domain;
  return j;
}

InstanceMeta meta_from_json(const nlohmann::json& j) {
  InstanceMeta meta;
  if (j.contains("known_opt") && !j.at("known_opt").is_null()) meta.known_opt = j.at("known_opt").get<double>();
  meta.family = j.value("family", std::string());
  if (j.contains("params")) meta.params = j.at("params");
  meta.log_domain = j.value("log_domain", false);
  return meta;
}

InstanceMeta meta_of(const GeneratedInstance& generated) {
  InstanceMeta meta;
  meta.known_opt = generated.known_opt;
  meta.family = to_string(generated.family);
  meta.params = generated.params;
  meta.log_domain = generated.instance.log_domain;
  return meta;
}

std::string meta_path(const std::string& instance_path) { return instance_path + ".meta.json"; }

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_instance(const std::string& path, const GeneratedInstance& generated) {
  write_text_file(path, instance_to_json(generated.instance).dump() + "\n");
  write_text_file(meta_path(path), meta_to_json(meta_of(generated)).dump(2) + "\n");
}

LoadedInstance read_instance(const std::string& path) {
  const nlohmann::json j = read_json_file(path);
  LoadedInstance loaded;
  if (std::filesystem::exists(meta_path(path))) loaded.meta = meta_from_json(read_json_file(meta_path(path)));
  loaded.instance = instance_from_json(j, loaded.meta && loaded.meta->log_domain);
  return loaded;
}

}  // namespace mcover
