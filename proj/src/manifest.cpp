#include "exlab/manifest.hpp"

#include <ctime>
#include <fstream>
#include <stdexcept>

#include "exlab/rng.hpp"
#include "exlab/version.hpp"

namespace exlab {

nlohmann::json make_manifest(const std::string& command,
                             const std::vector<std::string>& argv) {
  nlohmann::json doc;
  doc["command"] = command;
  doc["argv"] = argv;
  doc["version"] = kVersion;
  doc["generator"] = kGeneratorId;
  doc["timestamp_utc"] = utc_timestamp();
  doc["derived"] = nlohmann::json::object();
  return doc;
}

nlohmann::json make_manifest(const std::string& command,
                             const std::vector<std::string>& argv,
                             const ModelParams& params) {
  nlohmann::json doc = make_manifest(command, argv);
  nlohmann::json p;
  p["mu"] = params.mu;
  p["nu"] = params.nu;
  if (params.n_agents) p["agents"] = *params.n_agents;
  p["rate"] = params.rate.name();
  doc["params"] = p;
  return doc;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_json(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace exlab
