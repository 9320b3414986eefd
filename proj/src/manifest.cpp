#include "navhint/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "navhint/rng.hpp"
#include "navhint/world.hpp"

namespace navhint {

std::string digest_bytes(const std::string& bytes) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(
                    fnv1a(bytes.data(), bytes.size())));
  return buf;
}

std::string digest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("manifest: cannot open " + path);
  std::ostringstream bytes;
  bytes << in.rdbuf();
  return digest_bytes(bytes.str());
}

using nlohmann::json;

std::string RunManifest::to_json() const {
  json j{{"schema_version", 1},
         {"command", command},
         {"config_digest", config_digest},
         {"seed", seed},
         {"input_digests", input_digests},
         {"output_digests", output_digests},
         {"wall_seconds", wall_seconds}};
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.at("schema_version").get<int>() != 1)
    throw ValidationError("manifest: unknown schema version");
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.config_digest = j.at("config_digest").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.input_digests = j.at("input_digests").get<std::map<std::string, std::string>>();
  m.output_digests =
      j.at("output_digests").get<std::map<std::string, std::string>>();
  m.wall_seconds = j.at("wall_seconds").get<double>();
  return m;
}

bool verify_manifest(const RunManifest& manifest) {
  for (const auto* digests : {&manifest.input_digests, &manifest.output_digests})
    for (const auto& [path, digest] : *digests)
      if (digest_file(path) != digest) return false;
  return true;
}

}  // namespace navhint
