#ifndef NAVHINT_MANIFEST_HPP
#define NAVHINT_MANIFEST_HPP

#include <cstdint>
#include <map>
#include <string>

namespace navhint {

// Provenance record written next to every CLI output: what ran, with which
// seed/config, over which input bytes, producing which output bytes.
struct RunManifest {
  std::string command;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> input_digests;   // path -> fnv1a hex
  std::map<std::string, std::string> output_digests;  // path -> fnv1a hex
  double wall_seconds = 0;

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
};

std::string digest_bytes(const std::string& bytes);
std::string digest_file(const std::string& path);  // throws ValidationError

// Recompute every stored digest from disk and compare.
bool verify_manifest(const RunManifest& manifest);

}  // namespace navhint

#endif
