#include "run_record.hpp"

#include <cstdio>

namespace ffmop::cli {

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string RunRecord::digest() const {
  // nlohmann::json objects keep keys sorted, so the dump is canonical.
  const nlohmann::json canon = {{"command", command}, {"config", config}};
  return fnv1a_hex(canon.dump());
}

nlohmann::json RunRecord::to_json() const {
  nlohmann::json j = {{"command", command},       {"config", config},   {"digest", digest()},
                      {"outputs", outputs},       {"version", version}, {"wall_time_ms", wall_time_ms}};
  j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
  return j;
}

}  // namespace ffmop::cli
