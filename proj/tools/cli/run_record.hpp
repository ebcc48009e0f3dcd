#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

namespace ffmop::cli {

struct RunRecord {
  std::string command;
  nlohmann::json config = nlohmann::json::object();  // parsed arguments
  std::optional<std::uint64_t> seed;
  nlohmann::json outputs = nlohmann::json::object();
  long long wall_time_ms = 0;
  std::string version;

  // FNV-1a 64 of the canonical (sorted-key) dump of {command, config}.
  std::string digest() const;
  nlohmann::json to_json() const;
};

std::string fnv1a_hex(const std::string& bytes);

}  // namespace ffmop::cli
