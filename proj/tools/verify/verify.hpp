#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace ffmop::verify {

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool below = true;  // pass iff value < threshold (or > threshold when false)
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string group;
  std::string title;
  bool pass = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::vector<Check> checks;
  std::string error;  // set when the criterion threw

  // Worst check relative to its threshold.
  const Check* worst() const;
  std::string line() const;  // one-line PASS/FAIL summary
};

struct Options {
  std::vector<std::string> only;  // group names or criterion numbers; empty runs all
  bool inject_broken_weight = false;
  std::uint64_t seed = 20261014;
  long long mc_samples = 200000;
  long long ks_samples = 100000;
  int threads = 1;
};

// Group name of each criterion, in criterion order.
const std::vector<std::string>& group_names();
bool selected(const Options& opt, int id);
// Throws std::invalid_argument for unknown names in opt.only.
void check_selection(const Options& opt);

CriterionResult run_criterion(int id, const Options& opt);
std::vector<CriterionResult> run(const Options& opt);

nlohmann::json to_json(const CriterionResult& r);
nlohmann::json to_json(const std::vector<CriterionResult>& rs);

}  // namespace ffmop::verify
