#include <cstdio>
#include <cstring>
#include <string>

#include "verify.hpp"

// Runs the acceptance criteria and prints one PASS/FAIL line each.
// Optional arguments select criteria by number or group name.
int main(int argc, char** argv) {
  ffmop::verify::Options opt;
  for (int i = 1; i < argc; ++i) opt.only.emplace_back(argv[i]);
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  bool all = true;
  int count = 0;
  try {
    for (int id = 1; id <= 10; ++id) {
      if (!ffmop::verify::selected(opt, id)) continue;
      const auto r = ffmop::verify::run_criterion(id, opt);
      std::printf("%s\n", r.line().c_str());
      if (!r.pass)
        for (const auto& c : r.checks)
          if (!c.pass)
            std::printf("      failed check: %s = %.6g (%s %.3g)\n", c.name.c_str(), c.value, c.below ? "<" : ">",
                        c.threshold);
      all = all && r.pass;
      ++count;
    }
  } catch (const std::exception& e) {
    std::printf("FAIL  acceptance driver error: %s\n", e.what());
    return 1;
  }
  if (count == 0) {
    std::printf("FAIL  no criteria selected\n");
    return 1;
  }
  std::printf("%s  %d criteria\n", all ? "ALL PASS" : "SOME FAILED", count);
  return all ? 0 : 1;
}
