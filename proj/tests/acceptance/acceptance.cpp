// Acceptance driver: runs the numbered criteria and prints one PASS/FAIL
// line per criterion followed by its indented details.
//
//   acceptance                 all twelve
//   acceptance --criterion 8   just one (repeatable, or comma separated)

#include "schwarziso/verify.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <set>
#include <sstream>
#include <string>

using namespace schwarziso;

int main(int argc, char** argv) {
  std::set<int> ids;
  VerifyOptions opt;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if ((a == "--criterion" || a == "-n") && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string tok; std::getline(ss, tok, ',');) ids.insert(std::atoi(tok.c_str()));
    } else if (a == "--threads" && i + 1 < argc) {
      opt.threads = static_cast<unsigned>(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N[,N...]] [--threads T]\n", argv[0]);
      return 2;
    }
  }
  if (ids.empty())
    for (int k = 1; k <= kCriterionCount; ++k) ids.insert(k);

  int failed = 0;
  for (int id : ids) {
    if (id < 1 || id > kCriterionCount) {
      std::fprintf(stderr, "no criterion %d\n", id);
      return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = run_criterion(id, opt);
    } catch (const std::exception& e) {
      r = {id, "criterion " + std::to_string(id), false, {std::string("exception: ") + e.what()}};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %2d: %s (%.1f s)\n", r.passed ? "PASS" : "FAIL", id, r.title.c_str(), secs);
    for (const auto& d : r.details) std::printf("       %s\n", d.c_str());
    if (!r.passed) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(ids.size()) - failed, ids.size());
  return failed == 0 ? 0 : 1;
}
