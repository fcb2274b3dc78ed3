#pragma once

// The invariant suite: twelve numbered checks, each returning a verdict
// plus human-readable detail lines.  Used by `schwarziso verify` and the
// acceptance driver.

#include "schwarziso/model.hpp"
#include "schwarziso/orbits.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace schwarziso {

struct VerifyOptions {
  ModelParams params;  // defaults: M=1, m=0.01, A=A1=1, B=B1=0.2
  std::uint64_t seed = 20240917;
  unsigned threads = 0;
  SinkBound sink_bound = SinkBound::printed;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::vector<std::string> details;
};

inline constexpr int kCriterionCount = 12;

CriterionResult run_criterion(int id, const VerifyOptions& opt = {});
std::vector<CriterionResult> run_all_criteria(const VerifyOptions& opt = {});

}  // namespace schwarziso
