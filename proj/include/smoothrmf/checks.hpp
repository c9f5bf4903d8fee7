#pragma once

// The acceptance suite: numbered checks with fixed seeds, shared by the
// acceptance test binary and the `check` subcommand.

#include <cstdint>
#include <string>
#include <vector>

#include "smoothrmf/primes.hpp"
#include "smoothrmf/report_io.hpp"

namespace smoothrmf {

struct CheckOptions {
  std::uint64_t seed = 42;
  unsigned threads = 0;  // 0: default_thread_count()
};

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;  // 0: no budget
  std::string detail;           // one line, for the PASS/FAIL table
  Json record;                  // every computed value; deterministic for fixed options
};

/// Checks 1..12.
std::vector<int> all_check_ids();
std::string check_name(int id);

/// Runs the requested checks in ascending id order. Check 12 re-runs 1..11 with
/// a different thread count and compares the serialized records byte for byte.
std::vector<CheckResult> run_checks(const std::vector<int>& ids, const CheckOptions& opts);

/// Deterministic serialization (no timings, no thread count).
Json checks_document(const std::vector<CheckResult>& results, const CheckOptions& opts);

/// One "PASS|FAIL  id  name  seconds  detail" line.
std::string format_check_line(const CheckResult& r);

}  // namespace smoothrmf
