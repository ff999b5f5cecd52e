#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sesstk {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0;
  /// Wall-clock limit in seconds; 0 when the criterion has none.
  double limit = 0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240601;
  std::size_t generated = 200;
  std::size_t budget = 10000;
  /// Mutation: duality forgets to swap branch and select.
  bool broken_duality = false;
  /// Mutation: parallel composition never counts shared names.
  bool disable_sharing = false;
  /// Criterion ids to run; empty runs all ten.
  std::vector<int> only;
};

constexpr int kCriterionCount = 10;

CriterionResult run_criterion(int id, const AcceptanceOptions& opts = {});
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

/// "PASS  3  title  (1.23s / 60s)  detail"
std::string format_result(const CriterionResult& r);

}  // namespace sesstk
