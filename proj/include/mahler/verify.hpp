#pragma once

// Claim registry, suite runner and reports.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace mahler {

enum class ClaimStatus { Pass, Fail, Inconclusive };

std::string to_string(ClaimStatus status);

struct ClaimResult {
  std::string claim_id;
  ClaimStatus status = ClaimStatus::Pass;
  std::vector<double> observed;
  std::vector<double> expected;
  std::string provenance;
  double runtime_ms = 0.0;
  std::string reason;     // why a claim is inconclusive, or what was left out
  std::string violation;  // first violating instance in the text formats
};

struct SuiteConfig {
  std::uint64_t seed = 0;
  std::map<std::string, long> dims;
  std::map<std::string, double> tolerances;
  std::vector<std::string> suites;  // empty: every registered claim
  int jobs = 1;
  int instances = 50;
  bool timings = false;  // off: runtime_ms is written as 0 so reports are byte-stable
  std::string output_path;
  std::string format = "json";

  static SuiteConfig from_json(const nlohmann::json& j);
  /// Throws ArgumentError on unknown claim ids, non-positive tolerances or a bad format.
  void validate() const;

  double tolerance(const std::string& claim_id, double fallback) const;
  long dim(const std::string& key, long fallback) const;
};

const std::vector<std::string>& registered_claims();

ClaimResult run_claim(const std::string& claim_id, const SuiteConfig& config);
std::vector<ClaimResult> run_suite(const SuiteConfig& config);

enum class ReportFormat { Json, Csv };

ReportFormat report_format(const std::string& name);
std::string render_report(const std::vector<ClaimResult>& results, ReportFormat format);
/// Writes the rendered report; an empty path means stdout.
void emit_report(const std::vector<ClaimResult>& results, ReportFormat format, const std::string& path);

/// 0 all pass, 1 any fail, 2 inconclusive without fails.
int exit_code(const std::vector<ClaimResult>& results);

}  // namespace mahler
