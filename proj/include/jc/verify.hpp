#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace jc {

// Reproductions of the library's reference experiments, shared by the
// `jc verify` subcommand and the acceptance test binary. Every check is of
// the form value <= threshold so reports stay machine-readable.

struct CheckLine {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct SuiteResult {
  std::string name;
  std::uint64_t seed = 0;
  bool passed = false;
  double elapsed_seconds = 0.0;  // reported on stdout, never in the JSON body
  std::vector<CheckLine> checks;
};

SuiteResult criterion_remark2(std::uint64_t seed);
SuiteResult criterion_remark7(std::uint64_t seed);
SuiteResult criterion_theorem2(std::uint64_t seed);
SuiteResult criterion_cp(std::uint64_t seed);
SuiteResult criterion_theorem3(std::uint64_t seed);
SuiteResult criterion_tvn(std::uint64_t seed);
SuiteResult criterion_automorphisms(std::uint64_t seed);
SuiteResult criterion_substrate(std::uint64_t seed);

/// Suite names accepted by the CLI: all, remark2, remark7, theorem2 (runs
/// the EJA and NDS commutation-principle suites), theorem5, tvn, cp, axioms.
/// Throws SchemaError on an unknown name.
std::vector<SuiteResult> run_suites(const std::string& which, std::uint64_t seed);

nlohmann::json suites_to_json(const std::vector<SuiteResult>& suites, std::uint64_t seed);

}  // namespace jc
