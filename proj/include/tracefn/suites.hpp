#pragma once

// Verification suites driven by `tracefn verify`: seeded random instances
// plus fixed reference instances, each reduced to pass/fail checks.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace tracefn {

struct Check {
  std::string label;
  bool passed = false;
  nlohmann::json detail = nlohmann::json::object();
};

struct SuiteReport {
  std::string name;
  std::vector<Check> checks;

  bool passed() const;
  std::size_t failures() const;
  nlohmann::json to_json() const;
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  int trials = 10;
};

/// First-order eigenvalue / eigenvector identities along tracked branches;
/// every other random instance has a doubled eigenvalue. Also checks that
/// the errors shrink under 2x grid refinement.
SuiteReport run_prop1_suite(const SuiteOptions& options);
/// Vanishing kernel-branch remainders for log and x^0.5, and the limiting
/// ratio for x^-1 on the 2x2 gap instance.
SuiteReport run_kernel_limit_suite(const SuiteOptions& options);
/// Scalar integral representations and the formula / quadrature / finite
/// difference triangle on random singular instances.
SuiteReport run_quadrature_suite(const SuiteOptions& options);
/// The 2x2 instance where the formula for x^-1 is a strict lower bound.
SuiteReport run_gap_suite(const SuiteOptions& options);

/// name ∈ {prop1, kernel-limit, quadrature, gap, all}. Throws
/// std::invalid_argument for other names.
std::vector<SuiteReport> run_suites(const std::string& name, const SuiteOptions& options);

}  // namespace tracefn
