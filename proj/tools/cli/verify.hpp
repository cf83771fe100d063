#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "boxlab/system.hpp"

namespace boxlab::cli {

struct VerifyConfig {
  std::vector<std::size_t> order;  // 0-based
  std::uint64_t seed = 0;
  std::size_t draws = 100;
  unsigned threads = 1;
  std::size_t cap = 10'000'000;
  // Property whose comparison is inverted, for exercising the failure path.
  std::string inject_fault;
};

struct PropertyOutcome {
  std::string name;
  std::string status;  // PASS, FAIL or SKIP
  std::size_t draws = 0;
  std::string note;
  std::optional<std::size_t> failing_draw;
  std::optional<nlohmann::json> counterexample;
};

/// Every property suite on one system. Draw inputs come from generators
/// seeded by (seed, property); draws may be checked in parallel but the
/// report lists the earliest failing draw, so output is independent of the
/// thread count.
std::vector<PropertyOutcome> run_verify(const FiniteSystem& sys, const VerifyConfig& config);

/// Names accepted by VerifyConfig::inject_fault.
const std::vector<std::string>& verify_property_names();

}  // namespace boxlab::cli
