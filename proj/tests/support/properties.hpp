#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace foels::testing {

struct PropertyOutcome {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;

  bool passed() const { return failures == 0 && cases > 0; }
};

struct Property {
  std::string module;
  std::string name;
  std::function<PropertyOutcome(int cases, std::uint64_t seed)> run;
};

/// Randomized checks of every module invariant.
const std::vector<Property>& all_properties();

/// Runs the properties of one module (or all when module is empty).
std::vector<PropertyOutcome> run_properties(const std::string& module, int cases, std::uint64_t seed);

}  // namespace foels::testing
