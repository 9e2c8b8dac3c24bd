#pragma once

// Randomized property suites behind `renyi_sc verify`.

#include <cstdint>
#include <string>
#include <vector>

#include "renyi/matrix_json.hpp"

namespace renyi::verify {

struct Failure {
  std::string suite;
  std::string check;
  std::uint64_t index = 0;  // item index within the seed stream
  io::json values;
};

struct SuiteReport {
  std::string suite;
  std::size_t instances = 0;
  std::size_t checks = 0;
  std::vector<Failure> failures;
  double seconds = 0.0;
};

/// Suite names accepted by run_suite, in execution order for "all".
const std::vector<std::string>& suite_names();

/// Runs `seeds` independent items of a suite; item k draws from
/// rnd::substream(seed, k). Throws std::invalid_argument for unknown suites.
SuiteReport run_suite(const std::string& suite, std::size_t seeds, std::uint64_t seed);

io::json to_json(const SuiteReport& r);

}  // namespace renyi::verify
