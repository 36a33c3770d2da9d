#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fflab {

struct SuiteResult {
  std::string suite;
  std::uint32_t q = 0;
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;

  bool passed() const { return violations == 0; }
};

// Runs every invariant suite against each applicable modulus; suites that do
// not apply to a modulus (bisectors need q = 3 mod 4, 3-d geometry stays at
// desk scale) emit no row for it. Randomized suites derive their streams from
// the seed, so reruns are bit-identical.
std::vector<SuiteResult> run_verify_suites(std::span<const std::uint32_t> qs,
                                           std::uint64_t seed);

}  // namespace fflab
