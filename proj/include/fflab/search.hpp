#pragma once

#include <algorithm>
#include <cstdint>
#include <string_view>

#include "fflab/errors.hpp"

namespace fflab {

enum class SearchMode { Exhaustive, HillClimb };

inline const char* search_mode_name(SearchMode m) {
  return m == SearchMode::Exhaustive ? "exhaustive" : "randomized";
}

inline SearchMode search_mode_from_name(std::string_view s) {
  if (s == "exhaustive") return SearchMode::Exhaustive;
  if (s == "randomized") return SearchMode::HillClimb;
  throw BadConfig("mode must be exhaustive or randomized");
}

// C(total, n), capped at cap+1 so budget comparisons never overflow. Every
// prefix product below is itself a binomial coefficient, so the divisions are
// exact.
inline std::uint64_t choose_capped(std::uint64_t total, std::uint64_t n,
                                   std::uint64_t cap) {
  if (n > total) return 0;
  n = std::min(n, total - n);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= n; ++i) {
    r = r * (total - n + i) / i;
    if (r > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace fflab
