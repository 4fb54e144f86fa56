#pragma once

#include <cstdint>
#include <iosfwd>

namespace gwish {

struct ValidateOptions {
  // Shrinks iteration counts tenfold and widens tolerances threefold.
  bool quick = false;
};

// Run every validation criterion, printing one PASS/FAIL line per criterion.
// Returns the number of failures.
int run_acceptance(const ValidateOptions& opts, std::ostream& out);

}  // namespace gwish
