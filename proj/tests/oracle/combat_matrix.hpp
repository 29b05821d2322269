#pragma once

#include <string>

namespace oracle {

struct MatrixReport {
  long cases = 0;
  long mismatches = 0;
  std::string first_mismatch;
};

// Every attacker x defender keyword subset (64 x 64), attack 0..3 on both
// sides and defense 1..3 on both sides, resolved by the engine and by the
// oracle and compared field by field.
MatrixReport run_combat_matrix();

}  // namespace oracle
