// hanjoint/selfcheck.h
//
// Oracle suites shipped with the library so an installed build can verify
// itself: CTC vs brute force, gradient vs finite differences, Hangul and
// lattice round trips, beam exactness and joint-decoder endpoints.

#ifndef HANJOINT_SELFCHECK_H_
#define HANJOINT_SELFCHECK_H_

#include <string>
#include <vector>

namespace hanjoint::selfcheck {

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

std::vector<CheckResult> RunAll();

}  // namespace hanjoint::selfcheck

#endif  // HANJOINT_SELFCHECK_H_
