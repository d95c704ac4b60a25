#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kmfp::acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs every criterion in order and prints one PASS/FAIL line per criterion
/// as soon as it finishes.
std::vector<CriterionResult> run_all(std::ostream& out);

/// One line, e.g. "[PASS]  4 rates exactness (0.01 s): ...".
std::string format_line(const CriterionResult& r);

}  // namespace kmfp::acceptance
