#include <iostream>

#include "acceptance/criteria.hpp"

int main() {
  const auto results = kmfp::acceptance::run_all(std::cout);
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.passed ? 1 : 0;
  std::cout << passed << "/" << results.size() << " criteria passed\n";
  return passed == results.size() ? 0 : 1;
}
