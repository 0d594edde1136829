// Runs acceptance criteria by number (all when none given) and prints one
// PASS/FAIL line per criterion. Exit status 1 if any criterion fails.
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "suites.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty()) ids = conetrace::verify::suite_criteria("all");
  const auto tol = conetrace::verify::default_tolerances();
  bool ok = true;
  for (int id : ids) {
    const auto r = conetrace::verify::run_criterion(id, tol);
    std::cout << conetrace::verify::summary_line(r) << std::endl;
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}
