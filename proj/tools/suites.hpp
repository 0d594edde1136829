#pragma once

#include <map>
#include <string>
#include <vector>

namespace conetrace::verify {

using Tolerances = std::map<std::string, double>;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  std::vector<std::pair<std::string, double>> metrics;
};

// Default thresholds, keyed "c<id>.<name>". Overrides must use existing keys.
Tolerances default_tolerances();
void apply_override(Tolerances& tol, const std::string& key_eq_value);

std::vector<std::string> suite_names();
// Criteria of a named suite; throws ConfigError for unknown names.
std::vector<int> suite_criteria(const std::string& suite);

CriterionResult run_criterion(int id, const Tolerances& tol);
std::string summary_line(const CriterionResult& r);

}  // namespace conetrace::verify
