#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace finsler {

struct Check {
  std::string what;
  double value = 0.0;
  double threshold = 0.0;
  bool above = false;  // pass iff value > threshold instead of value < threshold
  bool pass() const { return above ? value > threshold : value < threshold; }
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  std::string error;
  bool pass() const;
  std::string line() const;
};

std::vector<int> acceptance_ids();
CriterionResult run_criterion(int id, std::uint64_t seed = 42);
/// Runs every criterion, streaming one line each; returns true iff all pass.
bool run_acceptance(std::ostream& out, std::uint64_t seed = 42);

}  // namespace finsler
