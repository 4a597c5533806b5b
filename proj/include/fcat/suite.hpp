#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fcat/centre.hpp"

namespace fcat {

// value is a residual unless integer is set, in which case it is an exact count
struct CheckEntry {
  std::string name;
  double value = 0;
  bool integer = false;
  bool pass = false;
};

std::vector<CheckEntry> fusion_checks(const CategorySpec& spec);
std::vector<CheckEntry> diagram_checks(const Calculus& c, int instances, std::uint64_t seed);
std::vector<CheckEntry> tube_checks(const Calculus& c, int instances, std::uint64_t seed);
// braided-only checks are skipped for unbraided input; modular-only checks are
// replaced by a non-modularity witness when S is singular
std::vector<CheckEntry> centre_checks(const Calculus& c, int instances, std::uint64_t seed);
std::vector<CheckEntry> identity_suite(const Calculus& c, int instances, std::uint64_t seed);

bool all_pass(const std::vector<CheckEntry>& checks);

}  // namespace fcat
