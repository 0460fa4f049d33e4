#pragma once

#include <string>
#include <vector>

#include "cgvf/sim.hpp"

namespace cgvf {

/// Parses a scenario description in the sectioned key-value format
/// (sections [run], [graph], [robots], [coordination], [safety],
/// [guidance]). Throws ParseError with line/column on syntax errors and
/// InvalidArgument on schema violations (unknown keys, bad sizes).
Scenario parse_scenario_text(const std::string& text);

/// Reads and parses a scenario file.
Scenario load_scenario(const std::string& path);

/// Renders a scenario back to the file format with explicit initial
/// conditions; parse(serialize(sc)) reproduces sc.
std::string serialize_scenario(const Scenario& sc);

/// One entry of the validation checklist.
struct CheckResult {
  std::string name;
  bool passed = true;
  bool warning_only = false;  // failure downgrades to a warning
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool hard_failure() const;
  std::string to_string() const;
};

/// Assumption and configuration checklist: graph connectivity, gain
/// positivity, delta antisymmetry/feasibility, sampled derivative
/// boundedness, safety and guidance parameter sanity.
ValidationReport validate_scenario(const Scenario& sc);

}  // namespace cgvf
