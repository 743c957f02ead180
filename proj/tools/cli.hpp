#pragma once

// Command-line front end. run() is the whole program minus process setup,
// so tests can drive it in-process.

#include <iosfwd>
#include <string>
#include <vector>

#include "gtop/filters.hpp"
#include "gtop/report.hpp"

namespace gtop::cli {

// Exit codes: 0 verified, 1 usage or input error, 2 refuted, 3 unknown.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct HausdorffConfig {
  FilterFamily family;
  std::vector<Element> probes;
  HausdorffBudgets budgets;
};

// Parses a hausdorff config document; errors carry the failing location.
HausdorffConfig parse_hausdorff_config(const json& doc, const std::string& where = "config");

}  // namespace gtop::cli
