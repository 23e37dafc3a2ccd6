#pragma once

#include <string>
#include <vector>

#include "blpp/config.hpp"

namespace blpp {

struct CheckResult {
  std::string id;     // stable machine name
  std::string label;  // what structural property the check exercises
  bool hard = true;   // hard checks gate the exit code, soft ones only report
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  bool inject_fault = false;  // force a violation into the monotonicity data
};

std::vector<std::string> check_ids();
CheckResult run_check(const std::string& id, const RunConfig& config,
                      const VerifyOptions& options = {});
std::vector<CheckResult> run_all_checks(const RunConfig& config,
                                        const VerifyOptions& options = {});

void print_report(const std::vector<CheckResult>& results);
void write_report_json(const std::vector<CheckResult>& results, const std::string& path);
int report_exit_code(const std::vector<CheckResult>& results);  // 0 pass, 1 failure

}  // namespace blpp
