// Acceptance suite: runs every named property check at full size and prints
// one pass/fail line per criterion. Exit status counts hard failures.

#include <cstdio>
#include <string>

#include "blpp/verify.hpp"

int main(int argc, char** argv) {
  blpp::RunConfig config;
  if (argc > 1 && std::string(argv[1]) == "--smoke") config.smoke = true;
  config.validate();

  const auto results = blpp::run_all_checks(config);
  blpp::print_report(results);

  int hard_total = 0, hard_passed = 0;
  for (const auto& r : results) {
    hard_total += r.hard;
    hard_passed += r.hard && r.passed;
  }
  std::printf("%d/%d hard criteria passed\n", hard_passed, hard_total);
  return hard_passed == hard_total ? 0 : 1;
}
