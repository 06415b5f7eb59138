// Acceptance suite: one PASS/FAIL line per criterion.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "screwbif/acceptance.hpp"

int main(int argc, char** argv) {
  screwbif::AcceptanceOptions options;
  int failures = 0;
  for (int id = 1; id <= 9; ++id) {
    if (argc > 1 && std::to_string(id) != argv[1]) continue;
    const auto r = screwbif::run_criterion(id, options);
    std::printf("%s\n", screwbif::format_result(r).c_str());
    std::fflush(stdout);
    if (!r.pass) ++failures;
  }
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
