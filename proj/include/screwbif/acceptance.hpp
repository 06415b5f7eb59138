#pragma once

#include <string>
#include <vector>

namespace screwbif {

struct CriterionResult {
  int id;
  std::string title;
  bool pass;
  std::string detail;
  double seconds;
};

struct AcceptanceOptions {
  /// Grid for branch solves, evolution and the drift run.
  int grid_points = 256;
  /// Coarse grid for the time-step self-convergence study. On the default
  /// grid the time error of the screw solutions sits at roundoff.
  int coarse_points = 32;
  /// Grid for the symmetry regressions.
  int symmetry_points = 128;
};

/// Runs criterion `id` (1..9).
CriterionResult run_criterion(int id, const AcceptanceOptions& options = {});
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});
/// "PASS [n] title: detail (t s)"
std::string format_result(const CriterionResult& r);

}  // namespace screwbif
