#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace screwbif {

struct RunConfig {
  int k = 2;
  double R = 1.0;
  int N = 256;
  int sign = 1;
  double lambda_max = 0.05;
  int n_points = 6;
  double lambda = 0.02;
  double t_end = 10.0;
  double dt = 0.0;  // 0 selects the largest stable step that divides output_interval
  double output_interval = 0.1;
  int snapshot_every = 10;  // write a curve file every this many output times
  double tol_inner = 1e-12;
  double tol_outer = 1e-10;
  double defect_max = 1e-4;
  std::string output_dir = "out";
  std::uint64_t seed = 20240613;

  /// Applies one "key = value" assignment; throws InvalidArgument on an
  /// unknown key or an unparsable value.
  void set(const std::string& key, const std::string& value);
  /// Checks the invariants: tolerances positive, N even and >= 16, k >= 2.
  void validate() const;
  /// Ordered "key = value" lines reproducing this configuration exactly.
  std::vector<std::string> lines() const;
  std::map<std::string, std::string> as_map() const;
};

/// Flat "key = value" text; '#' starts a comment, blank lines are ignored.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// Shortest decimal text that round-trips the double.
std::string format_exact(double x);

}  // namespace screwbif
