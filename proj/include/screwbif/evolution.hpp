#pragma once

#include <vector>

#include "screwbif/branch.hpp"
#include "screwbif/geometry.hpp"

namespace screwbif {

struct EvolutionState {
  double t;
  Curve3 curve;
  double length;
  double arclength_defect;  // sup_s ||x_s| - 1|
};

struct EvolutionOptions {
  /// States are returned at multiples of this interval (and at t_end).
  double output_interval = 0.1;
  /// Step bound dt <= c_cfl (2 pi R / N)^2.
  double c_cfl = 0.2;
  double defect_max = 1e-4;
};

/// Pseudospectral x_s x x_ss, dealiased.
Curve3 lie_rhs(const Curve3& x);

/// Largest step admitted for this grid.
double max_time_step(const Grid& grid, const EvolutionOptions& options = {});

/// Classical RK4 on the semi-discrete equation. Steps are shortened (never
/// lengthened) so that every output time is hit exactly. The first entry is
/// the initial state at t = 0.
std::vector<EvolutionState> integrate(const Curve3& x0, double t_end, double dt,
                                      const EvolutionOptions& options = {});

struct DriftReport {
  std::vector<double> times;
  std::vector<double> dist_sigma;
  std::vector<double> z_center;
  std::vector<double> pointwise_gap;  // sup_s |x(s,t) - x^R(s,t)|
  std::vector<double> min_gap;        // inf_s |x(s,t) - x^R(s,t)|
  std::vector<double> length;
  std::vector<double> arclength_defect;
  double fitted_V = 0.0;
  double deltaV = 0.0;  // branch value the drift is compared against
  /// First output time from which pointwise_gap >= 0.9 |deltaV| t holds for
  /// every later sample; NaN if there is none or deltaV = 0.
  double t0 = 0.0;
  /// min over t >= t0 of pointwise_gap / t (0 when t0 is undefined).
  double gamma = 0.0;
  /// Largest deviation of dist_sigma from its initial value.
  double dist_spread = 0.0;
  double dist_max = 0.0;
};

DriftReport drift_report(const BranchPoint& branch, double t_end, double dt,
                         const EvolutionOptions& options = {});
/// Same diagnostics for states already integrated from branch.profile().
DriftReport drift_report(const BranchPoint& branch, const std::vector<EvolutionState>& states);

}  // namespace screwbif
