#pragma once

#include <optional>
#include <string>
#include <vector>

#include "screwbif/geometry.hpp"
#include "screwbif/reduction.hpp"

namespace screwbif {

struct BranchOptions {
  int grid_points = 256;
  double tol_outer = 1e-10;
  int max_outer = 30;
  /// Extra Newton steps taken after tol_outer is met, kept only while they
  /// reduce the residual.
  int polish_steps = 2;
  /// Forward-difference step for the outer Jacobian.
  double fd_step = 1e-7;
  /// +1 follows the branch from +Omega_k, -1 the mirror branch from -Omega_k.
  int sign = 1;
  EliminationOptions inner;
};

/// One converged point of the bifurcating family.
struct BranchPoint {
  int k;
  int sign;
  double lambda;
  ReducedState rs;
  EliminatedState es;
  double c;
  double V;
  double residual_sup;     // max(sup|N|, sup|B|, sup|C|)
  double tangential_sup;   // sup|T|
  double slip_variation;   // sup_s |g(s) - c|
  double speed_defect;     // sup_s ||y_s| - 1|
  double min_stretch;      // min_s (1 + u_s - v/R)
  double dist_to_sigma;
  int iterations;

  double Omega() const noexcept { return rs.Omega; }
  double deltaV() const noexcept { return es.deltaV; }
  const Grid& grid() const noexcept { return rs.grid(); }
  FramePerturbation perturbation() const { return combine(rs, es); }
  Curve3 profile() const { return assemble_curve(perturbation()); }
  ScrewParams screw() const { return {grid().radius(), rs.Omega, c, V}; }
};

struct BranchSweep {
  int k;
  double R;
  int sign;
  std::vector<double> lambdas;     // requested amplitudes, 0 first, increasing
  std::vector<BranchPoint> points; // converged prefix of `lambdas`
  double dVcoeff_estimate;         // Richardson limit of deltaV / lambda^2 (NaN if < 3 points)
  bool truncated = false;
  std::string warning;

  double reachable_lambda() const { return points.empty() ? 0.0 : points.back().lambda; }
};

/// Closed-form coefficient: deltaV ~ -k^2 (k^2 - 1) / (2 R^3) lambda^2.
double delta_v_coefficient(int k, double R);

/// Solves {G1 = 0, G2 = 0, <(vperp, w), Phi_k>_{H^2} = lambda |Phi_k|^2} for
/// (Omega, vperp, w) by Newton with a finite-difference Jacobian, eliminating
/// (deltaV, u, v0) at every evaluation.
BranchPoint solve_branch_point(int k, double R, double lambda, const BranchOptions& options = {},
                               const BranchPoint* predictor = nullptr);

/// Natural-parameter continuation over {0} U {lambda_max 2^-j, j = n-1..0}.
BranchSweep sweep_branch(int k, double R, double lambda_max, int n_points,
                         const BranchOptions& options = {});

/// Independent route: bordered Newton on the full system {N = 0, B = 0, C = 0,
/// amplitude} for (Omega, deltaV, v0, u, vperp, w) with no elimination.
BranchPoint monolithic_crosscheck(int k, double R, double lambda, const BranchOptions& options = {});

/// Polynomial extrapolation of q(lambda) to lambda = 0 in the variable lambda^2.
double richardson_limit(const std::vector<double>& lambdas, const std::vector<double>& values);

}  // namespace screwbif
