#pragma once

#include <optional>
#include <vector>

#include "screwbif/geometry.hpp"
#include "screwbif/spectral.hpp"

namespace screwbif {

/// Independent variables of the reduced problem: (Omega, vperp, w).
struct ReducedState {
  double Omega;
  ScalarField vperp;  // even, mean-free
  ScalarField w;      // odd

  ReducedState(double Omega, ScalarField vperp, ScalarField w);
  static ReducedState zero(const Grid& grid, double Omega);
  const Grid& grid() const noexcept { return vperp.grid(); }
};

/// Variables eliminated by the implicit-function step: (deltaV, u, v0).
struct EliminatedState {
  double deltaV;
  ScalarField u;  // odd
  double v0;

  EliminatedState(double deltaV, ScalarField u, double v0);
  static EliminatedState zero(const Grid& grid);
};

/// Mean of the normal residual, mean-free part of the arclength residual, and
/// its mean:
///   F1 = Omega mean(vperp w_s) + deltaV (1 - v0/R)
///   F2 = u_s - vperp/R + Q - mean(Q)
///   F3 = -v0/R + mean(Q)
struct EliminationResidual {
  double F1;
  ScalarField F2;
  double F3;

  double sup() const;
};

EliminationResidual elimination_residual(const ReducedState& rs, const EliminatedState& es);

FramePerturbation combine(const ReducedState& rs, const EliminatedState& es);

struct EliminationOptions {
  double tol = 1e-12;
  int max_iterations = 25;
  /// Inputs with sup(|vperp|, |w|) above this multiple of R are rejected.
  double domain_radius = 0.5;
};

struct Elimination {
  EliminatedState state;
  int iterations = 0;
  std::vector<double> residual_history;
};

/// Newton solve of F(Omega, vperp, w, deltaV, u, v0) = 0 for (deltaV, u, v0),
/// with the Jacobian assembled analytically from the quadratic structure.
/// Throws ErrorCode::IftDomain if the input is outside the guarded
/// neighbourhood or the iteration does not converge.
Elimination eliminate(const ReducedState& rs, const EliminationOptions& options = {},
                      const std::optional<EliminatedState>& guess = std::nullopt);

/// (N - mean(N), B) evaluated at the eliminated state.
FieldPair reduced_residual(const ReducedState& rs, const EliminatedState& es);
FieldPair reduced_residual(const ReducedState& rs, const EliminationOptions& options = {});

}  // namespace screwbif
