#pragma once

#include <array>

#include "screwbif/spectral.hpp"

namespace screwbif {

/// 2x2 block of the linearized operator on the (cos(l s/R), sin(l s/R)) pair:
/// [[(l^2-1)/R^2, -l Omega], [-l Omega, l^2/R^2]].
struct ModeMatrix {
  int l;
  double Omega;
  double R;
  std::array<std::array<double, 2>, 2> entries;

  static ModeMatrix make(int l, double Omega, double R);
  double determinant() const;
  /// Eigenvalues in ascending order (the block is symmetric).
  std::array<double, 2> eigenvalues() const;
  std::array<double, 2> apply(const std::array<double, 2>& x) const;
};

/// Kernel direction of the operator at the critical angular velocity:
/// ((Phi_k)_1, (Phi_k)_2) = (k cos(ks/R), sign sqrt(k^2-1) sin(ks/R)).
/// sign = -1 gives the kernel at -Omega_k.
struct KernelVector {
  int k;
  int sign;
  FieldPair fields;
};

/// Omega_k = sqrt(k^2 - 1) / R^2, k >= 2.
double critical_omega(int k, double R);
double mode_determinant(int l, double Omega, double R);

/// (-v_ss - v/R^2 - R Omega w_s, -w_ss + R Omega v_s) for even mean-free v and odd w.
FieldPair apply_linear_operator(double Omega, const ScalarField& vperp, const ScalarField& w);
/// d/dOmega of the above: (-R w_s, R v_s).
FieldPair apply_omega_derivative(const ScalarField& vperp, const ScalarField& w);

KernelVector kernel_vector(int k, const Grid& grid, int sign = 1);

}  // namespace screwbif
