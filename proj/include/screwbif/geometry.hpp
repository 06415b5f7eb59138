#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "screwbif/spectral.hpp"

namespace screwbif {

using Vec3 = std::array<double, 3>;

/// Closed curve T -> R^3 sampled on a spectral grid; components in (e1, e2, e3).
struct Curve3 {
  ScalarField x;
  ScalarField y;
  ScalarField z;

  const Grid& grid() const noexcept { return x.grid(); }
  Vec3 point(int j) const { return {x[j], y[j], z[j]}; }

  Curve3 derivative(int order = 1) const;
  Curve3 translated(const Vec3& tau) const;
  /// Rotation about e3 by angle alpha.
  Curve3 rotated(double alpha) const;
  /// s -> curve(s + sigma).
  Curve3 shifted(double sigma) const;
  Vec3 centroid() const;
};

Curve3 operator+(const Curve3& a, const Curve3& b);
Curve3 operator-(const Curve3& a, const Curve3& b);
/// max_j |a(s_j) - b(s_j)| (Euclidean norm per sample).
double sup_distance(const Curve3& a, const Curve3& b);
/// Discrete H^2 norm with Fourier weights 1 + xi^2 + xi^4, summed over components.
double h2_norm(const Curve3& c);
/// Arc length of the curve and max_j ||c_s| - 1|.
double curve_length(const Curve3& c);
double arclength_defect(const Curve3& c);

/// Perturbation z = u t + (v0 + vperp) n + w b of the reference circle.
/// u and w are odd, vperp is even and mean-free; enforced at construction.
struct FramePerturbation {
  ScalarField u;
  double v0;
  ScalarField vperp;
  ScalarField w;

  FramePerturbation(ScalarField u, double v0, ScalarField vperp, ScalarField w);
  static FramePerturbation zero(const Grid& grid);

  const Grid& grid() const noexcept { return u.grid(); }
  /// v = v0 + vperp as an even field.
  ScalarField v() const;
};

/// Parameters of an axial screw motion Q_z^{Omega t} y(s + c t) + V t e3.
struct ScrewParams {
  double R = 1.0;
  double Omega = 0.0;
  double c = 0.0;
  double V = 1.0;

  static ScrewParams with_delta_v(double R, double Omega, double c, double deltaV) {
    return {R, Omega, c, 1.0 / R + deltaV};
  }
  double deltaV() const noexcept { return V - 1.0 / R; }
};

/// Tangential, normal, binormal and arclength residuals of the perturbed
/// profile equation, plus the quadratic part Q of the arclength constraint.
struct Residuals {
  ScalarField T;
  ScalarField N;
  ScalarField B;
  ScalarField C;
  ScalarField Q;

  /// max(sup|N|, sup|B|, sup|C|)
  double nbc_sup() const;
};

struct FrenetFrame {
  Curve3 t;
  Curve3 n;
  Curve3 b;
};

Curve3 circle_profile(const Grid& grid);
FrenetFrame frenet_frame(const Grid& grid);
/// y = x0 + u t + (v0 + vperp) n + w b.
Curve3 assemble_curve(const FramePerturbation& p);

Residuals residuals(const FramePerturbation& p, double Omega, double deltaV);

/// Sup-norm of (1 + u_s - v/R) T + (v_s + u/R) N + w_s B + d_s C. The check is
/// carried out with exact products on a grid of twice the size, so it holds for
/// any input band-limited to the dealiasing cutoff.
double tangential_identity_defect(const FramePerturbation& p, double Omega, double deltaV);

/// Pointwise 1 + u_s - v/R; the tangential residual is recovered from the
/// identity only where this stays above 1/2.
ScalarField tangential_stretch(const FramePerturbation& p);

struct SlipVelocity {
  double c;          // mean of g(s) = -y_s . (Omega e3 x y + V e3)
  double variation;  // sup_s |g(s) - c|
  double speed_defect;  // sup_s ||y_s| - 1|; large values make c meaningless
};

SlipVelocity slip_velocity(const Curve3& y, double Omega, double V);

/// x(s, t) = Q_z^{Omega t} y(s + c t) + V t e3.
Curve3 screw_evaluate(const Curve3& y, const ScrewParams& sp, double t);

struct OrbitDistance {
  double dist;
  double alpha_star;
  Vec3 tau_star;
};

/// H^2 distance from x to {Q_z^alpha x0 + tau}; minimisers in closed form.
OrbitDistance orbit_distance(const Curve3& x);

/// CSV with header "s,x,y,z" and 17 significant digits. Lines starting with
/// '#' are comments (provenance) and are skipped by the reader.
void write_curve_csv(std::ostream& os, const Curve3& c,
                     const std::vector<std::string>& comments = {});
Curve3 read_curve_csv(std::istream& is, std::optional<double> radius = std::nullopt);

}  // namespace screwbif
