#include "screwbif/linear.hpp"

#include <cmath>
#include <sstream>

#include "screwbif/error.hpp"

namespace screwbif {
namespace {

void require_operator_domain(const ScalarField& vperp, const ScalarField& w) {
  if (vperp.parity() != Parity::Even || !vperp.mean_free())
    throw Error(ErrorCode::Parity, "linearized operator: vperp must be even and mean-free");
  if (w.parity() != Parity::Odd)
    throw Error(ErrorCode::Parity, "linearized operator: w must be odd");
  if (!(vperp.grid() == w.grid())) throw Error(ErrorCode::Grid, "linearized operator: grid mismatch");
}

}  // namespace

ModeMatrix ModeMatrix::make(int l, double Omega, double R) {
  const double l2 = static_cast<double>(l) * l;
  const double R2 = R * R;
  return {l, Omega, R, {{{(l2 - 1.0) / R2, -l * Omega}, {-l * Omega, l2 / R2}}}};
}

double ModeMatrix::determinant() const {
  return entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0];
}

std::array<double, 2> ModeMatrix::eigenvalues() const {
  const double half_trace = 0.5 * (entries[0][0] + entries[1][1]);
  const double half_gap = 0.5 * (entries[0][0] - entries[1][1]);
  const double radius = std::hypot(half_gap, entries[0][1]);
  return {half_trace - radius, half_trace + radius};
}

std::array<double, 2> ModeMatrix::apply(const std::array<double, 2>& x) const {
  return {entries[0][0] * x[0] + entries[0][1] * x[1], entries[1][0] * x[0] + entries[1][1] * x[1]};
}

double critical_omega(int k, double R) {
  if (k < 2) {
    std::ostringstream msg;
    msg << "critical angular velocity needs k >= 2 (got " << k << ")";
    throw Error(ErrorCode::Mode, msg.str());
  }
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  return std::sqrt(static_cast<double>(k) * k - 1.0) / (R * R);
}

double mode_determinant(int l, double Omega, double R) {
  if (l < 1) throw Error(ErrorCode::Mode, "mode index must be >= 1");
  return ModeMatrix::make(l, Omega, R).determinant();
}

FieldPair apply_linear_operator(double Omega, const ScalarField& vperp, const ScalarField& w) {
  require_operator_domain(vperp, w);
  const double R = vperp.grid().radius();
  ScalarField first = -differentiate(vperp, 2) - (1.0 / (R * R)) * vperp -
                      (R * Omega) * differentiate(w, 1);
  ScalarField second = -differentiate(w, 2) + (R * Omega) * differentiate(vperp, 1);
  return {first.projected(Parity::Even, true), second.projected(Parity::Odd, true)};
}

FieldPair apply_omega_derivative(const ScalarField& vperp, const ScalarField& w) {
  require_operator_domain(vperp, w);
  const double R = vperp.grid().radius();
  return {(-R * differentiate(w, 1)).projected(Parity::Even, true),
          (R * differentiate(vperp, 1)).projected(Parity::Odd, true)};
}

KernelVector kernel_vector(int k, const Grid& grid, int sign) {
  if (k < 2) throw Error(ErrorCode::Mode, "kernel vector needs k >= 2");
  if (k > grid.dealias_cutoff()) {
    std::ostringstream msg;
    msg << "mode k=" << k << " exceeds the dealiasing cutoff " << grid.dealias_cutoff()
        << " of an N=" << grid.size() << " grid";
    throw Error(ErrorCode::Resolution, msg.str());
  }
  const double R = grid.radius();
  const double kk = k;
  const double amp2 = (sign < 0 ? -1.0 : 1.0) * std::sqrt(kk * kk - 1.0);
  ScalarField first =
      ScalarField::sample(grid, [=](double s) { return kk * std::cos(kk * s / R); }, Parity::Even, true);
  ScalarField second =
      ScalarField::sample(grid, [=](double s) { return amp2 * std::sin(kk * s / R); }, Parity::Odd);
  return {k, sign < 0 ? -1 : 1, {std::move(first), std::move(second)}};
}

}  // namespace screwbif
