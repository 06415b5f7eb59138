#include "screwbif/reduction.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "screwbif/error.hpp"

namespace screwbif {
namespace {

double band_excess(const ScalarField& f, int cutoff) {
  const Spectrum s = f.spectrum();
  double excess = 0.0;
  for (size_t l = static_cast<size_t>(cutoff) + 1; l < s.size(); ++l)
    excess = std::max(excess, 2.0 * std::abs(s[l]));
  return excess;
}

Eigen::VectorXd pack(const EliminationResidual& r, int L) {
  Eigen::VectorXd v(L + 2);
  v[0] = r.F1;
  const auto modes = r.F2.cosine_modes(L);
  for (int l = 0; l < L; ++l) v[l + 1] = modes[static_cast<size_t>(l)];
  v[L + 1] = r.F3;
  return v;
}

// d F / d(deltaV, u-sine-modes, v0) at (rs, es). F is quadratic, so this is the
// exact Frechet derivative restricted to the discrete unknowns.
Eigen::MatrixXd elimination_jacobian(const ReducedState& rs, const EliminatedState& es) {
  const Grid& grid = rs.grid();
  const double R = grid.radius();
  const int L = grid.dealias_cutoff();
  const ScalarField v = rs.vperp + ScalarField::constant(grid, es.v0);
  const ScalarField a = differentiate(es.u, 1) - (1.0 / R) * v;
  const ScalarField b = differentiate(rs.vperp, 1) + (1.0 / R) * es.u;
  const double a_mean = mean(a);

  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(L + 2, L + 2);
  J(0, 0) = 1.0 - es.v0 / R;
  J(0, L + 1) = -es.deltaV / R;

  const auto a_modes = a.cosine_modes(L);
  for (int m = 0; m < L; ++m) J(m + 1, L + 1) = -a_modes[static_cast<size_t>(m)] / R;
  J(L + 1, L + 1) = -1.0 / R - a_mean / R;

  std::vector<double> unit(static_cast<size_t>(L), 0.0);
  for (int l = 1; l <= L; ++l) {
    unit.assign(static_cast<size_t>(L), 0.0);
    unit[static_cast<size_t>(l - 1)] = 1.0;
    const ScalarField h = ScalarField::sine_series(grid, unit);
    const ScalarField h_s = differentiate(h, 1);
    const ScalarField dQ = product(a, h_s) + (1.0 / R) * product(b, h);
    const auto col = (h_s + dQ).cosine_modes(L);
    for (int m = 0; m < L; ++m) J(m + 1, l) = col[static_cast<size_t>(m)];
    J(L + 1, l) = mean(dQ);
  }
  return J;
}

}  // namespace

ReducedState::ReducedState(double Omega_, ScalarField vperp_, ScalarField w_)
    : Omega(Omega_),
      vperp(ScalarField(vperp_.grid(), {vperp_.values().begin(), vperp_.values().end()},
                        Parity::Even, true)),
      w(ScalarField(w_.grid(), {w_.values().begin(), w_.values().end()}, Parity::Odd, true)) {
  if (vperp_.parity() == Parity::Odd || w_.parity() == Parity::Even)
    throw Error(ErrorCode::Parity, "reduced state needs even vperp and odd w");
  if (!(vperp.grid() == w.grid())) throw Error(ErrorCode::Grid, "reduced state: grid mismatch");
}

ReducedState ReducedState::zero(const Grid& grid, double Omega) {
  return {Omega, ScalarField::zero(grid, Parity::Even, true), ScalarField::zero(grid, Parity::Odd)};
}

EliminatedState::EliminatedState(double deltaV_, ScalarField u_, double v0_)
    : deltaV(deltaV_),
      u(ScalarField(u_.grid(), {u_.values().begin(), u_.values().end()}, Parity::Odd, true)),
      v0(v0_) {
  if (u_.parity() == Parity::Even) throw Error(ErrorCode::Parity, "eliminated state needs odd u");
}

EliminatedState EliminatedState::zero(const Grid& grid) {
  return {0.0, ScalarField::zero(grid, Parity::Odd), 0.0};
}

double EliminationResidual::sup() const {
  return std::max({std::abs(F1), F2.sup_norm(), std::abs(F3)});
}

FramePerturbation combine(const ReducedState& rs, const EliminatedState& es) {
  return FramePerturbation(es.u, es.v0, rs.vperp, rs.w);
}

EliminationResidual elimination_residual(const ReducedState& rs, const EliminatedState& es) {
  if (!(rs.grid() == es.u.grid())) throw Error(ErrorCode::Grid, "elimination residual: grid mismatch");
  const Grid& grid = rs.grid();
  const double R = grid.radius();
  const ScalarField v = rs.vperp + ScalarField::constant(grid, es.v0);
  const ScalarField u_s = differentiate(es.u, 1);
  const ScalarField w_s = differentiate(rs.w, 1);
  const ScalarField a = u_s - (1.0 / R) * v;
  const ScalarField b = differentiate(rs.vperp, 1) + (1.0 / R) * es.u;
  const ScalarField Q = 0.5 * (product(a, a) + product(b, b) + product(w_s, w_s));
  const double Q_mean = mean(Q);

  const double F1 = rs.Omega * mean(product(rs.vperp, w_s)) + es.deltaV * (1.0 - es.v0 / R);
  ScalarField F2 = (u_s - (1.0 / R) * rs.vperp + Q).projected(Parity::Even, true);
  const double F3 = -es.v0 / R + Q_mean;
  return {F1, std::move(F2), F3};
}

Elimination eliminate(const ReducedState& rs, const EliminationOptions& options,
                      const std::optional<EliminatedState>& guess) {
  const Grid& grid = rs.grid();
  const double R = grid.radius();
  const int L = grid.dealias_cutoff();

  const double size = std::max(rs.vperp.sup_norm(), rs.w.sup_norm());
  if (size > options.domain_radius * R) {
    std::ostringstream msg;
    msg << "sup(|vperp|,|w|) = " << size << " exceeds the elimination domain "
        << options.domain_radius * R;
    throw Error(ErrorCode::IftDomain, msg.str());
  }
  const double excess = std::max(band_excess(rs.vperp, L), band_excess(rs.w, L));
  if (excess > 1e-13 * std::max(size, 1.0))
    throw Error(ErrorCode::Resolution, "reduced state carries modes above the dealiasing cutoff");

  Elimination out{guess ? *guess : EliminatedState::zero(grid), 0, {}};
  for (int it = 0; it <= options.max_iterations; ++it) {
    const EliminationResidual r = elimination_residual(rs, out.state);
    const double norm = r.sup();
    out.residual_history.push_back(norm);
    out.iterations = it;
    if (!std::isfinite(norm)) break;
    if (norm <= options.tol) return out;
    if (it == options.max_iterations) break;

    const Eigen::MatrixXd J = elimination_jacobian(rs, out.state);
    const Eigen::VectorXd step = J.partialPivLu().solve(-pack(r, L));
    std::vector<double> du(step.data() + 1, step.data() + 1 + L);
    out.state.deltaV += step[0];
    out.state.u += ScalarField::sine_series(grid, du);
    out.state.v0 += step[L + 1];
  }
  std::ostringstream msg;
  msg << "elimination Newton did not reach " << options.tol << " in " << options.max_iterations
      << " iterations (last residual " << out.residual_history.back() << ")";
  throw Error(ErrorCode::IftDomain, msg.str());
}

FieldPair reduced_residual(const ReducedState& rs, const EliminatedState& es) {
  const Residuals r = residuals(combine(rs, es), rs.Omega, es.deltaV);
  const double n_mean = mean(r.N);
  return {(r.N - ScalarField::constant(rs.grid(), n_mean)).projected(Parity::Even, true),
          r.B.projected(Parity::Odd, true)};
}

FieldPair reduced_residual(const ReducedState& rs, const EliminationOptions& options) {
  return reduced_residual(rs, eliminate(rs, options).state);
}

}  // namespace screwbif
