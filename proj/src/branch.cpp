#include "screwbif/branch.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "screwbif/error.hpp"
#include "screwbif/linear.hpp"
#include "screwbif/parallel.hpp"

namespace screwbif {
namespace {

using Vector = Eigen::VectorXd;
using ResidualFn = std::function<Vector(const Vector&)>;

void require_branch_resolution(int k, const Grid& grid) {
  if (k < 2) throw Error(ErrorCode::Mode, "branch needs k >= 2");
  if (2 * k > grid.dealias_cutoff()) {
    const int needed = std::max(16, 6 * k + (6 * k) % 2);
    std::ostringstream msg;
    msg << "an N=" << grid.size() << " grid resolves modes up to " << grid.dealias_cutoff()
        << " after dealiasing, but the k=" << k << " branch needs mode " << 2 * k
        << "; use N >= " << needed;
    throw Error(ErrorCode::Resolution, msg.str());
  }
}

std::vector<double> segment(const Vector& x, int offset, int count) {
  return {x.data() + offset, x.data() + offset + count};
}

void put(Vector& x, int offset, const std::vector<double>& values) {
  for (size_t i = 0; i < values.size(); ++i) x[offset + static_cast<int>(i)] = values[i];
}

double amplitude_of(const ReducedState& rs, const KernelVector& phi, double phi_norm2) {
  return h2_inner(FieldPair{rs.vperp, rs.w}, phi.fields) / phi_norm2;
}

Vector fd_jacobian(const ResidualFn& F, const Vector& x, const Vector& fx, double h) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd J(fx.size(), n);
  parallel_for(n, [&](int j) {
    Vector xp = x;
    const double step = h * std::max(1.0, std::abs(x[j]));
    xp[j] += step;
    J.col(j) = (F(xp) - fx) / step;
  });
  return Eigen::Map<Vector>(J.data(), J.size());
}

struct NewtonResult {
  Vector x;
  double norm;
  int iterations;
};

// Newton on a square system with a forward-difference Jacobian. The callback
// `accept` is invoked whenever a new iterate is taken so that callers can
// refresh warm-start state.
NewtonResult fd_newton(Vector x, const ResidualFn& F, const BranchOptions& opt,
                       const std::function<void(const Vector&)>& accept, const char* what) {
  Vector r = F(x);
  double norm = r.lpNorm<Eigen::Infinity>();
  int iterations = 0;
  int polished = 0;
  while (true) {
    if (!std::isfinite(norm)) break;
    if (norm <= opt.tol_outer && polished >= opt.polish_steps) break;
    if (iterations >= opt.max_outer) break;

    const Vector flat = fd_jacobian(F, x, r, opt.fd_step);
    const Eigen::Map<const Eigen::MatrixXd> J(flat.data(), r.size(), x.size());
    const Vector dx = J.partialPivLu().solve(-r);
    Vector x_new = x + dx;
    Vector r_new;
    try {
      r_new = F(x_new);
    } catch (const Error& e) {
      if (norm <= opt.tol_outer) break;
      throw Error(ErrorCode::NoConverge, std::string(what) + ": " + e.what());
    }
    const double norm_new = r_new.lpNorm<Eigen::Infinity>();
    ++iterations;
    if (norm <= opt.tol_outer) {
      ++polished;
      if (!(norm_new < norm)) break;
    }
    x = std::move(x_new);
    r = std::move(r_new);
    norm = norm_new;
    accept(x);
  }
  if (!(norm <= opt.tol_outer)) {
    std::ostringstream msg;
    msg << what << ": Newton residual " << norm << " after " << iterations
        << " iterations (tolerance " << opt.tol_outer << ")";
    throw Error(ErrorCode::NoConverge, msg.str());
  }
  return {std::move(x), norm, iterations};
}

BranchPoint finalize(int k, int sign, double lambda, ReducedState rs, EliminatedState es,
                     int iterations, double tol_outer) {
  const Grid& grid = rs.grid();
  const double R = grid.radius();
  const FramePerturbation p = combine(rs, es);
  const Residuals r = residuals(p, rs.Omega, es.deltaV);
  const double residual_sup = r.nbc_sup();
  if (!(residual_sup <= tol_outer)) {
    std::ostringstream msg;
    msg << "converged iterate has field residual " << residual_sup;
    throw Error(ErrorCode::NoConverge, msg.str());
  }
  const ScalarField stretch = tangential_stretch(p);
  const double min_stretch = *std::min_element(stretch.values().begin(), stretch.values().end());
  if (min_stretch < 0.5) {
    std::ostringstream msg;
    msg << "1 + u_s - v/R reaches " << min_stretch << " < 1/2 at lambda = " << lambda;
    throw Error(ErrorCode::Geometry, msg.str());
  }
  const Curve3 y = assemble_curve(p);
  const double V = 1.0 / R + es.deltaV;
  const SlipVelocity slip = slip_velocity(y, rs.Omega, V);
  const double dist = orbit_distance(y).dist;
  return BranchPoint{k,
                     sign,
                     lambda,
                     std::move(rs),
                     std::move(es),
                     slip.c,
                     V,
                     residual_sup,
                     r.T.sup_norm(),
                     slip.variation,
                     slip.speed_defect,
                     min_stretch,
                     dist,
                     iterations};
}

}  // namespace

double delta_v_coefficient(int k, double R) {
  const double k2 = static_cast<double>(k) * k;
  return -k2 * (k2 - 1.0) / (2.0 * R * R * R);
}

BranchPoint solve_branch_point(int k, double R, double lambda, const BranchOptions& options,
                               const BranchPoint* predictor) {
  const Grid grid(R, options.grid_points);
  require_branch_resolution(k, grid);
  const int sign = options.sign < 0 ? -1 : 1;
  const int L = grid.dealias_cutoff();
  const KernelVector phi = kernel_vector(k, grid, sign);
  const double phi_norm2 = h2_inner(phi.fields, phi.fields);
  const double omega_k = sign * critical_omega(k, R);

  if (lambda == 0.0)
    return finalize(k, sign, 0.0, ReducedState::zero(grid, omega_k), EliminatedState::zero(grid), 0,
                    options.tol_outer);

  // Unknowns: [Omega, cos modes of vperp (1..L), sine modes of w (1..L)].
  const bool warm = predictor != nullptr && predictor->k == k && predictor->sign == sign &&
                    predictor->grid() == grid;
  Vector x(2 * L + 1);
  std::optional<EliminatedState> guess;
  if (warm) {
    const double dl = lambda - predictor->lambda;
    x[0] = predictor->Omega();
    put(x, 1, (predictor->rs.vperp + dl * phi.fields.first).cosine_modes(L));
    put(x, 1 + L, (predictor->rs.w + dl * phi.fields.second).sine_modes(L));
    guess = predictor->es;
  } else {
    x[0] = omega_k;
    put(x, 1, (lambda * phi.fields.first).cosine_modes(L));
    put(x, 1 + L, (lambda * phi.fields.second).sine_modes(L));
  }

  auto unpack = [&](const Vector& v) {
    return ReducedState(v[0], ScalarField::cosine_series(grid, segment(v, 1, L)),
                        ScalarField::sine_series(grid, segment(v, 1 + L, L)));
  };
  auto evaluate = [&](const Vector& v, const std::optional<EliminatedState>& start) {
    const ReducedState rs = unpack(v);
    Elimination elim = eliminate(rs, options.inner, start);
    const FieldPair g = reduced_residual(rs, elim.state);
    Vector out(2 * L + 1);
    put(out, 0, g.first.cosine_modes(L));
    put(out, L, g.second.sine_modes(L));
    out[2 * L] = amplitude_of(rs, phi, phi_norm2) - lambda;
    return std::make_pair(out, std::move(elim.state));
  };

  try {
    guess = evaluate(x, guess).second;
  } catch (const Error& e) {
    throw Error(ErrorCode::NoConverge, std::string("initial iterate: ") + e.what());
  }
  const ResidualFn F = [&](const Vector& v) { return evaluate(v, guess).first; };
  const NewtonResult result = fd_newton(
      x, F, options, [&](const Vector& v) { guess = evaluate(v, guess).second; },
      "reduced branch solve");

  ReducedState rs = unpack(result.x);
  EliminatedState es = eliminate(rs, options.inner, guess).state;
  return finalize(k, sign, lambda, std::move(rs), std::move(es), result.iterations,
                  options.tol_outer);
}

BranchSweep sweep_branch(int k, double R, double lambda_max, int n_points,
                         const BranchOptions& options) {
  if (n_points < 4) throw Error(ErrorCode::InvalidArgument, "sweep needs at least 4 points");
  if (!(lambda_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda_max must be positive");

  BranchSweep sweep{k, R, options.sign < 0 ? -1 : 1, {0.0}, {}, std::numeric_limits<double>::quiet_NaN(), false, {}};
  for (int j = n_points - 1; j >= 0; --j) sweep.lambdas.push_back(lambda_max * std::ldexp(1.0, -j));

  sweep.points.push_back(solve_branch_point(k, R, 0.0, options));
  for (size_t i = 1; i < sweep.lambdas.size(); ++i) {
    try {
      sweep.points.push_back(solve_branch_point(k, R, sweep.lambdas[i], options, &sweep.points.back()));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Resolution || e.code() == ErrorCode::Mode) throw;
      sweep.truncated = true;
      std::ostringstream msg;
      msg << "sweep stopped at lambda = " << sweep.lambdas[i] << " (" << e.what()
          << "); reachable lambda = " << sweep.reachable_lambda();
      sweep.warning = msg.str();
      break;
    }
  }

  if (sweep.points.size() >= 4) {
    std::vector<double> ls, qs;
    for (size_t i = 1; i <= 3; ++i) {
      ls.push_back(sweep.points[i].lambda);
      qs.push_back(sweep.points[i].deltaV() / (sweep.points[i].lambda * sweep.points[i].lambda));
    }
    sweep.dVcoeff_estimate = richardson_limit(ls, qs);
  }
  return sweep;
}

BranchPoint monolithic_crosscheck(int k, double R, double lambda, const BranchOptions& options) {
  const Grid grid(R, options.grid_points);
  require_branch_resolution(k, grid);
  const int sign = options.sign < 0 ? -1 : 1;
  const int L = grid.dealias_cutoff();
  const KernelVector phi = kernel_vector(k, grid, sign);
  const double phi_norm2 = h2_inner(phi.fields, phi.fields);
  const double omega_k = sign * critical_omega(k, R);

  if (lambda == 0.0)
    return finalize(k, sign, 0.0, ReducedState::zero(grid, omega_k), EliminatedState::zero(grid), 0,
                    options.tol_outer);

  // Unknowns: [Omega, deltaV, v0, sine modes of u, cos modes of vperp, sine modes of w].
  const int n = 3 * L + 3;
  Vector x = Vector::Zero(n);
  x[0] = omega_k;
  put(x, 3 + L, (lambda * phi.fields.first).cosine_modes(L));
  put(x, 3 + 2 * L, (lambda * phi.fields.second).sine_modes(L));

  auto unpack = [&](const Vector& v) {
    ReducedState rs(v[0], ScalarField::cosine_series(grid, segment(v, 3 + L, L)),
                    ScalarField::sine_series(grid, segment(v, 3 + 2 * L, L)));
    EliminatedState es(v[1], ScalarField::sine_series(grid, segment(v, 3, L)), v[2]);
    return std::make_pair(std::move(rs), std::move(es));
  };
  const ResidualFn F = [&](const Vector& v) {
    const auto [rs, es] = unpack(v);
    const Residuals r = residuals(combine(rs, es), rs.Omega, es.deltaV);
    Vector out(n);
    out[0] = mean(r.N);
    put(out, 1, r.N.cosine_modes(L));
    put(out, 1 + L, r.B.sine_modes(L));
    out[1 + 2 * L] = mean(r.C);
    put(out, 2 + 2 * L, r.C.cosine_modes(L));
    out[n - 1] = amplitude_of(rs, phi, phi_norm2) - lambda;
    return out;
  };
  const NewtonResult result = fd_newton(x, F, options, [](const Vector&) {}, "monolithic solve");
  auto [rs, es] = unpack(result.x);
  return finalize(k, sign, lambda, std::move(rs), std::move(es), result.iterations,
                  options.tol_outer);
}

double richardson_limit(const std::vector<double>& lambdas, const std::vector<double>& values) {
  if (lambdas.size() != values.size() || lambdas.empty())
    throw Error(ErrorCode::InvalidArgument, "richardson_limit: mismatched inputs");
  // Neville's scheme at h = 0 with nodes h_i = lambda_i^2.
  std::vector<double> p = values;
  const size_t n = p.size();
  for (size_t m = 1; m < n; ++m) {
    for (size_t i = 0; i + m < n; ++i) {
      const double hi = lambdas[i] * lambdas[i];
      const double hj = lambdas[i + m] * lambdas[i + m];
      p[i] = (hj * p[i] - hi * p[i + 1]) / (hj - hi);
    }
  }
  return p[0];
}

}  // namespace screwbif
