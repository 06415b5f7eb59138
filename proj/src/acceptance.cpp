#include "screwbif/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "screwbif/branch.hpp"
#include "screwbif/error.hpp"
#include "screwbif/evolution.hpp"
#include "screwbif/linear.hpp"
#include "screwbif/reduction.hpp"

namespace screwbif {
namespace {

constexpr double kPi = std::numbers::pi;

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome critical_values() {
  double worst_omega = 0.0, worst_det = 0.0;
  for (double R : {0.5, 1.0, 2.0})
    for (int k = 2; k <= 8; ++k) {
      const double Om = critical_omega(k, R);
      const long double ref = std::sqrt(static_cast<long double>(k) * k - 1.0L) / (static_cast<long double>(R) * R);
      worst_omega = std::max(worst_omega, static_cast<double>(std::abs((Om - ref) / ref)));
      for (int l = 1; l <= 20; ++l) {
        const double l2 = static_cast<double>(l) * l;
        const double expect = l2 * (l2 - k * k) / (R * R * R * R);
        const double d = mode_determinant(l, Om, R);
        // Relative to the size of the cancelling products l^2 (l^2 - 1) / R^4.
        const double scale = std::max(1.0, l2 * l2 / (R * R * R * R));
        worst_det = std::max(worst_det, std::abs(d - expect) / scale);
      }
    }
  return {worst_omega <= 1e-14 && worst_det <= 1e-12,
          "max rel err Omega_k " + sci(worst_omega) + ", det M_l " + sci(worst_det)};
}

Outcome kernel_transversality(int N) {
  double worst_kernel = 0.0, worst_pair = 0.0;
  for (double R : {0.5, 1.0, 2.0}) {
    const Grid grid(R, N);
    for (int k = 2; k <= 8; ++k) {
      const KernelVector phi = kernel_vector(k, grid);
      const double Om = critical_omega(k, R);
      const FieldPair Lphi = apply_linear_operator(Om, phi.fields.first, phi.fields.second);
      worst_kernel = std::max({worst_kernel, Lphi.first.sup_norm(), Lphi.second.sup_norm()});
      const FieldPair dL = apply_omega_derivative(phi.fields.first, phi.fields.second);
      const double k2 = static_cast<double>(k) * k;
      const double expect = -2.0 * kPi * R * k2 * std::sqrt(k2 - 1.0) *
                            (1.0 + k2 / (R * R) + k2 * k2 / (R * R * R * R));
      worst_pair = std::max(worst_pair, rel(h2_inner(dL, phi.fields), expect));
    }
  }
  return {worst_kernel <= 1e-10 && worst_pair <= 1e-9,
          "sup|L Phi_k| " + sci(worst_kernel) + ", pairing rel err " + sci(worst_pair)};
}

Outcome implicit_function(int N) {
  const double R = 1.0;
  const Grid grid(R, N);
  const ScalarField hv = ScalarField::sample(
      grid, [](double s) { return std::cos(s) + 0.5 * std::cos(2 * s) - 0.3 * std::cos(3 * s); },
      Parity::Even, true);
  const ScalarField hw = ScalarField::sample(
      grid, [](double s) { return std::sin(s) - 0.4 * std::sin(2 * s); }, Parity::Odd);
  const ScalarField u1 = (1.0 / R) * antiderivative(hv);
  const double Om = critical_omega(2, R);
  std::vector<double> errs;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const EliminatedState es = eliminate(ReducedState(Om, eps * hv, eps * hw)).state;
    const double e = std::max({std::abs(es.deltaV), (es.u - eps * u1).sup_norm(), std::abs(es.v0)});
    errs.push_back(e / eps);
  }
  const double r1 = errs[0] / errs[1], r2 = errs[1] / errs[2];
  const bool pass = errs[2] < errs[1] && errs[1] < errs[0] && r1 > 5.0 && r1 < 20.0 && r2 > 5.0 && r2 < 20.0;
  return {pass, "defect/eps = " + sci(errs[0]) + ", " + sci(errs[1]) + ", " + sci(errs[2]) +
                    " (ratios " + sci(r1) + ", " + sci(r2) + ")"};
}

BranchOptions branch_options(int N) {
  BranchOptions o;
  o.grid_points = N;
  return o;
}

Outcome branch_residuals(int N, bool asymptotics) {
  std::ostringstream detail;
  bool pass = true;
  for (int k : {2, 3}) {
    const BranchSweep sweep = sweep_branch(k, 1.0, 0.05, 6, branch_options(N));
    if (sweep.truncated) pass = false;
    if (asymptotics) {
      const double target = delta_v_coefficient(k, 1.0);
      const double err = rel(sweep.dVcoeff_estimate, target);
      pass = pass && err <= 0.02;
      detail << "k=" << k << ": estimate " << sweep.dVcoeff_estimate << " vs " << target
             << " (rel " << sci(err) << ") ";
      continue;
    }
    double nbc = 0, t = 0, slip = 0, speed = 0, stretch = 1;
    for (const BranchPoint& p : sweep.points) {
      nbc = std::max(nbc, p.residual_sup);
      t = std::max(t, p.tangential_sup);
      slip = std::max(slip, p.slip_variation);
      speed = std::max(speed, p.speed_defect);
      stretch = std::min(stretch, p.min_stretch);
    }
    pass = pass && nbc <= 1e-10 && t <= 1e-9 && slip <= 1e-9 && speed <= 1e-9 && stretch >= 0.5;
    detail << "k=" << k << ": " << sweep.points.size() << " pts, NBC " << sci(nbc) << ", T "
           << sci(t) << ", slip " << sci(slip) << ", speed " << sci(speed) << ", stretch "
           << sci(stretch) << "; ";
  }
  return {pass, detail.str()};
}

Outcome oracle_equivalence(int N) {
  const BranchOptions o = branch_options(N);
  const BranchPoint a = solve_branch_point(2, 1.0, 0.02, o);
  const BranchPoint b = monolithic_crosscheck(2, 1.0, 0.02, o);
  const double d = std::max({std::abs(a.Omega() - b.Omega()), std::abs(a.deltaV() - b.deltaV()),
                             std::abs(a.c - b.c), std::abs(a.es.v0 - b.es.v0),
                             (a.es.u - b.es.u).sup_norm(), (a.rs.vperp - b.rs.vperp).sup_norm(),
                             (a.rs.w - b.rs.w).sup_norm()});
  return {d <= 1e-8, "max difference " + sci(d)};
}

Outcome screw_exactness(int N, int N_coarse) {
  EvolutionOptions eo;
  eo.output_interval = 0.5;
  const BranchPoint p = solve_branch_point(2, 1.0, 0.02, branch_options(N));
  const Curve3 y = p.profile();
  const auto states = integrate(y, 5.0, max_time_step(p.grid(), eo), eo);
  double err = 0.0;
  for (const EvolutionState& s : states)
    err = std::max(err, sup_distance(s.curve, screw_evaluate(y, p.screw(), s.t)));

  // Self-convergence: successive differences under dt halving on a coarse grid.
  const BranchPoint pc = solve_branch_point(2, 1.0, 0.02, branch_options(N_coarse));
  eo.output_interval = 5.0;
  const double dt = max_time_step(pc.grid(), eo);
  std::vector<Curve3> finals;
  for (double f : {1.0, 0.5, 0.25}) finals.push_back(integrate(pc.profile(), 5.0, dt * f, eo).back().curve);
  const double d1 = sup_distance(finals[0], finals[1]);
  const double d2 = sup_distance(finals[1], finals[2]);
  const double ratio = d1 / d2;
  return {err <= 1e-6 && std::abs(ratio - 16.0) <= 3.0,
          "sup error vs screw " + sci(err) + " (N=" + std::to_string(N) + "); dt-halving ratio " +
              sci(ratio) + " (N=" + std::to_string(N_coarse) + ")"};
}

Outcome dichotomy(int N) {
  const double lambda = 0.02;
  const BranchPoint p = solve_branch_point(2, 1.0, lambda, branch_options(N));
  EvolutionOptions eo;
  eo.output_interval = 0.25;
  const double dt_max = max_time_step(p.grid(), eo);
  const double dt = eo.output_interval / std::ceil(eo.output_interval / dt_max);
  const DriftReport rep = drift_report(p, 10.0, dt, eo);
  const double C = rep.dist_max / lambda;
  const bool pass = rep.dist_spread <= 1e-6 && std::isfinite(rep.t0) && rep.fitted_V < 1.0 &&
                    rel(rep.fitted_V, p.V) <= 0.01;
  std::ostringstream d;
  d << "dist spread " << sci(rep.dist_spread) << ", C = sup dist/|lambda| " << sci(C)
    << ", t0 " << rep.t0 << ", gamma " << sci(rep.gamma) << " vs |dV| " << sci(std::abs(p.deltaV()))
    << ", fitted_V " << rep.fitted_V;
  return {pass, d.str()};
}

Outcome symmetries(int N) {
  BranchOptions o = branch_options(N);
  const int k = 2;
  const double R = 1.0;
  const BranchPoint a = solve_branch_point(k, R, 0.02, o);
  const BranchPoint neg = solve_branch_point(k, R, -0.02, o);
  o.sign = -1;
  const BranchPoint mir = solve_branch_point(k, R, 0.02, o);

  const double mirror = std::max({std::abs(a.Omega() + mir.Omega()), std::abs(a.deltaV() - mir.deltaV()),
                                  std::abs(a.c + mir.c), std::abs(a.es.v0 - mir.es.v0),
                                  (a.es.u - mir.es.u).sup_norm(), (a.rs.vperp - mir.rs.vperp).sup_norm(),
                                  (a.rs.w + mir.rs.w).sup_norm()});
  const double sigma = kPi * R / k;
  const double flip = std::max({std::abs(a.Omega() - neg.Omega()), std::abs(a.deltaV() - neg.deltaV()),
                                std::abs(a.c - neg.c), std::abs(a.es.v0 - neg.es.v0),
                                (shift(a.es.u, sigma) - neg.es.u).sup_norm(),
                                (shift(a.rs.vperp, sigma) - neg.rs.vperp).sup_norm(),
                                (shift(a.rs.w, sigma) - neg.rs.w).sup_norm()});
  return {mirror <= 1e-9 && flip <= 1e-9,
          "mirror defect " + sci(mirror) + ", lambda -> -lambda shift defect " + sci(flip)};
}

const char* title_of(int id) {
  switch (id) {
    case 1: return "critical values";
    case 2: return "kernel and transversality";
    case 3: return "implicit-function reduction";
    case 4: return "branch residuals";
    case 5: return "deltaV asymptotics";
    case 6: return "oracle equivalence";
    case 7: return "screw exactness under evolution";
    case 8: return "orbital bound and axial drift";
    case 9: return "symmetry regressions";
    default: return "unknown";
  }
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out{false, ""};
  try {
    switch (id) {
      case 1: out = critical_values(); break;
      case 2: out = kernel_transversality(64); break;
      case 3: out = implicit_function(64); break;
      case 4: out = branch_residuals(options.grid_points, false); break;
      case 5: out = branch_residuals(options.grid_points, true); break;
      case 6: out = oracle_equivalence(options.grid_points); break;
      case 7: out = screw_exactness(options.grid_points, options.coarse_points); break;
      case 8: out = dichotomy(options.grid_points); break;
      case 9: out = symmetries(options.symmetry_points); break;
      default: throw Error(ErrorCode::InvalidArgument, "criterion id must be 1..9");
    }
  } catch (const Error& e) {
    out = {false, e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {id, title_of(id), out.pass, out.detail, secs};
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  std::vector<CriterionResult> results;
  for (int id = 1; id <= 9; ++id) results.push_back(run_criterion(id, options));
  return results;
}

std::string format_result(const CriterionResult& r) {
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2f", r.seconds);
  return std::string(r.pass ? "PASS" : "FAIL") + " [" + std::to_string(r.id) + "] " + r.title +
         ": " + r.detail + " (" + secs + " s)";
}

}  // namespace screwbif
