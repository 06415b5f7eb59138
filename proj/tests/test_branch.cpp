#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracle.hpp"
#include "screwbif/branch.hpp"
#include "screwbif/error.hpp"
#include "screwbif/linear.hpp"
#include "screwbif/parallel.hpp"

using namespace screwbif;
using oracle::pi;
using oracle::sup_diff;

namespace {

BranchOptions opts(int N, int sign = 1) {
  BranchOptions o;
  o.grid_points = N;
  o.sign = sign;
  return o;
}

void check_converged(const BranchPoint& p) {
  CHECK(p.residual_sup <= 1e-10);
  CHECK(p.tangential_sup <= 1e-9);
  CHECK(p.slip_variation <= 1e-9);
  CHECK(p.speed_defect <= 1e-9);
  CHECK(p.min_stretch >= 0.5);
  CHECK(p.V == doctest::Approx(1.0 / p.grid().radius() + p.deltaV()).epsilon(1e-15));
}

// Sweep shared by several test cases.
const BranchSweep& sweep_k2() {
  static const BranchSweep s = sweep_branch(2, 1.0, 0.05, 6, opts(64));
  return s;
}

}  // namespace

TEST_CASE("delta-V coefficient closed form") {
  CHECK(delta_v_coefficient(2, 1.0) == -6.0);
  CHECK(delta_v_coefficient(3, 1.0) == -36.0);
  CHECK(delta_v_coefficient(2, 2.0) == doctest::Approx(-0.75));
}

TEST_CASE("Richardson extrapolation is exact on polynomials in lambda^2") {
  const std::vector<double> l{0.01, 0.02, 0.04};
  std::vector<double> q;
  for (double x : l) q.push_back(-6.0 + 3.0 * x * x - 40.0 * x * x * x * x);
  CHECK(richardson_limit(l, q) == doctest::Approx(-6.0).epsilon(1e-12));
  CHECK(richardson_limit({0.1}, {2.5}) == 2.5);
  CHECK_THROWS_AS(richardson_limit({0.1, 0.2}, {1.0}), Error);
}

TEST_CASE("lambda = 0 gives the trivial point") {
  for (double R : {0.5, 1.0, 2.0}) {
    const BranchPoint p = solve_branch_point(2, R, 0.0, opts(64));
    CHECK(p.Omega() == critical_omega(2, R));
    CHECK(p.deltaV() == 0.0);
    CHECK(p.V == doctest::Approx(1.0 / R));
    CHECK(p.c == doctest::Approx(-R * critical_omega(2, R)).epsilon(1e-13));
    CHECK(p.residual_sup == 0.0);
    CHECK(p.rs.vperp.sup_norm() + p.rs.w.sup_norm() + p.es.u.sup_norm() == 0.0);
    CHECK(p.dist_to_sigma <= 1e-12);
    const BranchPoint m = monolithic_crosscheck(2, R, 0.0, opts(64));
    CHECK(m.Omega() == p.Omega());
    CHECK(m.residual_sup == 0.0);
  }
}

TEST_CASE("single point at lambda = 0.01") {
  const double lam = 0.01;
  const BranchPoint p = solve_branch_point(2, 1.0, lam, opts(64));
  check_converged(p);
  CHECK(p.deltaV() == doctest::Approx(-6e-4).epsilon(0.05));
  CHECK(p.deltaV() < 0.0);
  // |Omega - Omega_k| = O(lambda); the measured value is far below lambda.
  CHECK(std::abs(p.Omega() - critical_omega(2, 1.0)) <= lam);
  // Amplitude normalization.
  const KernelVector phi = kernel_vector(2, p.grid());
  const double amp = h2_inner(FieldPair{p.rs.vperp, p.rs.w}, phi.fields) / h2_inner(phi.fields, phi.fields);
  CHECK(amp == doctest::Approx(lam).epsilon(1e-12));
  // The reduced residual vanishes at the converged state.
  const FieldPair G = reduced_residual(p.rs, p.es);
  CHECK(std::max(G.first.sup_norm(), G.second.sup_norm()) <= 1e-10);
  CHECK(elimination_residual(p.rs, p.es).sup() <= 1e-11);
}

TEST_CASE("sweep: invariants on every converged point") {
  const BranchSweep& s = sweep_k2();
  CHECK_FALSE(s.truncated);
  CHECK(s.warning.empty());
  REQUIRE(s.points.size() == 7);
  CHECK(s.lambdas.front() == 0.0);
  CHECK(s.lambdas.back() == 0.05);
  CHECK(s.reachable_lambda() == 0.05);
  double ratio_min = 1e300, ratio_max = 0.0;
  for (const BranchPoint& p : s.points) {
    check_converged(p);
    if (p.lambda == 0.0) continue;
    ratio_min = std::min(ratio_min, p.dist_to_sigma / p.lambda);
    ratio_max = std::max(ratio_max, p.dist_to_sigma / p.lambda);
    CHECK(p.deltaV() < 0.0);
  }
  // dist / |lambda| stays bounded (and nearly constant) along the branch.
  CHECK(ratio_max / ratio_min <= 1.05);
}

TEST_CASE("sweep: delta-V asymptotics") {
  CHECK(sweep_k2().dVcoeff_estimate == doctest::Approx(-6.0).epsilon(0.02));
  const BranchSweep s3 = sweep_branch(3, 1.0, 0.05, 6, opts(64));
  CHECK(s3.dVcoeff_estimate == doctest::Approx(-36.0).epsilon(0.02));
  const BranchSweep s2R = sweep_branch(2, 2.0, 0.05, 5, opts(64));
  CHECK(s2R.dVcoeff_estimate == doctest::Approx(delta_v_coefficient(2, 2.0)).epsilon(0.02));
}

TEST_CASE("sweep: remainder decays faster than lambda") {
  const BranchSweep& s = sweep_k2();
  std::vector<double> rel;
  for (const BranchPoint& p : s.points) {
    if (p.lambda == 0.0) continue;
    const KernelVector phi = kernel_vector(2, p.grid());
    const ScalarField rv = p.rs.vperp - p.lambda * phi.fields.first;
    const ScalarField rw = p.rs.w - p.lambda * phi.fields.second;
    rel.push_back(std::max(rv.sup_norm(), rw.sup_norm()) / p.lambda);
  }
  for (size_t i = 1; i < rel.size(); ++i) CHECK(rel[i - 1] < rel[i]);
  CHECK(rel.front() <= 0.01);
}

TEST_CASE("Omega offset is measured, only the O(lambda) bound is asserted") {
  const BranchSweep& s = sweep_k2();
  const double Ok = critical_omega(2, 1.0);
  for (const BranchPoint& p : s.points) CHECK(std::abs(p.Omega() - Ok) <= 10 * p.lambda + 1e-15);
}

TEST_CASE("monolithic oracle agrees with the reduced path") {
  const BranchOptions o = opts(64);
  const BranchPoint a = solve_branch_point(2, 1.0, 0.02, o);
  const BranchPoint b = monolithic_crosscheck(2, 1.0, 0.02, o);
  CHECK(b.residual_sup <= 1e-10);
  CHECK(std::abs(a.Omega() - b.Omega()) <= 1e-8);
  CHECK(std::abs(a.deltaV() - b.deltaV()) <= 1e-8);
  CHECK(std::abs(a.c - b.c) <= 1e-8);
  CHECK(std::abs(a.es.v0 - b.es.v0) <= 1e-8);
  CHECK(sup_diff(a.es.u, b.es.u) <= 1e-8);
  CHECK(sup_diff(a.rs.vperp, b.rs.vperp) <= 1e-8);
  CHECK(sup_diff(a.rs.w, b.rs.w) <= 1e-8);
}

TEST_CASE("lambda -> -lambda equals the half-period shift") {
  const BranchOptions o = opts(64);
  for (int k : {2, 3}) {
    const BranchPoint a = solve_branch_point(k, 1.0, 0.02, o);
    const BranchPoint b = solve_branch_point(k, 1.0, -0.02, o);
    const double sigma = pi / k;
    CHECK(std::abs(a.Omega() - b.Omega()) <= 1e-9);
    CHECK(std::abs(a.deltaV() - b.deltaV()) <= 1e-9);
    CHECK(std::abs(a.c - b.c) <= 1e-9);
    CHECK(sup_diff(shift(a.rs.vperp, sigma), b.rs.vperp) <= 1e-9);
    CHECK(sup_diff(shift(a.rs.w, sigma), b.rs.w) <= 1e-9);
    CHECK(sup_diff(shift(a.es.u, sigma), b.es.u) <= 1e-9);
  }
}

TEST_CASE("mirror branch from -Omega_k") {
  const BranchPoint a = solve_branch_point(2, 1.0, 0.02, opts(64));
  const BranchPoint m = solve_branch_point(2, 1.0, 0.02, opts(64, -1));
  check_converged(m);
  CHECK(m.sign == -1);
  CHECK(std::abs(a.Omega() + m.Omega()) <= 1e-9);
  CHECK(std::abs(a.deltaV() - m.deltaV()) <= 1e-9);
  CHECK(std::abs(a.c + m.c) <= 1e-9);
  CHECK(sup_diff(a.rs.vperp, m.rs.vperp) <= 1e-9);
  CHECK(sup_diff(a.rs.w, -1.0 * m.rs.w) <= 1e-9);
  CHECK(sup_diff(a.es.u, m.es.u) <= 1e-9);
}

TEST_CASE("predictor does not change the converged point") {
  const BranchOptions o = opts(64);
  const BranchPoint base = solve_branch_point(2, 1.0, 0.01, o);
  const BranchPoint cold = solve_branch_point(2, 1.0, 0.02, o);
  const BranchPoint warm = solve_branch_point(2, 1.0, 0.02, o, &base);
  CHECK(std::abs(cold.Omega() - warm.Omega()) <= 1e-12);
  CHECK(sup_diff(cold.rs.w, warm.rs.w) <= 1e-12);
}

TEST_CASE("errors") {
  try {
    (void)solve_branch_point(6, 1.0, 0.01, opts(32));
    FAIL("expected E_RESOLUTION");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Resolution);
    CHECK(std::string(e.what()).find("N >= 36") != std::string::npos);
  }
  CHECK_THROWS_AS(solve_branch_point(1, 1.0, 0.01, opts(32)), Error);
  CHECK_THROWS_AS(sweep_branch(2, 1.0, 0.05, 3, opts(32)), Error);

  // Far outside the implicit-function neighbourhood Newton cannot converge.
  try {
    (void)solve_branch_point(2, 1.0, 0.4, opts(32));
    FAIL("expected E_NO_CONVERGE");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoConverge);
  }
}

TEST_CASE("unreachable lambda_max truncates the sweep with a warning") {
  const BranchSweep s = sweep_branch(2, 1.0, 0.8, 5, opts(32));
  CHECK(s.truncated);
  CHECK_FALSE(s.warning.empty());
  CHECK(s.reachable_lambda() < 0.8);
  CHECK(s.points.size() >= 2);
  CHECK(std::isfinite(s.dVcoeff_estimate) == (s.points.size() >= 4));
}

TEST_CASE("parallel_for covers every index and rethrows") {
  std::vector<std::atomic<int>> hits(100);
  parallel_for(100, [&](int i) { hits[static_cast<size_t>(i)]++; });
  for (auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(10, [](int i) {
                    if (i == 7) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
  CHECK(thread_count() >= 1);
}
