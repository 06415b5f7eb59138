#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "screwbif/error.hpp"
#include "screwbif/linear.hpp"
#include "screwbif/reduction.hpp"

using namespace screwbif;
using oracle::sup_diff;

namespace {

ReducedState kernel_state(const Grid& g, int k, double Om, double lam) {
  const KernelVector phi = kernel_vector(k, g);
  return ReducedState(Om, lam * phi.fields.first, lam * phi.fields.second);
}

}  // namespace

TEST_CASE("state types enforce parity") {
  const Grid g(1.0, 32);
  const ScalarField e = ScalarField::sample(g, [](double s) { return std::cos(s); }, Parity::Even, true);
  const ScalarField o = ScalarField::sample(g, [](double s) { return std::sin(s); }, Parity::Odd);
  CHECK_NOTHROW(ReducedState(1.0, e, o));
  CHECK_THROWS_AS(ReducedState(1.0, o, o), Error);
  CHECK_THROWS_AS(EliminatedState(0.0, e, 0.0), Error);
}

TEST_CASE("F map: examples") {
  const Grid g(1.0, 64);
  for (double Om : {0.0, 1.7, -4.0}) {
    const EliminationResidual r = elimination_residual(ReducedState::zero(g, Om), EliminatedState::zero(g));
    CHECK(r.sup() == 0.0);
  }
  const EliminatedState d(0.3, ScalarField::zero(g, Parity::Odd), 0.0);
  const EliminationResidual r = elimination_residual(ReducedState::zero(g, 1.0), d);
  CHECK(r.F1 == doctest::Approx(0.3));
  CHECK(r.F2.sup_norm() == 0.0);
  CHECK(r.F3 == 0.0);

  const double Om = critical_omega(2, 1.0), lam = 0.01;
  const EliminationResidual rk = elimination_residual(kernel_state(g, 2, Om, lam), EliminatedState::zero(g));
  CHECK(rk.F1 == doctest::Approx(Om * 2 * std::sqrt(3.0) * lam * lam).epsilon(1e-12));
  CHECK(rk.F2.parity() == Parity::Even);
  CHECK(std::abs(mean(rk.F2)) <= 1e-17);
}

TEST_CASE("eliminate: trivial branch") {
  const Grid g(1.0, 64);
  const Elimination e = eliminate(ReducedState::zero(g, 2.0));
  CHECK(e.state.deltaV == 0.0);
  CHECK(e.state.v0 == 0.0);
  CHECK(e.state.u.sup_norm() == 0.0);
  CHECK(e.iterations == 0);
}

TEST_CASE("eliminate: first-order derivative of the implicit function") {
  const double R = 1.4;
  const Grid g(R, 64);
  std::mt19937_64 rng(8);
  const ScalarField hv = oracle::random_poly(rng, R, 6, Parity::Even).sample(g, 0, Parity::Even, true);
  const ScalarField hw = oracle::random_poly(rng, R, 6, Parity::Odd).sample(g, 0, Parity::Odd);
  const ScalarField u1 = (1 / R) * antiderivative(hv);
  std::vector<double> defect;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const EliminatedState es = eliminate(ReducedState(0.9, eps * hv, eps * hw)).state;
    defect.push_back(std::max({std::abs(es.deltaV), sup_diff(es.u, eps * u1), std::abs(es.v0)}) / eps);
  }
  // (phi(eps h) - eps D phi h) / eps = O(eps).
  CHECK(defect[0] / defect[1] == doctest::Approx(10.0).epsilon(0.2));
  CHECK(defect[1] / defect[2] == doctest::Approx(10.0).epsilon(0.2));
}

TEST_CASE("eliminate: converged residual and quadratic convergence") {
  const Grid g(1.0, 64);
  const Elimination e = eliminate(kernel_state(g, 2, critical_omega(2, 1.0), 0.03));
  CHECK(elimination_residual(kernel_state(g, 2, critical_omega(2, 1.0), 0.03), e.state).sup() <= 1e-12);
  REQUIRE(e.residual_history.size() >= 3);
  // Each Newton step roughly squares the error until roundoff.
  const auto& h = e.residual_history;
  CHECK(h[2] <= 10 * h[1] * h[1] / h[0] + 1e-13);
  CHECK(e.state.u.parity() == Parity::Odd);
}

TEST_CASE("eliminate: domain and resolution guards") {
  const Grid g(1.0, 32);
  try {
    (void)eliminate(kernel_state(g, 2, 1.0, 1.0));
    FAIL("expected E_IFT_DOMAIN");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IftDomain);
  }
  // Mode 12 exceeds the N=32 dealiasing cutoff of 10.
  const ScalarField high = ScalarField::sample(g, [](double s) { return 0.01 * std::cos(12 * s); }, Parity::Even, true);
  try {
    (void)eliminate(ReducedState(1.0, high, ScalarField::zero(g, Parity::Odd)));
    FAIL("expected E_RESOLUTION");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Resolution);
  }
  EliminationOptions tight;
  tight.max_iterations = 1;
  tight.tol = 1e-15;
  CHECK_THROWS_AS(eliminate(kernel_state(g, 2, 1.0, 0.05), tight), Error);
}

TEST_CASE("G map: trivial value and linearization") {
  const Grid g(1.0, 64);
  const FieldPair z = reduced_residual(ReducedState::zero(g, 1.3), EliminationOptions{});
  CHECK(z.first.sup_norm() + z.second.sup_norm() == 0.0);

  for (double Om : {0.8, critical_omega(3, 1.0)}) {
    const KernelVector phi = kernel_vector(3, g);
    const FieldPair L = apply_linear_operator(Om, phi.fields.first, phi.fields.second);
    std::vector<double> err;
    for (double eps : {1e-3, 1e-4}) {
      const FieldPair G = reduced_residual(kernel_state(g, 3, Om, eps), EliminationOptions{});
      err.push_back(std::max(sup_diff((1 / eps) * G.first, L.first), sup_diff((1 / eps) * G.second, L.second)));
    }
    CHECK(err[1] < err[0]);
    CHECK(err[1] <= 1e-2);
    const FieldPair G = reduced_residual(kernel_state(g, 3, Om, 1e-3), EliminationOptions{});
    CHECK(G.first.parity() == Parity::Even);
    CHECK(std::abs(mean(G.first)) <= 1e-16);
    CHECK(G.second.parity() == Parity::Odd);
  }
}

TEST_CASE("combine reproduces the eliminated variables") {
  const Grid g(1.0, 32);
  const ReducedState rs = kernel_state(g, 2, 1.0, 0.02);
  const EliminatedState es = eliminate(rs).state;
  const FramePerturbation p = combine(rs, es);
  CHECK(p.v0 == es.v0);
  CHECK(sup_diff(p.u, es.u) <= 1e-17);
  CHECK(sup_diff(p.vperp, rs.vperp) <= 1e-17);
}
