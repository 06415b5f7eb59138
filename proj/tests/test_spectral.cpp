#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "screwbif/error.hpp"
#include "screwbif/linear.hpp"
#include "screwbif/spectral.hpp"

using namespace screwbif;
using oracle::pi;
using oracle::sup_diff;

namespace {

ScalarField cosine(const Grid& g, int l, double amp = 1.0) {
  return ScalarField::sample(g, [&](double s) { return amp * std::cos(l * s / g.radius()); },
                             Parity::Even, true);
}

ScalarField sine(const Grid& g, int l, double amp = 1.0) {
  return ScalarField::sample(g, [&](double s) { return amp * std::sin(l * s / g.radius()); },
                             Parity::Odd);
}

}  // namespace

TEST_CASE("grid geometry") {
  const Grid g(2.0, 64);
  CHECK(g.period() == doctest::Approx(4 * pi));
  CHECK(g.node(16) == doctest::Approx(pi));
  CHECK(g.max_mode() == 31);
  CHECK(g.dealias_cutoff() == 21);
  CHECK_THROWS_AS(Grid(1.0, 15), Error);
  CHECK_THROWS_AS(Grid(1.0, 8), Error);
  CHECK_THROWS_AS(Grid(-1.0, 32), Error);
}

TEST_CASE("parity tags are validated and enforced") {
  const Grid g(1.0, 32);
  CHECK_NOTHROW(cosine(g, 3));
  try {
    (void)ScalarField::sample(g, [](double s) { return std::sin(s); }, Parity::Even);
    FAIL("expected E_PARITY");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parity);
  }
  try {
    (void)ScalarField::sample(g, [](double s) { return 1.0 + std::cos(s); }, Parity::Even, true);
    FAIL("expected E_MEAN");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Mean);
  }
  const ScalarField o = sine(g, 2);
  CHECK(o[0] == 0.0);
  CHECK(o.mean_free());
}

TEST_CASE("differentiate: exact Fourier modes") {
  for (double R : {0.5, 1.0, 2.0}) {
    const Grid g(R, 64);
    for (int l = 1; l <= 10; ++l) {
      const ScalarField d = differentiate(cosine(g, l), 1);
      CHECK(d.parity() == Parity::Odd);
      CHECK(sup_diff(d, sine(g, l, -l / R)) <= 1e-11 * std::pow(l / R, 1));
    }
  }
  const Grid g(1.0, 32);
  CHECK(differentiate(ScalarField::constant(g, 3.0), 1).sup_norm() <= 1e-15);
  // x0 first component: second derivative is -(1/R^2) times itself.
  const ScalarField x = ScalarField::sample(g, [](double s) { return std::cos(s); });
  CHECK(sup_diff(differentiate(x, 2), -1.0 * x) <= 1e-13);
  CHECK_THROWS_AS(differentiate(x, 5), Error);
  CHECK_THROWS_AS(differentiate(x, 0), Error);
}

TEST_CASE("differentiate agrees with a direct DFT oracle") {
  std::mt19937_64 rng(7);
  const Grid g(1.3, 48);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = oracle::random_poly(rng, g.radius(), g.size() / 8, Parity::Any, true);
    const ScalarField f = p.sample(g);
    for (int order = 1; order <= 4; ++order) {
      const ScalarField d = differentiate(f, order);
      const double scale = std::max(1.0, d.sup_norm());
      CHECK(sup_diff(d, oracle::dft_derivative(f, order)) <= 1e-11 * scale);
      CHECK(sup_diff(d, p.sample(g, order)) <= 1e-11 * scale);
    }
  }
}

TEST_CASE("mean") {
  const Grid g(1.0, 32);
  CHECK(mean(ScalarField::constant(g, 3.0)) == doctest::Approx(3.0));
  CHECK(std::abs(mean(cosine(g, 4))) <= 1e-16);
  const KernelVector phi = kernel_vector(2, g);
  const double m = mean(product(phi.fields.first, differentiate(phi.fields.second, 1)));
  CHECK(m == doctest::Approx(2 * std::sqrt(3.0)).epsilon(1e-13));
}

TEST_CASE("antiderivative") {
  for (double R : {0.5, 1.0, 2.0}) {
    const Grid g(R, 64);
    for (int l = 1; l <= 8; ++l) CHECK(sup_diff(antiderivative(cosine(g, l)), sine(g, l, R / l)) <= 1e-13);
  }
  const Grid g(1.0, 32);
  CHECK(antiderivative(ScalarField::zero(g, Parity::Even, true)).sup_norm() == 0.0);
  const KernelVector phi = kernel_vector(2, g);
  CHECK(sup_diff(antiderivative(phi.fields.first), sine(g, 2)) <= 1e-14);

  try {
    (void)antiderivative(ScalarField::constant(g, 1.0));
    FAIL("expected E_MEAN");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Mean);
  }
  try {
    (void)antiderivative(sine(g, 3));
    FAIL("expected E_PARITY");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parity);
  }
}

TEST_CASE("h2_inner: closed forms") {
  const Grid g(1.0, 64);
  const KernelVector phi = kernel_vector(2, g);
  CHECK(h2_inner(phi.fields, phi.fields) == doctest::Approx(147 * pi).epsilon(1e-13));
  const FieldPair zero{ScalarField::zero(g, Parity::Even, true), ScalarField::zero(g, Parity::Odd)};
  CHECK(h2_inner(zero, phi.fields) == 0.0);
  const FieldPair dL = apply_omega_derivative(phi.fields.first, phi.fields.second);
  CHECK(h2_inner(dL, phi.fields) == doctest::Approx(-168 * std::sqrt(3.0) * pi).epsilon(1e-13));
  const Grid other(1.0, 32);
  CHECK_THROWS_AS(h2_inner(phi.fields, kernel_vector(2, other).fields), Error);
}

TEST_CASE("h2_inner agrees with the coefficient oracle on random polynomials") {
  std::mt19937_64 rng(11);
  for (double R : {0.7, 1.0, 1.9}) {
    const Grid g(R, 64);
    for (int trial = 0; trial < 4; ++trial) {
      const auto p = oracle::random_poly(rng, R, 8, Parity::Any, true);
      const auto q = oracle::random_poly(rng, R, 8, Parity::Any, true);
      const double expect = h2_pairing(p, q);
      const double got = h2_inner(p.sample(g), q.sample(g));
      CHECK(got == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("properties on random band-limited fields") {
  std::mt19937_64 rng(2024);
  const Grid g(1.0, 128);
  const int band = g.size() / 8;
  for (int trial = 0; trial < 10; ++trial) {
    const ScalarField e = oracle::random_poly(rng, 1.0, band, Parity::Even).sample(g, 0, Parity::Even, true);
    const ScalarField o1 = oracle::random_poly(rng, 1.0, band, Parity::Odd).sample(g, 0, Parity::Odd);
    const ScalarField o2 = oracle::random_poly(rng, 1.0, band, Parity::Odd).sample(g, 0, Parity::Odd);
    const ScalarField any = oracle::random_poly(rng, 1.0, band, Parity::Any, true).sample(g);

    // d/ds of the antiderivative returns the input.
    CHECK(sup_diff(differentiate(antiderivative(e), 1), e) <= 1e-12);
    // Derivatives have zero mean.
    CHECK(std::abs(mean(differentiate(any, 1))) <= 1e-15);
    // Parity algebra.
    CHECK(differentiate(e, 1).parity() == Parity::Odd);
    CHECK(differentiate(o1, 1).parity() == Parity::Even);
    const ScalarField oo = product(o1, o2);
    CHECK(oo.parity() == Parity::Even);
    CHECK(sup_diff(oo, ScalarField(g, {oo.values().begin(), oo.values().end()}, Parity::Even)) <= 1e-15);
    // Positivity.
    CHECK(h2_inner(any, any) > 0.0);
    // Shift by a full period is the identity; by sigma matches direct sampling.
    CHECK(sup_diff(shift(any, g.period()), any) <= 1e-12);
  }
  CHECK(h2_inner(ScalarField::zero(g), ScalarField::zero(g)) == 0.0);
}

TEST_CASE("product is dealiased and exact below the cutoff") {
  const Grid g(1.0, 48);  // cutoff 16
  const ScalarField a = cosine(g, 5), b = cosine(g, 7);
  const ScalarField ab = product(a, b);
  const ScalarField expect = ScalarField::sample(
      g, [](double s) { return 0.5 * (std::cos(2 * s) + std::cos(12 * s)); });
  CHECK(sup_diff(ab, expect) <= 1e-14);
  // 10 + 9 = 19 > 16: the sum frequency is removed.
  const ScalarField cd = product(cosine(g, 10), cosine(g, 9));
  CHECK(sup_diff(cd, ScalarField::sample(g, [](double s) { return 0.5 * std::cos(s); })) <= 1e-14);
  CHECK(effective_bandwidth(cd) == 1);
}

TEST_CASE("shift and resample") {
  const Grid g(1.0, 32);
  const ScalarField f = ScalarField::sample(g, [](double s) { return std::cos(3 * s) + std::sin(s); });
  const double sigma = 0.37;
  const ScalarField expect =
      ScalarField::sample(g, [&](double s) { return std::cos(3 * (s + sigma)) + std::sin(s + sigma); });
  CHECK(sup_diff(shift(f, sigma), expect) <= 1e-14);
  const Grid fine(1.0, 64);
  const ScalarField up = resample(f, fine);
  CHECK(sup_diff(up, ScalarField::sample(fine, [](double s) { return std::cos(3 * s) + std::sin(s); })) <= 1e-14);
  CHECK(sup_diff(resample(up, g), f) <= 1e-14);
}

TEST_CASE("cosine and sine series round-trip through the mode accessors") {
  const Grid g(1.5, 32);
  const std::vector<double> a{0.3, -0.2, 0.1}, b{1.0, 0.0, -0.5, 0.25};
  const ScalarField c = ScalarField::cosine_series(g, a);
  const ScalarField s = ScalarField::sine_series(g, b);
  const auto ca = c.cosine_modes(3);
  const auto sb = s.sine_modes(4);
  for (size_t i = 0; i < a.size(); ++i) CHECK(ca[i] == doctest::Approx(a[i]).epsilon(1e-14));
  for (size_t i = 0; i < b.size(); ++i) CHECK(sb[i] == doctest::Approx(b[i]).epsilon(1e-14));
  CHECK(c[0] == doctest::Approx(0.2));
  CHECK_THROWS_AS(ScalarField::cosine_series(g, std::vector<double>(16, 1.0)), Error);
}
