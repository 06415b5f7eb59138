#include "screwbif/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "screwbif/error.hpp"

namespace screwbif {
namespace {

// Exact pointwise product; used on padded grids where nothing aliases.
ScalarField pointwise(const ScalarField& f, const ScalarField& g) {
  std::vector<double> v(static_cast<size_t>(f.size()));
  for (int j = 0; j < f.size(); ++j) v[static_cast<size_t>(j)] = f[j] * g[j];
  return ScalarField(f.grid(), std::move(v), product_parity(f.parity(), g.parity()), false);
}

template <class Product>
Residuals compute_residuals(const FramePerturbation& p, double Omega, double deltaV, Product&& mul) {
  const Grid& grid = p.grid();
  const double R = grid.radius();
  const ScalarField v = p.v();
  const ScalarField u_s = differentiate(p.u, 1);
  const ScalarField u_ss = differentiate(p.u, 2);
  const ScalarField v_s = differentiate(p.vperp, 1);
  const ScalarField v_ss = differentiate(p.vperp, 2);
  const ScalarField w_s = differentiate(p.w, 1);
  const ScalarField w_ss = differentiate(p.w, 2);

  const ScalarField a = u_s - (1.0 / R) * v;        // t-component of z_s
  const ScalarField b = v_s + (1.0 / R) * p.u;      // n-component of z_s
  const ScalarField one = ScalarField::constant(grid, 1.0);

  ScalarField T = -u_ss + (1.0 / R) * v_s + Omega * mul(p.u, w_s) - deltaV * b;
  ScalarField N = -v_ss - (1.0 / R) * u_s - (R * Omega) * w_s + Omega * mul(v, w_s) +
                  deltaV * (one + a);
  ScalarField B = -w_ss + (R * Omega) * v_s - Omega * mul(p.u, u_s) - Omega * mul(v, v_s);
  ScalarField Q = 0.5 * (mul(a, a) + mul(b, b) + mul(w_s, w_s));
  ScalarField C = a + Q;

  return {T.projected(Parity::Odd, false), N.projected(Parity::Even, false),
          B.projected(Parity::Odd, false), C.projected(Parity::Even, false),
          Q.projected(Parity::Even, false)};
}

}  // namespace

Curve3 Curve3::derivative(int order) const {
  return {differentiate(x, order), differentiate(y, order), differentiate(z, order)};
}

Curve3 Curve3::translated(const Vec3& tau) const {
  const Grid& g = grid();
  return {x + ScalarField::constant(g, tau[0]), y + ScalarField::constant(g, tau[1]),
          z + ScalarField::constant(g, tau[2])};
}

Curve3 Curve3::rotated(double alpha) const {
  const double ca = std::cos(alpha);
  const double sa = std::sin(alpha);
  return {ca * x - sa * y, sa * x + ca * y, z};
}

Curve3 Curve3::shifted(double sigma) const {
  return {shift(x, sigma), shift(y, sigma), shift(z, sigma)};
}

Vec3 Curve3::centroid() const { return {mean(x), mean(y), mean(z)}; }

Curve3 operator+(const Curve3& a, const Curve3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Curve3 operator-(const Curve3& a, const Curve3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }

double sup_distance(const Curve3& a, const Curve3& b) {
  if (!(a.grid() == b.grid())) throw Error(ErrorCode::Grid, "sup_distance: grid mismatch");
  double d = 0.0;
  for (int j = 0; j < a.grid().size(); ++j) {
    const double dx = a.x[j] - b.x[j];
    const double dy = a.y[j] - b.y[j];
    const double dz = a.z[j] - b.z[j];
    d = std::max(d, std::sqrt(dx * dx + dy * dy + dz * dz));
  }
  return d;
}

double h2_norm(const Curve3& c) {
  return std::sqrt(std::max(0.0, h2_inner(c.x, c.x) + h2_inner(c.y, c.y) + h2_inner(c.z, c.z)));
}

namespace {
std::vector<double> speeds(const Curve3& c) {
  const Curve3 d = c.derivative(1);
  std::vector<double> out(static_cast<size_t>(c.grid().size()));
  for (int j = 0; j < c.grid().size(); ++j)
    out[static_cast<size_t>(j)] = std::sqrt(d.x[j] * d.x[j] + d.y[j] * d.y[j] + d.z[j] * d.z[j]);
  return out;
}
}  // namespace

double curve_length(const Curve3& c) {
  double acc = 0.0;
  for (double s : speeds(c)) acc += s;
  return acc * c.grid().spacing();
}

double arclength_defect(const Curve3& c) {
  double d = 0.0;
  for (double s : speeds(c)) d = std::max(d, std::abs(s - 1.0));
  return d;
}

FramePerturbation::FramePerturbation(ScalarField u_, double v0_, ScalarField vperp_, ScalarField w_)
    : u(std::move(u_)), v0(v0_), vperp(std::move(vperp_)), w(std::move(w_)) {
  if (!(u.grid() == vperp.grid()) || !(u.grid() == w.grid()))
    throw Error(ErrorCode::Grid, "perturbation components live on different grids");
  // Re-running the constructor validates the samples against the target
  // class before projecting, so a mislabelled field is rejected.
  auto enforce = [](ScalarField& f, Parity p, const char* name) {
    if (f.parity() != p && f.parity() != Parity::Any)
      throw Error(ErrorCode::Parity, std::string(name) + " must be " + to_string(p));
    f = ScalarField(f.grid(), {f.values().begin(), f.values().end()}, p, true);
  };
  enforce(u, Parity::Odd, "u");
  enforce(vperp, Parity::Even, "vperp");
  enforce(w, Parity::Odd, "w");
}

FramePerturbation FramePerturbation::zero(const Grid& grid) {
  return FramePerturbation(ScalarField::zero(grid, Parity::Odd), 0.0,
                           ScalarField::zero(grid, Parity::Even, true),
                           ScalarField::zero(grid, Parity::Odd));
}

ScalarField FramePerturbation::v() const {
  return vperp + ScalarField::constant(grid(), v0);
}

double Residuals::nbc_sup() const {
  return std::max({N.sup_norm(), B.sup_norm(), C.sup_norm()});
}

Curve3 circle_profile(const Grid& grid) {
  const double R = grid.radius();
  return {ScalarField::sample(grid, [R](double s) { return R * std::cos(s / R); }, Parity::Even),
          ScalarField::sample(grid, [R](double s) { return R * std::sin(s / R); }, Parity::Odd),
          ScalarField::zero(grid, Parity::Even, true)};
}

FrenetFrame frenet_frame(const Grid& grid) {
  const double R = grid.radius();
  Curve3 t{ScalarField::sample(grid, [R](double s) { return -std::sin(s / R); }, Parity::Odd),
           ScalarField::sample(grid, [R](double s) { return std::cos(s / R); }, Parity::Even),
           ScalarField::zero(grid, Parity::Even, true)};
  Curve3 n{ScalarField::sample(grid, [R](double s) { return -std::cos(s / R); }, Parity::Even),
           ScalarField::sample(grid, [R](double s) { return -std::sin(s / R); }, Parity::Odd),
           ScalarField::zero(grid, Parity::Even, true)};
  Curve3 b{ScalarField::zero(grid, Parity::Even, true), ScalarField::zero(grid, Parity::Even, true),
           ScalarField::constant(grid, 1.0)};
  return {std::move(t), std::move(n), std::move(b)};
}

Curve3 assemble_curve(const FramePerturbation& p) {
  const Grid& grid = p.grid();
  const FrenetFrame frame = frenet_frame(grid);
  const ScalarField v = p.v();
  // Exact pointwise products: the frame is a single mode, so the result stays
  // band-limited one mode above the perturbation.
  Curve3 y = circle_profile(grid);
  y.x += pointwise(p.u, frame.t.x) + pointwise(v, frame.n.x);
  y.y += pointwise(p.u, frame.t.y) + pointwise(v, frame.n.y);
  y.z += p.w;
  return {y.x.projected(Parity::Even, false), y.y.projected(Parity::Odd, false),
          y.z.projected(Parity::Odd, false)};
}

Residuals residuals(const FramePerturbation& p, double Omega, double deltaV) {
  return compute_residuals(p, Omega, deltaV, [](const ScalarField& f, const ScalarField& g) {
    return product(f, g);
  });
}

ScalarField tangential_stretch(const FramePerturbation& p) {
  const double R = p.grid().radius();
  return ScalarField::constant(p.grid(), 1.0) + differentiate(p.u, 1) - (1.0 / R) * p.v();
}

double tangential_identity_defect(const FramePerturbation& p, double Omega, double deltaV) {
  const Grid fine(p.grid().radius(), 2 * p.grid().size());
  const double R = fine.radius();
  const FramePerturbation q(resample(p.u, fine), p.v0, resample(p.vperp, fine), resample(p.w, fine));
  const Residuals r = compute_residuals(q, Omega, deltaV, pointwise);

  const ScalarField stretch = tangential_stretch(q);
  const ScalarField normal = differentiate(q.vperp, 1) + (1.0 / R) * q.u;
  const ScalarField w_s = differentiate(q.w, 1);
  const ScalarField lhs =
      pointwise(stretch, r.T) + pointwise(normal, r.N) + pointwise(w_s, r.B) + differentiate(r.C, 1);
  return lhs.sup_norm();
}

SlipVelocity slip_velocity(const Curve3& y, double Omega, double V) {
  const Curve3 ys = y.derivative(1);
  const int n = y.grid().size();
  std::vector<double> g(static_cast<size_t>(n));
  double speed_defect = 0.0;
  for (int j = 0; j < n; ++j) {
    // e3 x y = (-y2, y1, 0)
    const double rot = -ys.x[j] * y.y[j] + ys.y[j] * y.x[j];
    g[static_cast<size_t>(j)] = -(Omega * rot + V * ys.z[j]);
    const double speed = std::sqrt(ys.x[j] * ys.x[j] + ys.y[j] * ys.y[j] + ys.z[j] * ys.z[j]);
    speed_defect = std::max(speed_defect, std::abs(speed - 1.0));
  }
  double c = 0.0;
  for (double x : g) c += x;
  c /= n;
  double variation = 0.0;
  for (double x : g) variation = std::max(variation, std::abs(x - c));
  return {c, variation, speed_defect};
}

Curve3 screw_evaluate(const Curve3& y, const ScrewParams& sp, double t) {
  if (t == 0.0) return y;
  return y.shifted(sp.c * t).rotated(sp.Omega * t).translated({0.0, 0.0, sp.V * t});
}

OrbitDistance orbit_distance(const Curve3& x) {
  const Grid& grid = x.grid();
  const Vec3 tau = x.centroid();
  // Only the first harmonic of the in-plane components couples to the circle;
  // the H^2 cross term is A cos(alpha) + B sin(alpha) with (A, B) ~ Z below.
  const std::complex<double> zx = x.x.spectrum()[1];
  const std::complex<double> zy = x.y.spectrum()[1];
  const std::complex<double> Z = zx + std::complex<double>(0.0, 1.0) * zy;
  const double alpha = std::abs(Z) > 0.0 ? std::arg(Z) : 0.0;

  const Curve3 reference = circle_profile(grid).rotated(alpha).translated(tau);
  const Curve3 diff = x - reference;
  return {h2_norm(diff), alpha, tau};
}

}  // namespace screwbif
