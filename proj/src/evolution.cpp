#include "screwbif/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "screwbif/error.hpp"

namespace screwbif {
namespace {

Curve3 axpy(const Curve3& x, double a, const Curve3& k) {
  return {x.x + a * k.x, x.y + a * k.y, x.z + a * k.z};
}

void check_defect(const Curve3& x, double t, double defect_max) {
  const double defect = arclength_defect(x);
  if (!(defect <= defect_max)) {
    std::ostringstream msg;
    msg << "arclength defect " << defect << " exceeds " << defect_max << " at t = " << t
        << "; refine N or dt";
    throw Error(ErrorCode::Blowup, msg.str());
  }
}

Curve3 rk4_step(const Curve3& x, double h) {
  const Curve3 k1 = lie_rhs(x);
  const Curve3 k2 = lie_rhs(axpy(x, 0.5 * h, k1));
  const Curve3 k3 = lie_rhs(axpy(x, 0.5 * h, k2));
  const Curve3 k4 = lie_rhs(axpy(x, h, k3));
  return {x.x + (h / 6.0) * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
          x.y + (h / 6.0) * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
          x.z + (h / 6.0) * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z)};
}

EvolutionState snapshot(double t, Curve3 x) {
  const double len = curve_length(x);
  const double defect = arclength_defect(x);
  return {t, std::move(x), len, defect};
}

}  // namespace

Curve3 lie_rhs(const Curve3& x) {
  const Curve3 d1 = x.derivative(1);
  const Curve3 d2 = x.derivative(2);
  const Grid& grid = x.grid();
  const auto n = static_cast<size_t>(grid.size());
  std::vector<double> cx(n), cy(n), cz(n);
  for (size_t j = 0; j < n; ++j) {
    const int i = static_cast<int>(j);
    cx[j] = d1.y[i] * d2.z[i] - d1.z[i] * d2.y[i];
    cy[j] = d1.z[i] * d2.x[i] - d1.x[i] * d2.z[i];
    cz[j] = d1.x[i] * d2.y[i] - d1.y[i] * d2.x[i];
  }
  return {dealias(ScalarField(grid, std::move(cx))), dealias(ScalarField(grid, std::move(cy))),
          dealias(ScalarField(grid, std::move(cz)))};
}

double max_time_step(const Grid& grid, const EvolutionOptions& options) {
  const double h = grid.spacing();
  return options.c_cfl * h * h;
}

std::vector<EvolutionState> integrate(const Curve3& x0, double t_end, double dt,
                                      const EvolutionOptions& options) {
  if (!(t_end >= 0.0) || !(dt > 0.0) || !(options.output_interval > 0.0))
    throw Error(ErrorCode::InvalidArgument, "integrate: need t_end >= 0, dt > 0, interval > 0");
  const double dt_max = max_time_step(x0.grid(), options);
  if (dt > dt_max * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "dt = " << dt << " exceeds the stability bound " << dt_max << " for N = "
        << x0.grid().size();
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }

  std::vector<double> outputs{0.0};
  const auto n_out = static_cast<long>(std::floor(t_end / options.output_interval + 1e-9));
  for (long i = 1; i <= n_out; ++i) outputs.push_back(std::min(t_end, i * options.output_interval));
  if (t_end - outputs.back() > 1e-12 * std::max(1.0, t_end)) outputs.push_back(t_end);

  std::vector<EvolutionState> states;
  states.push_back(snapshot(0.0, x0));
  Curve3 x = x0;
  for (size_t i = 1; i < outputs.size(); ++i) {
    const double span = outputs[i] - outputs[i - 1];
    const auto steps = static_cast<long>(std::max(1.0, std::ceil(span / dt - 1e-9)));
    const double h = span / static_cast<double>(steps);
    for (long m = 0; m < steps; ++m) {
      x = rk4_step(x, h);
      if ((m & 63) == 63) check_defect(x, outputs[i - 1] + (m + 1) * h, options.defect_max);
    }
    check_defect(x, outputs[i], options.defect_max);
    states.push_back(snapshot(outputs[i], x));
  }
  return states;
}

DriftReport drift_report(const BranchPoint& branch, double t_end, double dt,
                         const EvolutionOptions& options) {
  return drift_report(branch, integrate(branch.profile(), t_end, dt, options));
}

DriftReport drift_report(const BranchPoint& branch, const std::vector<EvolutionState>& states) {
  const Grid& grid = branch.grid();
  const double R = grid.radius();
  const Curve3 x0 = circle_profile(grid);

  DriftReport rep;
  rep.deltaV = branch.deltaV();
  for (const EvolutionState& st : states) {
    rep.times.push_back(st.t);
    rep.dist_sigma.push_back(orbit_distance(st.curve).dist);
    rep.z_center.push_back(mean(st.curve.z));
    const Curve3 xr = x0.translated({0.0, 0.0, st.t / R});
    double sup = 0.0;
    double inf = std::numeric_limits<double>::infinity();
    for (int j = 0; j < grid.size(); ++j) {
      const Vec3 a = st.curve.point(j);
      const Vec3 b = xr.point(j);
      const double d = std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
      sup = std::max(sup, d);
      inf = std::min(inf, d);
    }
    rep.pointwise_gap.push_back(sup);
    rep.min_gap.push_back(inf);
    rep.length.push_back(st.length);
    rep.arclength_defect.push_back(st.arclength_defect);
  }

  // Least-squares slope of z_center against t.
  const auto n = static_cast<double>(rep.times.size());
  double st = 0, sz = 0, stt = 0, stz = 0;
  for (size_t i = 0; i < rep.times.size(); ++i) {
    st += rep.times[i];
    sz += rep.z_center[i];
    stt += rep.times[i] * rep.times[i];
    stz += rep.times[i] * rep.z_center[i];
  }
  const double denom = n * stt - st * st;
  rep.fitted_V = denom > 0.0 ? (n * stz - st * sz) / denom : 0.0;

  for (double d : rep.dist_sigma) {
    rep.dist_spread = std::max(rep.dist_spread, std::abs(d - rep.dist_sigma.front()));
    rep.dist_max = std::max(rep.dist_max, d);
  }

  rep.t0 = std::numeric_limits<double>::quiet_NaN();
  rep.gamma = 0.0;
  const double bound = 0.9 * std::abs(rep.deltaV);
  if (bound > 0.0) {
    size_t first = rep.times.size();
    for (size_t i = rep.times.size(); i-- > 1;) {
      if (rep.pointwise_gap[i] >= bound * rep.times[i])
        first = i;
      else
        break;
    }
    if (first < rep.times.size()) {
      rep.t0 = rep.times[first];
      rep.gamma = std::numeric_limits<double>::infinity();
      for (size_t i = first; i < rep.times.size(); ++i)
        rep.gamma = std::min(rep.gamma, rep.pointwise_gap[i] / rep.times[i]);
    }
  }
  return rep;
}

}  // namespace screwbif
