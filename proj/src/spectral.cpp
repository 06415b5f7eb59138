#include "screwbif/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "screwbif/error.hpp"

namespace screwbif {
namespace {

using cplx = std::complex<double>;

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!(a == b)) {
    std::ostringstream msg;
    msg << where << ": grid mismatch (R=" << a.radius() << ", N=" << a.size() << " vs R="
        << b.radius() << ", N=" << b.size() << ")";
    throw Error(ErrorCode::Grid, msg.str());
  }
}

double sup_of(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double parity_defect(std::span<const double> v, Parity p) {
  const size_t n = v.size();
  const double sign = p == Parity::Even ? 1.0 : -1.0;
  double d = 0.0;
  for (size_t j = 0; j < n; ++j) d = std::max(d, std::abs(v[j] - sign * v[(n - j) % n]));
  return d;
}

void project_parity(std::vector<double>& v, Parity p) {
  if (p == Parity::Any) return;
  const size_t n = v.size();
  const double sign = p == Parity::Even ? 1.0 : -1.0;
  std::vector<double> out(n);
  for (size_t j = 0; j < n; ++j) out[j] = 0.5 * (v[j] + sign * v[(n - j) % n]);
  v = std::move(out);
}

double sample_mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

void remove_mean(std::vector<double>& v) {
  const double m = sample_mean(v);
  for (double& x : v) x -= m;
}

Parity sum_parity(Parity a, Parity b) { return a == b ? a : Parity::Any; }

bool numerically_even(const ScalarField& f) {
  if (f.parity() == Parity::Even) return true;
  if (f.parity() == Parity::Odd) return false;
  return parity_defect(f.values(), Parity::Even) <= kTolParity * std::max(f.sup_norm(), 1e-300);
}

bool numerically_mean_free(const ScalarField& f) {
  if (f.mean_free()) return true;
  return std::abs(mean(f)) <= kTolParity * std::max(f.sup_norm(), 1e-300);
}

std::vector<double> values_from_spectrum(const Grid& grid, const Spectrum& spectrum) {
  std::vector<double> v(static_cast<size_t>(grid.size()));
  detail::inverse(spectrum, v);
  return v;
}

}  // namespace

Grid::Grid(double radius, int points) : radius_(radius), n_(points) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw Error(ErrorCode::InvalidArgument, "grid radius must be positive and finite");
  if (points < 16 || points % 2 != 0)
    throw Error(ErrorCode::InvalidArgument, "grid size must be even and at least 16");
}

double Grid::period() const noexcept { return 2.0 * std::numbers::pi * radius_; }

Parity flipped(Parity p) {
  switch (p) {
    case Parity::Even: return Parity::Odd;
    case Parity::Odd: return Parity::Even;
    default: return Parity::Any;
  }
}

Parity product_parity(Parity a, Parity b) {
  if (a == Parity::Any || b == Parity::Any) return Parity::Any;
  return a == b ? Parity::Even : Parity::Odd;
}

const char* to_string(Parity p) {
  switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    default: return "any";
  }
}

ScalarField::ScalarField(Grid grid, std::vector<double> values, Parity parity, bool mean_free)
    : grid_(grid), values_(std::move(values)), parity_(parity), mean_free_(mean_free) {
  if (values_.size() != static_cast<size_t>(grid_.size()))
    throw Error(ErrorCode::Grid, "sample count does not match grid size");
  const double scale = std::max(sup_of(values_), 1e-300);
  if (parity_ != Parity::Any) {
    const double d = parity_defect(values_, parity_);
    if (d > kTolParity * scale) {
      std::ostringstream msg;
      msg << "field tagged " << to_string(parity_) << " has parity defect " << d
          << " (sup " << scale << ")";
      throw Error(ErrorCode::Parity, msg.str());
    }
    project_parity(values_, parity_);
  }
  if (parity_ == Parity::Odd) mean_free_ = true;
  if (mean_free_) {
    const double m = sample_mean(values_);
    if (std::abs(m) > kTolParity * scale) {
      std::ostringstream msg;
      msg << "field tagged mean-free has mean " << m;
      throw Error(ErrorCode::Mean, msg.str());
    }
    // Odd samples already sum to zero pairwise; subtracting a rounded mean
    // would only break the antisymmetry.
    if (parity_ != Parity::Odd) remove_mean(values_);
  }
}

ScalarField::ScalarField(Exact, Grid grid, std::vector<double> values, Parity parity,
                         bool mean_free)
    : grid_(grid), values_(std::move(values)), parity_(parity), mean_free_(mean_free) {
  if (parity_ != Parity::Any) project_parity(values_, parity_);
  if (parity_ == Parity::Odd) mean_free_ = true;
  if (mean_free_ && parity_ != Parity::Odd) remove_mean(values_);
}

ScalarField ScalarField::zero(const Grid& grid, Parity parity, bool mean_free) {
  return ScalarField(grid, std::vector<double>(static_cast<size_t>(grid.size()), 0.0), parity,
                     mean_free);
}

ScalarField ScalarField::constant(const Grid& grid, double value) {
  return ScalarField(grid, std::vector<double>(static_cast<size_t>(grid.size()), value),
                     Parity::Even, value == 0.0);
}

ScalarField ScalarField::from_spectrum(const Grid& grid, const Spectrum& spectrum, Parity parity,
                                       bool mean_free) {
  if (spectrum.size() != static_cast<size_t>(grid.size() / 2 + 1))
    throw Error(ErrorCode::Grid, "spectrum length does not match grid");
  Spectrum s = spectrum;
  if (parity == Parity::Even)
    for (auto& c : s) c = cplx(c.real(), 0.0);
  else if (parity == Parity::Odd)
    for (auto& c : s) c = cplx(0.0, c.imag());
  if (mean_free || parity == Parity::Odd) s[0] = 0.0;
  return ScalarField(Exact{}, grid, values_from_spectrum(grid, s), parity, mean_free);
}

ScalarField ScalarField::cosine_series(const Grid& grid, std::span<const double> a) {
  if (static_cast<int>(a.size()) > grid.max_mode())
    throw Error(ErrorCode::Resolution, "cosine series exceeds the grid's resolvable modes");
  Spectrum s(static_cast<size_t>(grid.size() / 2 + 1));
  for (size_t l = 1; l <= a.size(); ++l) s[l] = cplx(0.5 * a[l - 1], 0.0);
  return from_spectrum(grid, s, Parity::Even, true);
}

ScalarField ScalarField::sine_series(const Grid& grid, std::span<const double> b) {
  if (static_cast<int>(b.size()) > grid.max_mode())
    throw Error(ErrorCode::Resolution, "sine series exceeds the grid's resolvable modes");
  Spectrum s(static_cast<size_t>(grid.size() / 2 + 1));
  for (size_t l = 1; l <= b.size(); ++l) s[l] = cplx(0.0, -0.5 * b[l - 1]);
  return from_spectrum(grid, s, Parity::Odd, true);
}

Spectrum ScalarField::spectrum() const {
  Spectrum s(static_cast<size_t>(grid_.size() / 2 + 1));
  detail::forward(values_, s);
  return s;
}

double ScalarField::sup_norm() const noexcept { return sup_of(values_); }

std::vector<double> ScalarField::cosine_modes(int lmax) const {
  const Spectrum s = spectrum();
  std::vector<double> a(static_cast<size_t>(lmax));
  for (int l = 1; l <= lmax; ++l) a[static_cast<size_t>(l - 1)] = 2.0 * s[static_cast<size_t>(l)].real();
  return a;
}

std::vector<double> ScalarField::sine_modes(int lmax) const {
  const Spectrum s = spectrum();
  std::vector<double> b(static_cast<size_t>(lmax));
  for (int l = 1; l <= lmax; ++l) b[static_cast<size_t>(l - 1)] = -2.0 * s[static_cast<size_t>(l)].imag();
  return b;
}

ScalarField ScalarField::projected(Parity parity, bool mean_free) const {
  return ScalarField(Exact{}, grid_, values_, parity, mean_free);
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "operator+");
  for (size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  parity_ = sum_parity(parity_, other.parity_);
  mean_free_ = mean_free_ && other.mean_free_;
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "operator-");
  for (size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
  parity_ = sum_parity(parity_, other.parity_);
  mean_free_ = mean_free_ && other.mean_free_;
  return *this;
}

ScalarField& ScalarField::operator*=(double a) {
  for (double& x : values_) x *= a;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator-(ScalarField a) { return a *= -1.0; }
ScalarField operator*(double a, ScalarField f) { return f *= a; }
ScalarField operator*(ScalarField f, double a) { return f *= a; }

ScalarField differentiate(const ScalarField& f, int order, int max_order) {
  if (order < 1 || order > max_order) {
    std::ostringstream msg;
    msg << "derivative order " << order << " outside [1, " << max_order << "]";
    throw Error(ErrorCode::Order, msg.str());
  }
  const Grid& g = f.grid();
  Spectrum s = f.spectrum();
  const size_t nyquist = s.size() - 1;
  s[0] = 0.0;
  s[nyquist] = 0.0;
  for (size_t l = 1; l < nyquist; ++l) s[l] *= std::pow(cplx(0.0, g.wavenumber(static_cast<int>(l))), order);
  const Parity p = order % 2 == 0 ? f.parity() : flipped(f.parity());
  return ScalarField::from_spectrum(g, s, p, true);
}

double mean(const ScalarField& f) { return sample_mean(f.values()); }

ScalarField antiderivative(const ScalarField& f) {
  if (!numerically_mean_free(f))
    throw Error(ErrorCode::Mean, "antiderivative requires a mean-free field");
  if (!numerically_even(f))
    throw Error(ErrorCode::Parity, "antiderivative requires an even field");
  const Grid& g = f.grid();
  Spectrum s = f.spectrum();
  const size_t nyquist = s.size() - 1;
  s[0] = 0.0;
  s[nyquist] = 0.0;
  for (size_t l = 1; l < nyquist; ++l) s[l] /= cplx(0.0, g.wavenumber(static_cast<int>(l)));
  return ScalarField::from_spectrum(g, s, Parity::Odd, true);
}

ScalarField dealias(const ScalarField& f) {
  Spectrum s = f.spectrum();
  const size_t cutoff = static_cast<size_t>(f.grid().dealias_cutoff());
  for (size_t l = cutoff + 1; l < s.size(); ++l) s[l] = 0.0;
  return ScalarField::from_spectrum(f.grid(), s, f.parity(), f.mean_free());
}

ScalarField product(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid(), g.grid(), "product");
  std::vector<double> v(static_cast<size_t>(f.size()));
  for (int j = 0; j < f.size(); ++j) v[static_cast<size_t>(j)] = f[j] * g[j];
  ScalarField raw(f.grid(), std::move(v), Parity::Any, false);
  Spectrum s = raw.spectrum();
  const size_t cutoff = static_cast<size_t>(f.grid().dealias_cutoff());
  for (size_t l = cutoff + 1; l < s.size(); ++l) s[l] = 0.0;
  return ScalarField::from_spectrum(f.grid(), s, product_parity(f.parity(), g.parity()), false);
}

ScalarField shift(const ScalarField& f, double sigma) {
  const Grid& g = f.grid();
  Spectrum s = f.spectrum();
  const size_t nyquist = s.size() - 1;
  for (size_t l = 1; l < nyquist; ++l) {
    const double phase = g.wavenumber(static_cast<int>(l)) * sigma;
    s[l] *= cplx(std::cos(phase), std::sin(phase));
  }
  s[nyquist] = 0.0;
  return ScalarField::from_spectrum(g, s, Parity::Any, f.mean_free());
}

ScalarField resample(const ScalarField& f, const Grid& target) {
  if (target.radius() != f.grid().radius())
    throw Error(ErrorCode::Grid, "resample requires equal radii");
  const Spectrum src = f.spectrum();
  Spectrum dst(static_cast<size_t>(target.size() / 2 + 1));
  const size_t keep = static_cast<size_t>(std::min(f.grid().max_mode(), target.max_mode()));
  for (size_t l = 0; l <= keep; ++l) dst[l] = src[l];
  return ScalarField::from_spectrum(target, dst, f.parity(), f.mean_free());
}

double h2_weight(const Grid& grid, int l) {
  const double xi2 = grid.wavenumber(l) * grid.wavenumber(l);
  return 1.0 + xi2 + xi2 * xi2;
}

double h2_inner(const ScalarField& a, const ScalarField& b) {
  const Grid& grid = a.grid();
  require_same_grid(grid, b.grid(), "h2_inner");
  const Spectrum sa = a.spectrum();
  const Spectrum sb = b.spectrum();
  const size_t nyquist = sa.size() - 1;
  double acc = 0.0;
  for (size_t l = 0; l <= nyquist; ++l) {
    const double multiplicity = (l == 0 || l == nyquist) ? 1.0 : 2.0;
    acc += multiplicity * h2_weight(grid, static_cast<int>(l)) * (sa[l] * std::conj(sb[l])).real();
  }
  return acc * grid.period();
}

double h2_inner(const FieldPair& f, const FieldPair& g) {
  const Grid& grid = f.first.grid();
  require_same_grid(grid, f.second.grid(), "h2_inner");
  require_same_grid(grid, g.first.grid(), "h2_inner");
  require_same_grid(grid, g.second.grid(), "h2_inner");
  return h2_inner(f.first, g.first) + h2_inner(f.second, g.second);
}

int effective_bandwidth(const ScalarField& f, double floor) {
  const Spectrum s = f.spectrum();
  const double scale = std::max(f.sup_norm(), 1e-300);
  int band = 0;
  for (size_t l = 1; l < s.size(); ++l)
    if (2.0 * std::abs(s[l]) > floor * scale) band = static_cast<int>(l);
  return band;
}

}  // namespace screwbif
