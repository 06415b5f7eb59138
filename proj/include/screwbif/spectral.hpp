#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

namespace screwbif {

/// Relative tolerance for the parity and mean-free checks on construction.
inline constexpr double kTolParity = 1e-10;
inline constexpr int kMaxDerivativeOrder = 4;

/// Equispaced grid s_j = j L / N on the circle of length L = 2 pi R.
class Grid {
 public:
  Grid(double radius, int points);

  double radius() const noexcept { return radius_; }
  int size() const noexcept { return n_; }
  double period() const noexcept;
  double spacing() const noexcept { return period() / n_; }
  double node(int j) const noexcept { return j * spacing(); }

  /// Largest mode carried by the representation (the Nyquist mode is dropped).
  int max_mode() const noexcept { return n_ / 2 - 1; }
  /// Modes above this are discarded after every pointwise product (2/3 rule).
  int dealias_cutoff() const noexcept { return n_ / 3; }
  double wavenumber(int l) const noexcept { return l / radius_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double radius_;
  int n_;
};

enum class Parity { Any, Even, Odd };

Parity flipped(Parity p);
Parity product_parity(Parity a, Parity b);
const char* to_string(Parity p);

/// Half-complex coefficients c_0 .. c_{N/2}; f(s) = sum_l c_l exp(i l s / R).
using Spectrum = std::vector<std::complex<double>>;

/// Real periodic samples on a Grid, tagged with parity about s = 0 and a
/// mean-free flag. Tags are validated against the samples (within kTolParity
/// of the sup-norm) and then imposed exactly by projection.
class ScalarField {
 public:
  ScalarField(Grid grid, std::vector<double> values, Parity parity = Parity::Any,
              bool mean_free = false);

  template <class Fn>
  static ScalarField sample(const Grid& grid, Fn&& fn, Parity parity = Parity::Any,
                            bool mean_free = false) {
    std::vector<double> v(static_cast<size_t>(grid.size()));
    for (int j = 0; j < grid.size(); ++j) v[static_cast<size_t>(j)] = fn(grid.node(j));
    return ScalarField(grid, std::move(v), parity, mean_free);
  }
  static ScalarField zero(const Grid& grid, Parity parity = Parity::Any, bool mean_free = false);
  static ScalarField constant(const Grid& grid, double value);
  static ScalarField from_spectrum(const Grid& grid, const Spectrum& spectrum,
                                   Parity parity = Parity::Any, bool mean_free = false);
  /// sum_{l=1}^{n} a[l-1] cos(l s / R); even and mean-free.
  static ScalarField cosine_series(const Grid& grid, std::span<const double> a);
  /// sum_{l=1}^{n} b[l-1] sin(l s / R); odd.
  static ScalarField sine_series(const Grid& grid, std::span<const double> b);

  const Grid& grid() const noexcept { return grid_; }
  int size() const noexcept { return grid_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](int j) const { return values_[static_cast<size_t>(j)]; }
  Parity parity() const noexcept { return parity_; }
  bool mean_free() const noexcept { return mean_free_; }

  Spectrum spectrum() const;
  double sup_norm() const noexcept;
  /// Coefficients of cos(l s/R), l = 1..lmax.
  std::vector<double> cosine_modes(int lmax) const;
  /// Coefficients of sin(l s/R), l = 1..lmax.
  std::vector<double> sine_modes(int lmax) const;

  /// Orthogonal projection onto the requested parity/mean class.
  ScalarField projected(Parity parity, bool mean_free) const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double a);

 private:
  struct Exact {};
  // Imposes the tags without validating them; for values already projected.
  ScalarField(Exact, Grid grid, std::vector<double> values, Parity parity, bool mean_free);

  Grid grid_;
  std::vector<double> values_;
  Parity parity_;
  bool mean_free_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a);
ScalarField operator*(double a, ScalarField f);
ScalarField operator*(ScalarField f, double a);

/// Spectral derivative of the given order (1 .. max_order).
ScalarField differentiate(const ScalarField& f, int order = 1, int max_order = kMaxDerivativeOrder);
double mean(const ScalarField& f);
/// Inverse of d/ds from mean-free even fields onto odd fields.
ScalarField antiderivative(const ScalarField& f);

/// Pointwise product followed by 2/3-rule truncation; parity follows the product rule.
ScalarField product(const ScalarField& f, const ScalarField& g);
ScalarField dealias(const ScalarField& f);
/// s -> f(s + sigma), evaluated as a spectral phase shift.
ScalarField shift(const ScalarField& f, double sigma);
/// Band-limited interpolation onto a grid with the same radius.
ScalarField resample(const ScalarField& f, const Grid& target);

using FieldPair = std::pair<ScalarField, ScalarField>;

/// sum_{m=1,2} sum_{j=0..2} int d^j f_m d^j g_m ds, evaluated by Parseval.
double h2_inner(const FieldPair& f, const FieldPair& g);
/// Single-component H^2 pairing.
double h2_inner(const ScalarField& f, const ScalarField& g);
/// H^2 weight 1 + xi^2 + xi^4 of mode l.
double h2_weight(const Grid& grid, int l);

/// Largest resolved mode with amplitude above `floor` relative to the sup-norm;
/// a spectral decay diagnostic.
int effective_bandwidth(const ScalarField& f, double floor = 1e-14);

}  // namespace screwbif
