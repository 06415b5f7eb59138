#pragma once

#include <complex>
#include <span>
#include <vector>

namespace screwbif::detail {

// Real <-> half-complex transforms of length n backed by FFTW. Forward output
// is normalised by 1/n so that coefficient l is the amplitude of exp(i l s/R).
void forward(std::span<const double> values, std::span<std::complex<double>> spectrum);
void inverse(std::span<const std::complex<double>> spectrum, std::span<double> values);

}  // namespace screwbif::detail
