#include "fft.hpp"

#include <fftw3.h>

#include <cassert>
#include <map>
#include <memory>
#include <mutex>

namespace screwbif::detail {
namespace {

struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  PlanPair() = default;
  PlanPair(const PlanPair&) = delete;
  PlanPair& operator=(const PlanPair&) = delete;
  ~PlanPair() {
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

// The FFTW planner is not reentrant; execution with the new-array interface is.
const PlanPair& plans_for(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<PlanPair>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    slot = std::make_unique<PlanPair>();
    std::vector<double> real(static_cast<size_t>(n));
    std::vector<std::complex<double>> cplx(static_cast<size_t>(n / 2 + 1));
    auto* c = reinterpret_cast<fftw_complex*>(cplx.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    slot->r2c = fftw_plan_dft_r2c_1d(n, real.data(), c, flags);
    slot->c2r = fftw_plan_dft_c2r_1d(n, c, real.data(), flags);
  }
  return *slot;
}

}  // namespace

void forward(std::span<const double> values, std::span<std::complex<double>> spectrum) {
  const int n = static_cast<int>(values.size());
  assert(spectrum.size() == static_cast<size_t>(n / 2 + 1));
  const auto& p = plans_for(n);
  std::vector<double> in(values.begin(), values.end());
  fftw_execute_dft_r2c(p.r2c, in.data(), reinterpret_cast<fftw_complex*>(spectrum.data()));
  const double scale = 1.0 / n;
  for (auto& c : spectrum) c *= scale;
}

void inverse(std::span<const std::complex<double>> spectrum, std::span<double> values) {
  const int n = static_cast<int>(values.size());
  assert(spectrum.size() == static_cast<size_t>(n / 2 + 1));
  const auto& p = plans_for(n);
  // c2r overwrites its input.
  std::vector<std::complex<double>> in(spectrum.begin(), spectrum.end());
  fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(in.data()), values.data());
}

}  // namespace screwbif::detail
