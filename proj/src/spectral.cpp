#include "inls/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <utility>

namespace inls {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

Fft::Fft(const GridSpec& grid) : size_(grid.size()) {
  std::vector<int> dims(static_cast<std::size_t>(grid.dim()), static_cast<int>(grid.points()));
  std::vector<cplx> scratch(size_);
  std::lock_guard lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_plan_ = fftw_plan_dft(grid.dim(), dims.data(), as_fftw(scratch.data()),
                                as_fftw(scratch.data()), FFTW_FORWARD, flags);
  backward_plan_ = fftw_plan_dft(grid.dim(), dims.data(), as_fftw(scratch.data()),
                                 as_fftw(scratch.data()), FFTW_BACKWARD, flags);
  if (forward_plan_ == nullptr || backward_plan_ == nullptr) {
    throw Error("FftPlanFailure", "could not create FFTW plans");
  }
}

Fft::~Fft() {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (backward_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

Fft::Fft(Fft&& other) noexcept
    : forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      backward_plan_(std::exchange(other.backward_plan_, nullptr)),
      size_(other.size_) {}

Fft& Fft::operator=(Fft&& other) noexcept {
  if (this != &other) {
    std::swap(forward_plan_, other.forward_plan_);
    std::swap(backward_plan_, other.backward_plan_);
    std::swap(size_, other.size_);
  }
  return *this;
}

void Fft::forward(std::span<cplx> data) const {
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(data.data()), as_fftw(data.data()));
}

void Fft::backward(std::span<cplx> data) const {
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), as_fftw(data.data()), as_fftw(data.data()));
}

std::vector<double> wavenumbers(const GridSpec& grid) {
  const std::size_t m = grid.points();
  const double dk = std::numbers::pi / grid.half_width();
  std::vector<double> k(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto si = static_cast<double>(i);
    k[i] = (i < m / 2 ? si : si - static_cast<double>(m)) * dk;
  }
  return k;
}

std::vector<double> wavenumber_squared(const GridSpec& grid) {
  const auto k = wavenumbers(grid);
  std::vector<double> out(grid.size());
  std::vector<std::size_t> idx(static_cast<std::size_t>(grid.dim()));
  for (std::size_t f = 0; f < out.size(); ++f) {
    grid.unflatten(f, idx.data());
    double s = 0.0;
    for (auto i : idx) s += k[i] * k[i];
    out[f] = s;
  }
  return out;
}

std::vector<cplx> spectral_derivative(const FieldState& state, int axis) {
  const GridSpec& grid = state.grid;
  const auto k = wavenumbers(grid);
  const std::size_t m = grid.points();
  std::vector<cplx> spec = state.values;
  Fft fft(grid);
  fft.forward(spec);
  std::vector<std::size_t> idx(static_cast<std::size_t>(grid.dim()));
  const double norm = 1.0 / static_cast<double>(grid.size());
  for (std::size_t f = 0; f < spec.size(); ++f) {
    grid.unflatten(f, idx.data());
    const std::size_t i = idx[static_cast<std::size_t>(axis)];
    spec[f] = (i == m / 2) ? cplx{} : spec[f] * cplx(0.0, k[i] * norm);
  }
  fft.backward(spec);
  return spec;
}

double spectral_tail_fraction(const FieldState& state) {
  const GridSpec& grid = state.grid;
  const auto k = wavenumbers(grid);
  const double cut = (2.0 / 3.0) * std::numbers::pi / grid.spacing();
  std::vector<cplx> spec = state.values;
  Fft(grid).forward(spec);
  std::vector<std::size_t> idx(static_cast<std::size_t>(grid.dim()));
  double total = 0.0;
  double tail = 0.0;
  for (std::size_t f = 0; f < spec.size(); ++f) {
    grid.unflatten(f, idx.data());
    double kmax = 0.0;
    for (auto i : idx) kmax = std::max(kmax, std::abs(k[i]));
    const double p = std::norm(spec[f]);
    total += p;
    if (kmax > cut) tail += p;
  }
  return total > 0.0 ? tail / total : 0.0;
}

}  // namespace inls
