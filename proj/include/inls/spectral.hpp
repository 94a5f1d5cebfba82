// FFTW-backed transforms on a GridSpec.
#pragma once

#include <span>
#include <vector>

#include "inls/core.hpp"

namespace inls {

/// Forward/backward N-d DFT plans for one grid. Transforms are unnormalized:
/// backward(forward(u)) = M^N u.
class Fft {
 public:
  explicit Fft(const GridSpec& grid);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  Fft(Fft&& other) noexcept;
  Fft& operator=(Fft&& other) noexcept;

  void forward(std::span<cplx> data) const;
  void backward(std::span<cplx> data) const;

  std::size_t size() const noexcept { return size_; }

 private:
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
  std::size_t size_ = 0;
};

/// Angular wavenumbers of one axis in FFT order; the Nyquist mode is negative.
std::vector<double> wavenumbers(const GridSpec& grid);

/// |ξ|² over the full spectral grid in flat order.
std::vector<double> wavenumber_squared(const GridSpec& grid);

/// Spectral derivative of u along `axis`, with the Nyquist mode zeroed.
std::vector<cplx> spectral_derivative(const FieldState& state, int axis);

/// Fraction of Σ|û|² carried by modes with max_d |ξ_d| > (2/3) ξ_nyquist.
double spectral_tail_fraction(const FieldState& state);

}  // namespace inls
