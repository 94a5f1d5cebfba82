// Strang-split Fourier integrator for i u_t + Δu + |x|^{-b}|u|^{2σ}u = 0 with
// conservation, virial and blow-up diagnostics.
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "inls/core.hpp"
#include "inls/spectral.hpp"

namespace inls {

struct EvolveConfig {
  double dt = 1e-3;
  double T = 1.0;
  int record_every = 1;
  double blowup_grad_factor = 1e3;
  double blowup_dt_floor = 1e-8;
  bool adapt = false;              // halve dt whenever ‖∇u‖² doubles
  double boundary_tol = 1e-10;     // max |u| tolerated on the box faces
  double alias_tol = 1e-4;         // spectral mass fraction above 2/3 Nyquist
  double coupling = 1.0;           // 0 switches the nonlinearity off

  void validate() const;
};

enum class Outcome { CompletedT, BlowUpDetected, StepFloorHit };

const char* to_string(Outcome o);

struct Trajectory {
  std::vector<InvariantRecord> records;
  Outcome outcome = Outcome::CompletedT;
  double t_event = 0.0;  // detection or floor time; final time when completed
  FieldState final_state;
};

/// Reusable stepper; caches the transform plan, the linear multiplier and
/// the cell-averaged weight |x|^{-b}.
class SplitStepper {
 public:
  SplitStepper(const GridSpec& grid, const ModelParams& params, double coupling = 1.0);

  /// One Strang step in place: half nonlinear phase, linear flow, half phase.
  void step(FieldState& state, double dt);

  /// ‖∇u‖² of the current state.
  double grad_sq(const FieldState& state);

 private:
  void nonlinear_phase(std::vector<cplx>& u, double tau) const;
  void set_dt(double dt);

  GridSpec grid_;
  ModelParams params_;
  double coupling_;
  Fft fft_;
  std::vector<double> k2_;
  std::vector<double> weight_;  // cell average of |x|^{-b}
  std::vector<cplx> multiplier_;
  double dt_ = -1.0;
  std::vector<cplx> work_;
};

FieldState step_strang(const FieldState& state, double dt, const ModelParams& params,
                       double coupling = 1.0);

/// ∫|x|²|u|² by the midpoint rule.
double variance(const FieldState& state);

/// 4 Im ∫ ū (x·∇u), gradient taken spectrally.
double variance_rate(const FieldState& state);

/// 8(Nσ+b)E₀ - 4(Nσ+b-2)‖∇u‖².
double virial_rhs(double energy0, double grad_sq, const ModelParams& params);

InvariantRecord record(const FieldState& state, const ModelParams& params, double energy0,
                       double coupling = 1.0);

/// First recorded time with ‖∇u‖² >= blowup_grad_factor·initial_grad_sq,
/// or the last record time when the adaptive step has reached the floor.
std::optional<double> detect_blowup(std::span<const InvariantRecord> records,
                                    const EvolveConfig& cfg, double initial_grad_sq,
                                    double current_dt);

/// Largest |u| on the faces of the periodic box.
double boundary_max(const FieldState& state);

Trajectory evolve(const FieldState& u0, const ModelParams& params, const EvolveConfig& cfg);

/// Vanishing time of V(0) + V'(0)t + 4(Nσ+b)E₀t², the concave bound on the
/// variance when E₀ < 0. Empty when the quadratic has no positive root.
std::optional<double> virial_vanishing_time(double v0, double v0_rate, double energy0,
                                            const ModelParams& params);

}  // namespace inls
