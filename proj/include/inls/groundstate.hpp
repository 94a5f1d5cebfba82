// Ground state Q of ΔQ - Q + |x|^{-b}|Q|^{2σ}Q = 0 by shooting on the radial
// ODE Q'' + (N-1)/r Q' - Q + r^{-b}Q^{2σ+1} = 0 with bisection on α = Q(0).
#pragma once

#include <array>

#include "inls/core.hpp"

namespace inls {

struct ShootOptions {
  double r0 = 1e-6;            // launch radius for the series start
  double r_max = 30.0;         // integration limit (>= 20)
  double h = 1e-3;             // output spacing in the uniform region (<= 1e-3)
  double grading = 2e-3;       // geometric growth of the spacing near the origin
  double rtol = 1e-15;         // relative tolerance of the embedded RK pair
  double tail_fraction = 1e-8; // Converged once Q < tail_fraction·α
  double min_step = 1e-12;     // StepUnderflow below min_step·r
};

enum class ShootKind { Overshoot, Undershoot, Converged };

const char* to_string(ShootKind kind);

struct ShootOutcome {
  ShootKind kind = ShootKind::Undershoot;
  RadialProfile profile;  // samples up to the classifying event
  double crossing_r = 0.0;
};

/// Integrate from r0 with the local expansion
///   Q ≈ α + α r²/(2N) - α^{2σ+1} r^{2-b}/((2-b)(N-b))
/// and classify the trajectory. A trajectory that reaches r_max without
/// crossing zero, turning upward or decaying below the tail threshold
/// counts as an undershoot.
ShootOutcome shoot(const ModelParams& params, double alpha, const ShootOptions& opts = {});

struct GroundStateReport {
  RadialProfile profile;
  double l2_sq = 0.0;
  double grad_sq = 0.0;
  double pot = 0.0;
  double kopt = 0.0;
  double eq_res = 0.0;
  std::array<double, 2> pohozaev_res{};  // gradient and potential identities
  double energy_res = 0.0;
  int bisection_steps = 0;
};

/// Relative residuals of the ground-state identities.
struct PohozaevResiduals {
  double res9 = 0.0;   // ‖∇Q‖² = μ²‖Q‖², μ² = (Nσ+b)/(2σ+2-(Nσ+b))
  double res10 = 0.0;  // I(Q) = (2σ+2)/(2σ+2-(Nσ+b)) ‖Q‖²
  double res16 = 0.0;  // both closed forms of E[Q]
};

PohozaevResiduals pohozaev_check(const RadialProfile& profile);

/// Max pointwise residual of the radial ODE over r >= r_min, second
/// differences for Q'' and the stored Q'. Each residual is divided by
/// max(1, largest term) so large-α profiles are judged relatively.
double ode_residual(const RadialProfile& profile, double r_min = 0.1);

struct SolveOptions {
  // Bisection only needs a consistent sign per shot; the looser tolerance
  // roughly halves the cost without moving the certified norms.
  ShootOptions shoot = [] {
    ShootOptions o;
    o.rtol = 1e-13;
    return o;
  }();
  double alpha_lo = 1e-2;
  double alpha_hi = 1e2;
  int scan_points = 41;
  int max_bisections = 200;
  double tail_separation = 1e-9;  // bracket trajectories agree to this before the tail is matched
};

/// Bracket and bisect α, splice the asymptotic tail r^{1-N/2}K_{N/2-1}(r)
/// where the bracketing trajectories separate, then certify with the
/// Pohozaev identities. Throws NoConvergence when the certificate exceeds tol.
GroundStateReport solve_ground_state(const ModelParams& params, double tol = 1e-5,
                                     const SolveOptions& opts = {});

/// Sample Q(|x|) onto a Cartesian grid by monotone cubic interpolation.
FieldState radialize(const RadialProfile& profile, const GridSpec& grid, double scale = 1.0);

}  // namespace inls
