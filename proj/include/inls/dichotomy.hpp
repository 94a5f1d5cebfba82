// Mass-energy thresholds for global existence versus blow-up, the barrier
// functions behind them and the scalar lemmas used in the trapping argument.
#pragma once

#include "inls/core.hpp"
#include "inls/groundstate.hpp"

namespace inls {

enum class Verdict { Global, BlowUp, Threshold, Indeterminate, CriticalGlobal, OutsideTheory };

const char* to_string(Verdict v);

/// Scale-invariant comparison of u₀ with the ground state.
struct ThresholdReport {
  double me_u = 0.0;  // E[u₀]^s M[u₀]^{1-s}, sign of E[u₀] kept
  double me_q = 0.0;  // E[Q]^s M[Q]^{1-s}
  double g_u = 0.0;   // ‖∇u₀‖^s ‖u₀‖^{1-s}
  double g_q = 0.0;   // ‖∇Q‖^s ‖Q‖^{1-s}
  double energy_u = 0.0;
  bool finite_variance = false;
  Verdict verdict = Verdict::Indeterminate;
};

/// Relative width of the band in which g_u = g_q counts as equality.
inline constexpr double kThresholdBand = 1e-8;

/// Classify initial data from its norms. E[Q] and M[Q] come from the
/// certified report through the Pohozaev relations.
ThresholdReport classify(const Norms& u0, const ModelParams& params, const GroundStateReport& gs,
                         bool finite_variance);

ThresholdReport classify(const FieldState& u0, const ModelParams& params,
                         const GroundStateReport& gs, bool finite_variance);

/// X - B X^{(Nσ+b)/2} <= A along the flow, X = ‖∇u(t)‖².
struct BarrierCurve {
  double A = 0.0;   // 2E[u₀]
  double B = 0.0;   // K_opt/(σ+1) ‖u₀‖^{2σ+2-(Nσ+b)}
  double x0 = 0.0;  // maximizer of f(x) = x - B x^{(Nσ+b)/2}
  double fx0 = 0.0;
  bool below = false;  // 2E[u₀] < f(x0)
};

BarrierCurve barrier(const ModelParams& params, double u0_mass, double u0_energy, double kopt);

/// ((Nσ+b)/2)^{1/(Nσ+b-2)}, the ratio x_root/x_max of the trapping barrier.
double c_sigma_b_n(const ModelParams& params);

enum class TrapCase { NonPositiveE, PositiveE };

const char* to_string(TrapCase c);

/// Lower bound on ‖∇u‖^s ‖u‖^{1-s} below the mass-energy threshold.
struct TrapBound {
  double bound = 0.0;
  double constant = 0.0;  // bound / (‖∇Q‖^s ‖Q‖^{1-s})
  TrapCase trap_case = TrapCase::NonPositiveE;
  bool holds = false;     // the supplied ‖∇u‖² meets the bound
};

/// For E[u] <= 0 the constant is c_{σ,b,N}^s; for E[u] > 0 it is
///   (1 + (1 - ℰu/ℰQ)^{1/2} (c_{σ,b,N} - 1))^s,  ℰφ = E[φ] M[φ]^{(1-s)/s}.
/// Throws HypothesisViolated when E[u] > 0 and ℰu >= ℰQ.
TrapBound energy_trap(double u_mass, double u_energy, double u_grad_sq, const ModelParams& params,
                      const GroundStateReport& gs);

/// f(x) - p(x) for f(x) = ½x² - a x^α and p the parabola with vertex at the
/// local maximum of f through its positive root. Throws OutOfInterval
/// outside [x_max, x_root].
double lemma51_gap(double a, double alpha, double x);

struct Lemma51Interval {
  double x_max = 0.0;
  double x_root = 0.0;
};

Lemma51Interval lemma51_interval(double a, double alpha);

struct Lemma51Constants {
  double A = 0.0;  // ½ - 1/α
  double B = 0.0;  // (α/2)^{1/(α-2)}
};

Lemma51Constants lemma51_normalized_constants(double alpha);

struct ScalarInequalities {
  double first = 0.0;   // (1 + 1/√(x+2))^x - (x+2)/2
  double second = 0.0;  // (1+x)^{1/(2x)+1}((1+x)^{1/(2x)} - 1) - 1
};

/// Both differences; large x may overflow the first to +inf.
ScalarInequalities lemma51_scalar_inequalities(double x);

/// The trapping barrier f(x) = ½x² - K_opt/(2σ+2) x^{Nσ+b} at the ground state.
struct Section5Barrier {
  double x_max = 0.0;       // ‖∇Q‖ ‖Q‖^{(1-s)/s}
  double f_at_x_max = 0.0;  // E[Q] M[Q]^{(1-s)/s}
  double x_root = 0.0;      // positive root of f
  double x_crit = 0.0;      // critical point of f from K_opt alone
  double kopt = 0.0;
};

Section5Barrier section5_barrier(const ModelParams& params, const GroundStateReport& gs);

double section5_f(const ModelParams& params, double kopt, double x);
double section5_fprime(const ModelParams& params, double kopt, double x);

/// E[Q] from ‖Q‖² via the Pohozaev relations.
double ground_state_energy(const ModelParams& params, double q_mass);

}  // namespace inls
