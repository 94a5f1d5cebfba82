#include "inls/dichotomy.hpp"

#include <cmath>
#include <sstream>

namespace inls {

namespace {

void require_supercritical(const ModelParams& params) {
  if (!params.supercritical()) {
    std::ostringstream os;
    os << "sigma = " << params.sigma() << " is not above the L2-critical power "
       << params.critical_power();
    throw Error("NotSupercritical", os.str());
  }
}

// x^s y^{1-s} with the sign of x.
double mix(double x, double y, double s) {
  const double m = std::pow(std::abs(x), s) * std::pow(y, 1.0 - s);
  return x < 0.0 ? -m : m;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Global: return "Global";
    case Verdict::BlowUp: return "BlowUp";
    case Verdict::Threshold: return "Threshold";
    case Verdict::Indeterminate: return "Indeterminate";
    case Verdict::CriticalGlobal: return "CriticalGlobal";
    case Verdict::OutsideTheory: return "OutsideTheory";
  }
  return "?";
}

const char* to_string(TrapCase c) {
  return c == TrapCase::NonPositiveE ? "NonPositiveE" : "PositiveE";
}

double ground_state_energy(const ModelParams& params, double q_mass) {
  const double p = params.gn_exponent();
  return (p - 2.0) / (2.0 * params.l2_exponent()) * q_mass;
}

ThresholdReport classify(const Norms& u0, const ModelParams& params, const GroundStateReport& gs,
                         bool finite_variance) {
  if (!(u0.mass > 0.0)) throw Error("InvalidArgument", "initial data is zero");
  ThresholdReport rep;
  rep.finite_variance = finite_variance;
  rep.energy_u = energy(u0, params);

  if (params.l2_critical()) {
    rep.me_u = u0.mass;
    rep.me_q = gs.l2_sq;
    rep.g_u = std::sqrt(u0.mass);
    rep.g_q = std::sqrt(gs.l2_sq);
    const double ratio = rep.g_u / rep.g_q;
    if (std::abs(ratio - 1.0) <= kThresholdBand) {
      rep.verdict = Verdict::Threshold;
    } else {
      rep.verdict = ratio < 1.0 ? Verdict::CriticalGlobal : Verdict::OutsideTheory;
    }
    return rep;
  }
  require_supercritical(params);

  const double s = params.s_sigma();
  rep.me_u = mix(rep.energy_u, u0.mass, s);
  rep.me_q = mix(ground_state_energy(params, gs.l2_sq), gs.l2_sq, s);
  rep.g_u = mix(std::sqrt(u0.grad_sq), std::sqrt(u0.mass), s);
  rep.g_q = mix(std::sqrt(gs.grad_sq), std::sqrt(gs.l2_sq), s);

  const double ratio = rep.g_u / rep.g_q;
  const Verdict blowup = finite_variance ? Verdict::BlowUp : Verdict::OutsideTheory;
  if (std::abs(ratio - 1.0) <= kThresholdBand) {
    rep.verdict = Verdict::Threshold;
  } else if (rep.energy_u < 0.0) {
    rep.verdict = blowup;
  } else if (rep.me_u < rep.me_q * (1.0 - kThresholdBand)) {
    rep.verdict = ratio < 1.0 ? Verdict::Global : blowup;
  } else if (ratio > 1.0) {
    rep.verdict = Verdict::OutsideTheory;
  } else {
    rep.verdict = Verdict::Indeterminate;
  }
  return rep;
}

ThresholdReport classify(const FieldState& u0, const ModelParams& params,
                         const GroundStateReport& gs, bool finite_variance) {
  return classify(norms(u0, params), params, gs, finite_variance);
}

BarrierCurve barrier(const ModelParams& params, double u0_mass, double u0_energy, double kopt) {
  require_supercritical(params);
  const double p = params.gn_exponent();
  BarrierCurve c;
  c.A = 2.0 * u0_energy;
  c.B = kopt / (params.sigma() + 1.0) * std::pow(u0_mass, 0.5 * params.l2_exponent());
  if (!(c.B > 0.0) || !std::isfinite(c.B)) {
    throw Error("DegenerateBarrier", "barrier coefficient B must be positive");
  }
  c.x0 = std::pow(2.0 / (c.B * p), 2.0 / (p - 2.0));
  c.fx0 = (p - 2.0) / p * c.x0;
  c.below = c.A < c.fx0;
  return c;
}

double c_sigma_b_n(const ModelParams& params) {
  require_supercritical(params);
  const double p = params.gn_exponent();
  return std::pow(0.5 * p, 1.0 / (p - 2.0));
}

TrapBound energy_trap(double u_mass, double u_energy, double u_grad_sq, const ModelParams& params,
                      const GroundStateReport& gs) {
  const double c0 = c_sigma_b_n(params);
  const double s = params.s_sigma();
  const double g_q = mix(std::sqrt(gs.grad_sq), std::sqrt(gs.l2_sq), s);
  TrapBound out;
  if (u_energy <= 0.0) {
    out.trap_case = TrapCase::NonPositiveE;
    out.constant = std::pow(c0, s);
  } else {
    out.trap_case = TrapCase::PositiveE;
    const double e = (1.0 - s) / s;
    const double script_u = u_energy * std::pow(u_mass, e);
    const double script_q = ground_state_energy(params, gs.l2_sq) * std::pow(gs.l2_sq, e);
    if (!(script_u < script_q)) {
      throw Error("HypothesisViolated", "E[u]^s M[u]^{1-s} is not below the ground-state level");
    }
    out.constant = std::pow(1.0 + std::sqrt(1.0 - script_u / script_q) * (c0 - 1.0), s);
  }
  out.bound = out.constant * g_q;
  out.holds = mix(std::sqrt(u_grad_sq), std::sqrt(u_mass), s) >= out.bound;
  return out;
}

Lemma51Interval lemma51_interval(double a, double alpha) {
  if (!(a > 0.0) || !(alpha > 2.0)) {
    throw Error("InvalidArgument", "lemma requires a > 0 and alpha > 2");
  }
  // f'(x) = x - aαx^{α-1} and f(x) = x²(½ - a x^{α-2}).
  return {std::pow(1.0 / (a * alpha), 1.0 / (alpha - 2.0)),
          std::pow(1.0 / (2.0 * a), 1.0 / (alpha - 2.0))};
}

double lemma51_gap(double a, double alpha, double x) {
  const auto [x_max, x_root] = lemma51_interval(a, alpha);
  const double slack = 1e-12 * x_root;
  if (!(x >= x_max - slack && x <= x_root + slack)) {
    std::ostringstream os;
    os << "x = " << x << " outside [" << x_max << ", " << x_root << "]";
    throw Error("OutOfInterval", os.str());
  }
  auto f = [&](double y) { return 0.5 * y * y - a * std::pow(y, alpha); };
  const double top = f(x_max);
  const double t = (x - x_max) / (x_root - x_max);
  return f(x) - top * (1.0 - t * t);
}

Lemma51Constants lemma51_normalized_constants(double alpha) {
  if (!(alpha > 2.0)) throw Error("InvalidArgument", "alpha must exceed 2");
  const double e = alpha - 2.0;
  return {0.5 - 1.0 / alpha, std::exp(std::log1p(0.5 * e) / e)};
}

ScalarInequalities lemma51_scalar_inequalities(double x) {
  if (!(x > 0.0)) throw Error("InvalidArgument", "x must be positive");
  ScalarInequalities out;
  // (1 + 1/√(x+2))^x - 1 - x/2 without cancellation as x -> 0.
  out.first = std::expm1(x * std::log1p(1.0 / std::sqrt(x + 2.0))) - 0.5 * x;
  const double l = std::log1p(x);
  out.second = std::exp(l * (0.5 / x + 1.0)) * std::expm1(l * 0.5 / x) - 1.0;
  return out;
}

double section5_f(const ModelParams& params, double kopt, double x) {
  return 0.5 * x * x - kopt / (2.0 * params.sigma() + 2.0) * std::pow(x, params.gn_exponent());
}

double section5_fprime(const ModelParams& params, double kopt, double x) {
  const double p = params.gn_exponent();
  return x - kopt * p / (2.0 * params.sigma() + 2.0) * std::pow(x, p - 1.0);
}

Section5Barrier section5_barrier(const ModelParams& params, const GroundStateReport& gs) {
  require_supercritical(params);
  const double s = params.s_sigma();
  const double p = params.gn_exponent();
  const double e = (1.0 - s) / s;
  const double k = 2.0 * params.sigma() + 2.0;
  Section5Barrier out;
  out.kopt = gs.kopt;
  out.x_max = std::sqrt(gs.grad_sq) * std::pow(gs.l2_sq, 0.5 * e);
  out.f_at_x_max = ground_state_energy(params, gs.l2_sq) * std::pow(gs.l2_sq, e);
  out.x_crit = std::pow(k / (p * gs.kopt), 1.0 / (p - 2.0));
  out.x_root = std::pow(k / (2.0 * gs.kopt), 1.0 / (p - 2.0));
  return out;
}

}  // namespace inls
