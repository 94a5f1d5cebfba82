#include "inls/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "inls/quadrature.hpp"

namespace inls {

void EvolveConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("InvalidConfig", "dt must be > 0");
  if (!(T > 0.0) || !std::isfinite(T)) throw Error("InvalidConfig", "T must be > 0");
  if (record_every < 1) throw Error("InvalidConfig", "record_every must be >= 1");
  if (!(blowup_grad_factor > 1.0)) throw Error("InvalidConfig", "blowup_grad_factor must be > 1");
  if (!(blowup_dt_floor > 0.0)) throw Error("InvalidConfig", "blowup_dt_floor must be > 0");
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::CompletedT: return "CompletedT";
    case Outcome::BlowUpDetected: return "BlowUpDetected";
    case Outcome::StepFloorHit: return "StepFloorHit";
  }
  return "?";
}

SplitStepper::SplitStepper(const GridSpec& grid, const ModelParams& params, double coupling)
    : grid_(grid),
      params_(params),
      coupling_(coupling),
      fft_(grid),
      k2_(wavenumber_squared(grid)),
      work_(grid.size()) {
  if (grid.dim() != params.dim()) {
    throw Error("InvalidArgument", "grid dimension differs from model dimension");
  }
  if (coupling_ != 0.0) {
    weight_ = singular_cell_weights(grid, params.b());
    const double inv = 1.0 / grid.cell_volume();
    for (auto& w : weight_) w *= inv;
  }
}

void SplitStepper::set_dt(double dt) {
  if (dt == dt_) return;
  multiplier_.resize(k2_.size());
  const double norm = 1.0 / static_cast<double>(grid_.size());
  for (std::size_t f = 0; f < k2_.size(); ++f) multiplier_[f] = std::polar(norm, -dt * k2_[f]);
  dt_ = dt;
}

void SplitStepper::nonlinear_phase(std::vector<cplx>& u, double tau) const {
  if (coupling_ == 0.0) return;
  const double c = coupling_ * tau;
  const double sigma = params_.sigma();
  for (std::size_t f = 0; f < u.size(); ++f) {
    const double a2 = std::norm(u[f]);
    if (a2 == 0.0) continue;
    u[f] *= std::polar(1.0, c * weight_[f] * std::pow(a2, sigma));
  }
}

void SplitStepper::step(FieldState& state, double dt) {
  if (!(state.grid == grid_)) throw Error("InvalidArgument", "state grid differs from stepper grid");
  if (dt == 0.0) return;
  auto& u = state.values;
  nonlinear_phase(u, 0.5 * dt);
  set_dt(dt);
  fft_.forward(u);
  for (std::size_t f = 0; f < u.size(); ++f) u[f] *= multiplier_[f];
  fft_.backward(u);
  nonlinear_phase(u, 0.5 * dt);
  for (const auto& z : u) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      std::ostringstream os;
      os << "non-finite field after step at t = " << state.t;
      throw Error("NonFinite", os.str());
    }
  }
  state.t += dt;
}

double SplitStepper::grad_sq(const FieldState& state) {
  std::copy(state.values.begin(), state.values.end(), work_.begin());
  fft_.forward(work_);
  double s = 0.0;
  for (std::size_t f = 0; f < work_.size(); ++f) s += k2_[f] * std::norm(work_[f]);
  return s * grid_.cell_volume() / static_cast<double>(grid_.size());
}

FieldState step_strang(const FieldState& state, double dt, const ModelParams& params,
                       double coupling) {
  FieldState out = state;
  SplitStepper(state.grid, params, coupling).step(out, dt);
  return out;
}

double variance(const FieldState& state) {
  const auto r2 = state.grid.radius_squared();
  double s = 0.0;
  for (std::size_t f = 0; f < r2.size(); ++f) s += r2[f] * std::norm(state.values[f]);
  return s * state.grid.cell_volume();
}

double variance_rate(const FieldState& state) {
  const GridSpec& g = state.grid;
  std::vector<cplx> xgrad(g.size());
  std::vector<std::size_t> idx(static_cast<std::size_t>(g.dim()));
  for (int ax = 0; ax < g.dim(); ++ax) {
    const auto d = spectral_derivative(state, ax);
    for (std::size_t f = 0; f < d.size(); ++f) {
      g.unflatten(f, idx.data());
      xgrad[f] += g.coord(idx[static_cast<std::size_t>(ax)]) * d[f];
    }
  }
  double s = 0.0;
  for (std::size_t f = 0; f < xgrad.size(); ++f) s += (std::conj(state.values[f]) * xgrad[f]).imag();
  return 4.0 * s * g.cell_volume();
}

double virial_rhs(double energy0, double grad_sq, const ModelParams& params) {
  const double p = params.gn_exponent();
  return 8.0 * p * energy0 - 4.0 * (p - 2.0) * grad_sq;
}

InvariantRecord record(const FieldState& state, const ModelParams& params, double energy0,
                       double coupling) {
  InvariantRecord r;
  r.t = state.t;
  r.mass = mass(state);
  r.grad_sq = grad_sq(state);
  const double pot = coupling == 0.0 ? 0.0 : potential_term(state, params);
  r.energy = energy(Norms{r.mass, r.grad_sq, pot}, params, coupling);
  r.variance = variance(state);
  r.variance_rate = variance_rate(state);
  r.virial_rhs = virial_rhs(energy0, r.grad_sq, params);
  return r;
}

std::optional<double> detect_blowup(std::span<const InvariantRecord> records,
                                    const EvolveConfig& cfg, double initial_grad_sq,
                                    double current_dt) {
  for (const auto& r : records) {
    if (initial_grad_sq > 0.0 && r.grad_sq >= cfg.blowup_grad_factor * initial_grad_sq) return r.t;
  }
  if (cfg.adapt && current_dt < cfg.blowup_dt_floor && !records.empty()) return records.back().t;
  return std::nullopt;
}

double boundary_max(const FieldState& state) {
  const GridSpec& g = state.grid;
  const std::size_t last = g.points() - 1;
  std::vector<std::size_t> idx(static_cast<std::size_t>(g.dim()));
  double m = 0.0;
  for (std::size_t f = 0; f < g.size(); ++f) {
    g.unflatten(f, idx.data());
    if (std::any_of(idx.begin(), idx.end(), [&](std::size_t i) { return i == 0 || i == last; })) {
      m = std::max(m, std::abs(state.values[f]));
    }
  }
  return m;
}

namespace {

void check_resolution(const FieldState& state, const EvolveConfig& cfg) {
  const double edge = boundary_max(state);
  if (edge > cfg.boundary_tol) {
    std::ostringstream os;
    os << "|u| = " << edge << " on the box boundary at t = " << state.t << " exceeds "
       << cfg.boundary_tol;
    throw Error("DomainTooSmall", os.str());
  }
  const double tail = spectral_tail_fraction(state);
  if (tail > cfg.alias_tol) {
    std::ostringstream os;
    os << "spectral tail fraction " << tail << " at t = " << state.t << " exceeds "
       << cfg.alias_tol;
    throw Error("AliasDetected", os.str());
  }
}

}  // namespace

Trajectory evolve(const FieldState& u0, const ModelParams& params, const EvolveConfig& cfg) {
  cfg.validate();
  SplitStepper stepper(u0.grid, params, cfg.coupling);
  Trajectory traj{{}, Outcome::CompletedT, 0.0, u0};
  FieldState& u = traj.final_state;

  const double e0 = energy(u, params, cfg.coupling);
  const double g0 = grad_sq(u);
  check_resolution(u, cfg);
  traj.records.push_back(record(u, params, e0, cfg.coupling));

  double dt = cfg.dt;
  double g_ref = g0;  // ‖∇u‖² at the last halving
  const double t_end = u0.t + cfg.T;
  long step = 0;
  while (t_end - u.t > 1e-12 * cfg.T) {
    const double h = std::min(dt, t_end - u.t);
    stepper.step(u, h);
    ++step;
    const bool last = t_end - u.t <= 1e-12 * cfg.T;
    if (last) u.t = t_end;

    if (cfg.adapt) {
      const double g = stepper.grad_sq(u);
      if (g0 > 0.0 && g >= cfg.blowup_grad_factor * g0) {
        traj.records.push_back(record(u, params, e0, cfg.coupling));
        traj.outcome = Outcome::BlowUpDetected;
        traj.t_event = u.t;
        return traj;
      }
      if (g_ref > 0.0 && g >= 2.0 * g_ref) {
        dt *= 0.5;
        g_ref = g;
        if (dt < cfg.blowup_dt_floor) {
          traj.records.push_back(record(u, params, e0, cfg.coupling));
          traj.outcome = Outcome::StepFloorHit;
          traj.t_event = u.t;
          return traj;
        }
      }
    }

    if (step % cfg.record_every == 0 || last) {
      traj.records.push_back(record(u, params, e0, cfg.coupling));
      const std::span<const InvariantRecord> newest(&traj.records.back(), 1);
      if (auto t = detect_blowup(newest, cfg, g0, dt)) {
        traj.outcome = Outcome::BlowUpDetected;
        traj.t_event = *t;
        return traj;
      }
      check_resolution(u, cfg);
    }
  }
  traj.t_event = u.t;
  return traj;
}

std::optional<double> virial_vanishing_time(double v0, double v0_rate, double energy0,
                                            const ModelParams& params) {
  // V(t) <= v0 + v0_rate t + ½ (8pE₀) t².
  const double a = 4.0 * params.gn_exponent() * energy0;
  if (a >= 0.0) return std::nullopt;
  const double disc = v0_rate * v0_rate - 4.0 * a * v0;
  if (disc < 0.0) return std::nullopt;
  // Larger root of a t² + v0_rate t + v0 with a < 0; positive when v0 > 0.
  const double t = (-v0_rate - std::sqrt(disc)) / (2.0 * a);
  if (!(t > 0.0)) return std::nullopt;
  return t;
}

}  // namespace inls
