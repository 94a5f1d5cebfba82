#include "inls/groundstate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>

#include "inls/quadrature.hpp"

namespace inls {

namespace {

using Real = long double;

// Dormand-Prince 5(4) tableau.
constexpr Real c2 = 1.0L / 5, c3 = 3.0L / 10, c4 = 4.0L / 5, c5 = 8.0L / 9;
constexpr Real a21 = 1.0L / 5;
constexpr Real a31 = 3.0L / 40, a32 = 9.0L / 40;
constexpr Real a41 = 44.0L / 45, a42 = -56.0L / 15, a43 = 32.0L / 9;
constexpr Real a51 = 19372.0L / 6561, a52 = -25360.0L / 2187, a53 = 64448.0L / 6561,
               a54 = -212.0L / 729;
constexpr Real a61 = 9017.0L / 3168, a62 = -355.0L / 33, a63 = 46732.0L / 5247,
               a64 = 49.0L / 176, a65 = -5103.0L / 18656;
constexpr Real b1 = 35.0L / 384, b3 = 500.0L / 1113, b4 = 125.0L / 192, b5 = -2187.0L / 6784,
               b6 = 11.0L / 84;
constexpr Real e1 = b1 - 5179.0L / 57600, e3 = b3 - 7571.0L / 16695, e4 = b4 - 393.0L / 640,
               e5 = b5 - -92097.0L / 339200, e6 = b6 - 187.0L / 2100, e7 = -1.0L / 40;

struct State {
  Real q;
  Real p;
};

struct RadialOde {
  Real dim_minus_one;
  Real b;
  Real two_sigma;

  State operator()(Real r, const State& y) const {
    const Real aq = std::fabs(y.q);
    const Real nonlin = aq == 0 ? Real(0) : std::pow(r, -b) * std::pow(aq, two_sigma) * y.q;
    return {y.p, -dim_minus_one / r * y.p + y.q - nonlin};
  }
};

State axpy(const State& y, Real h, std::initializer_list<std::pair<Real, const State*>> terms) {
  State out = y;
  for (const auto& [c, k] : terms) {
    out.q += h * c * k->q;
    out.p += h * c * k->p;
  }
  return out;
}

bool finite(const State& y) { return std::isfinite(y.q) && std::isfinite(y.p); }

// Dense-output weights of the 4th order continuous extension.
constexpr Real d1 = -12715105075.0L / 11282082432, d3 = 87487479700.0L / 32700410799,
               d4 = -10690763975.0L / 1880347072, d5 = 701980252875.0L / 199316789632,
               d6 = -1453857185.0L / 822651844, d7 = 69997945.0L / 29380423;

/// Adaptive steps with embedded error control; values between the last two
/// accepted abscissae come from the continuous extension.
class Stepper {
 public:
  // The absolute floor sits near long-double roundoff of α. Much lower and
  // the step collapses whenever Q' is pure roundoff (Q ≡ 1 solves the b = 0
  // equation, and the α scan can land on it).
  Stepper(const RadialOde& ode, const ShootOptions& opts, Real scale, Real r, const State& y)
      : ode_(ode), rtol_(opts.rtol), atol_(opts.rtol * 1e-3L * scale), min_step_(opts.min_step),
        r_(r), y_(y), k1_(ode(r, y)), step_(r) {}

  Real r() const { return r_; }

  /// Takes one accepted step.
  void step() {
    while (true) {
      const Real h = step_;
      const State k2 = ode_(r_ + c2 * h, axpy(y_, h, {{a21, &k1_}}));
      const State k3 = ode_(r_ + c3 * h, axpy(y_, h, {{a31, &k1_}, {a32, &k2}}));
      const State k4 = ode_(r_ + c4 * h, axpy(y_, h, {{a41, &k1_}, {a42, &k2}, {a43, &k3}}));
      const State k5 =
          ode_(r_ + c5 * h, axpy(y_, h, {{a51, &k1_}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
      const State k6 = ode_(
          r_ + h, axpy(y_, h, {{a61, &k1_}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
      const State yn = axpy(y_, h, {{b1, &k1_}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
      const State k7 = ode_(r_ + h, yn);
      const State err = axpy(State{0, 0}, h,
                             {{e1, &k1_}, {e3, &k3}, {e4, &k4}, {e5, &k5}, {e6, &k6}, {e7, &k7}});
      if (!finite(yn)) throw Error("NonFinite", "shooting trajectory overflowed");
      const Real sq = atol_ + rtol_ * std::max(std::fabs(y_.q), std::fabs(yn.q));
      const Real sp = atol_ + rtol_ * std::max(std::fabs(y_.p), std::fabs(yn.p));
      const Real e = std::max(std::fabs(err.q) / sq, std::fabs(err.p) / sp);
      const Real fac = e == 0 ? Real(5) : std::clamp(0.9L * std::pow(e, -0.2L), 0.2L, 5.0L);
      if (e <= 1) {
        const State diff{yn.q - y_.q, yn.p - y_.p};
        const State bspl{h * k1_.q - diff.q, h * k1_.p - diff.p};
        cont_[0] = y_;
        cont_[1] = diff;
        cont_[2] = bspl;
        cont_[3] = {diff.q - h * k7.q - bspl.q, diff.p - h * k7.p - bspl.p};
        cont_[4] = axpy(State{0, 0}, h,
                        {{d1, &k1_}, {d3, &k3}, {d4, &k4}, {d5, &k5}, {d6, &k6}, {d7, &k7}});
        r_prev_ = r_;
        r_ += h;
        y_ = yn;
        k1_ = k7;
        step_ = h * fac;
        return;
      }
      step_ = h * fac;
      if (step_ < min_step_ * r_) {
        std::ostringstream os;
        os << "adaptive step fell below " << min_step_ << " relative at r = " << static_cast<double>(r_);
        throw Error("StepUnderflow", os.str());
      }
    }
  }

  /// State at r_prev <= r <= r().
  State at(Real r) const {
    const Real t = (r - r_prev_) / (r_ - r_prev_);
    const Real u = 1 - t;
    auto mix = [&](Real State::*c) {
      return cont_[0].*c +
             t * (cont_[1].*c + u * (cont_[2].*c + t * (cont_[3].*c + u * cont_[4].*c)));
    };
    return {mix(&State::q), mix(&State::p)};
  }

 private:
  RadialOde ode_;
  Real rtol_;
  Real atol_;
  Real min_step_;
  Real r_;
  State y_;
  State k1_;
  Real step_;
  Real r_prev_ = 0;
  std::array<State, 5> cont_{};
};

std::vector<double> output_grid(const ShootOptions& opts) {
  if (!(opts.r0 > 0.0) || !(opts.h > 0.0) || !(opts.grading > 0.0) || opts.r_max <= opts.r0) {
    throw Error("InvalidArgument", "invalid radial grid options");
  }
  std::vector<double> r{opts.r0};
  while (true) {
    const double next = r.back() + std::min(opts.h, opts.grading * r.back());
    if (next > opts.r_max * (1.0 + 1e-12)) break;
    r.push_back(next);
  }
  return r;
}

struct Trajectory {
  ShootKind kind = ShootKind::Undershoot;
  std::size_t count = 0;  // samples with q > 0 up to the event
  std::vector<double> q;
  std::vector<double> dq;
  double crossing_r = 0.0;
};

// The start series is truncated after the r^{2-b} term; the first neglected
// term is smaller by α^{2σ} r^{2-b}/((2-b)(N-b)). Radius where that ratio is
// 1e-8; for b near 2 it lies far inside the first output radius.
Real series_radius(const ModelParams& params, Real alpha) {
  const Real b = params.b();
  const Real ratio = 1e-8L * (2 - b) * (params.dim() - b) / std::pow(alpha, 2.0L * params.sigma());
  return std::pow(ratio, 1 / (2 - b));
}

Trajectory integrate(const ModelParams& params, Real alpha, const std::vector<double>& grid,
                     const ShootOptions& opts) {
  if (!(alpha > 0)) throw Error("InvalidArgument", "alpha must be positive");
  const Real n = params.dim();
  const Real b = params.b();
  const Real two_sigma = 2.0L * params.sigma();
  const RadialOde ode{n - 1, b, two_sigma};
  const Real nl = std::pow(alpha, two_sigma + 1);
  const Real r0 = std::min<Real>(grid.front(), series_radius(params, alpha));
  State y{alpha + alpha * r0 * r0 / (2 * n) - nl * std::pow(r0, 2 - b) / ((2 - b) * (n - b)),
          alpha * r0 / n - nl * std::pow(r0, 1 - b) / (n - b)};

  Trajectory t;
  t.q.reserve(grid.size());
  t.dq.reserve(grid.size());
  Stepper stepper(ode, opts, alpha, r0, y);
  const Real tail = static_cast<Real>(opts.tail_fraction) * alpha;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (grid[j] > r0) {
      while (stepper.r() < grid[j]) stepper.step();
      y = stepper.at(grid[j]);
    }
    if (y.q <= 0) {
      t.kind = ShootKind::Overshoot;
      const double qprev = t.q.empty() ? static_cast<double>(alpha) : t.q.back();
      const double rprev = j > 0 ? grid[j - 1] : 0.0;
      t.crossing_r = rprev + (grid[j] - rprev) * qprev / (qprev - static_cast<double>(y.q));
      t.count = t.q.size();
      return t;
    }
    t.q.push_back(static_cast<double>(y.q));
    t.dq.push_back(static_cast<double>(y.p));
    if (y.p > 0) {
      t.kind = ShootKind::Undershoot;
      t.count = t.q.size();
      return t;
    }
    // Q' must also have settled onto the linear decay rate, otherwise this
    // is a steep approach to a zero crossing.
    if (y.q < tail && -y.p <= 4 * y.q) {
      t.kind = ShootKind::Converged;
      t.count = t.q.size();
      return t;
    }
  }
  t.kind = ShootKind::Undershoot;
  t.count = t.q.size();
  return t;
}

RadialProfile make_profile(const ModelParams& params, double alpha, const std::vector<double>& grid,
                           const Trajectory& t) {
  RadialProfile p{params, {}, {}, {}, alpha, 0.0};
  p.r.assign(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(t.count));
  p.q.assign(t.q.begin(), t.q.begin() + static_cast<std::ptrdiff_t>(t.count));
  p.dq.assign(t.dq.begin(), t.dq.begin() + static_cast<std::ptrdiff_t>(t.count));
  return p;
}

// Decaying solution g(r) = r^{-ν}K_ν(r), ν = N/2 - 1, of the linearized
// far-field equation, and g'(r) = -r^{-ν}K_{ν+1}(r).
struct FarField {
  double nu;
  double value(double r) const { return std::pow(r, -nu) * std::cyl_bessel_k(std::abs(nu), r); }
  double slope(double r) const { return -std::pow(r, -nu) * std::cyl_bessel_k(std::abs(nu + 1.0), r); }
};

/// Continues the profile beyond index `cut` with the far-field decay.
void splice_tail(RadialProfile& p, const std::vector<double>& grid, std::size_t cut) {
  const FarField ff{0.5 * p.params.dim() - 1.0};
  const double rc = grid[cut];
  const double amp = p.q[cut] / ff.value(rc);
  p.r.assign(grid.begin(), grid.end());
  p.q.resize(cut + 1);
  p.dq.resize(cut + 1);
  for (std::size_t j = cut + 1; j < grid.size(); ++j) {
    p.q.push_back(amp * ff.value(grid[j]));
    p.dq.push_back(amp * ff.slope(grid[j]));
  }
}

}  // namespace

const char* to_string(ShootKind kind) {
  switch (kind) {
    case ShootKind::Overshoot: return "Overshoot";
    case ShootKind::Undershoot: return "Undershoot";
    case ShootKind::Converged: return "Converged";
  }
  return "?";
}

ShootOutcome shoot(const ModelParams& params, double alpha, const ShootOptions& opts) {
  if (opts.r_max < 20.0) throw Error("InvalidArgument", "r_max must be >= 20");
  if (opts.h > 1e-3) throw Error("InvalidArgument", "h must be <= 1e-3");
  const auto grid = output_grid(opts);
  const Trajectory t = integrate(params, alpha, grid, opts);
  ShootOutcome out{t.kind, make_profile(params, alpha, grid, t), t.crossing_r};
  return out;
}

PohozaevResiduals pohozaev_check(const RadialProfile& profile) {
  const auto& params = profile.params;
  const Norms n = norms(profile);
  const double p = params.gn_exponent();
  const double l2e = params.l2_exponent();
  const double mu2 = p / l2e;
  const double pot_ratio = (2.0 * params.sigma() + 2.0) / l2e;
  PohozaevResiduals res;
  res.res9 = std::abs(n.grad_sq - mu2 * n.mass) / (mu2 * n.mass);
  res.res10 = std::abs(n.pot - pot_ratio * n.mass) / (pot_ratio * n.mass);
  const double e = energy(n, params);
  const double e_mass = (p - 2.0) / (2.0 * l2e) * n.mass;
  const double e_grad = (p - 2.0) / (2.0 * p) * n.grad_sq;
  // At the L²-critical power E[Q] = 0; measure against the kinetic scale.
  const double scale = std::abs(e_mass) > 1e-12 * n.grad_sq ? std::abs(e_mass) : 0.5 * n.grad_sq;
  res.res16 = std::max(std::abs(e - e_mass), std::abs(e - e_grad)) / scale;
  return res;
}

double ode_residual(const RadialProfile& profile, double r_min) {
  const auto& params = profile.params;
  const auto& r = profile.r;
  const auto& q = profile.q;
  const std::vector<double> dq = profile.dq.empty() ? centered_derivative(r, q) : profile.dq;
  const double n = params.dim();
  double worst = 0.0;
  for (std::size_t j = 1; j + 1 < r.size(); ++j) {
    if (r[j] < r_min) continue;
    const double h1 = r[j] - r[j - 1];
    const double h2 = r[j + 1] - r[j];
    const double d2 = 2.0 * (h1 * q[j + 1] - (h1 + h2) * q[j] + h2 * q[j - 1]) / (h1 * h2 * (h1 + h2));
    const double nl = std::pow(r[j], -params.b()) * std::pow(std::abs(q[j]), 2.0 * params.sigma()) * q[j];
    const double drift = (n - 1.0) / r[j] * dq[j];
    const double scale = std::max({1.0, std::abs(d2), std::abs(drift), std::abs(q[j]), std::abs(nl)});
    worst = std::max(worst, std::abs(d2 + drift - q[j] + nl) / scale);
  }
  return worst;
}

GroundStateReport solve_ground_state(const ModelParams& params, double tol, const SolveOptions& opts) {
  const auto grid = output_grid(opts.shoot);
  // Bisect to full precision; the tail is matched where the brackets separate.
  ShootOptions bisect = opts.shoot;
  bisect.tail_fraction = 0.0;
  const int scan = std::max(opts.scan_points, 2);

  // Coarse geometric scan for the first undershoot -> overshoot transition.
  Real lo = 0;
  Real hi = 0;
  ShootKind prev = ShootKind::Overshoot;
  for (int i = 0; i < scan; ++i) {
    const Real a = opts.alpha_lo * std::pow(static_cast<Real>(opts.alpha_hi / opts.alpha_lo),
                                            static_cast<Real>(i) / (scan - 1));
    const ShootKind kind = integrate(params, a, grid, bisect).kind;
    if (i > 0 && prev == ShootKind::Undershoot && kind == ShootKind::Overshoot) {
      hi = a;
      break;
    }
    lo = a;
    prev = kind;
  }
  if (hi == 0) {
    std::ostringstream os;
    os << "no undershoot/overshoot transition for alpha in [" << opts.alpha_lo << ", "
       << opts.alpha_hi << "]";
    throw Error("BracketFailure", os.str());
  }

  int steps = 0;
  while (steps < opts.max_bisections) {
    const Real mid = 0.5L * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    ++steps;
    if (integrate(params, mid, grid, bisect).kind == ShootKind::Overshoot) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  // Resolve the cusp at the origin on the returned profile.
  ShootOptions fine = bisect;
  fine.r0 = static_cast<double>(std::min<Real>(fine.r0, series_radius(params, hi)));
  const auto final_grid = output_grid(fine);
  const Trajectory tl = integrate(params, lo, final_grid, bisect);
  const Trajectory th = integrate(params, hi, final_grid, bisect);
  const std::size_t len = std::min(tl.count, th.count);
  std::size_t cut = 0;
  while (cut + 1 < len &&
         std::abs(th.q[cut + 1] - tl.q[cut + 1]) <= opts.tail_separation * tl.q[cut + 1]) {
    ++cut;
  }
  while (cut > 0 && tl.dq[cut] >= 0.0) --cut;
  RadialProfile profile =
      make_profile(params, static_cast<double>(0.5L * (lo + hi)), final_grid, tl);
  splice_tail(profile, final_grid, cut);

  GroundStateReport rep{std::move(profile)};
  const Norms n = norms(rep.profile);
  rep.l2_sq = n.mass;
  rep.grad_sq = n.grad_sq;
  rep.pot = n.pot;
  rep.kopt = kopt(params, std::sqrt(n.mass));
  const auto res = pohozaev_check(rep.profile);
  rep.pohozaev_res = {res.res9, res.res10};
  rep.energy_res = res.res16;
  rep.eq_res = ode_residual(rep.profile);
  rep.bisection_steps = steps;
  rep.profile.residual = std::max({res.res9, res.res10, res.res16});
  if (!(rep.profile.residual <= tol)) {
    std::ostringstream os;
    os << "Pohozaev residual " << rep.profile.residual << " exceeds tol " << tol << " after "
       << steps << " bisection steps";
    throw Error("NoConvergence", os.str());
  }
  return rep;
}

FieldState radialize(const RadialProfile& profile, const GridSpec& grid, double scale) {
  const auto& r = profile.r;
  const auto& q = profile.q;
  if (r.size() < 2) throw Error("InvalidArgument", "profile needs at least two samples");
  if (grid.dim() != profile.params.dim()) {
    throw Error("InvalidArgument", "grid dimension differs from profile dimension");
  }
  double extent = r.front();
  for (std::size_t j = 0; j < r.size(); ++j) {
    if (std::abs(q[j]) > 1e-10) extent = r[j];
  }
  if (grid.half_width() < extent) {
    std::ostringstream os;
    os << "grid half-width " << grid.half_width() << " is below profile extent " << extent;
    throw Error("DomainTooSmall", os.str());
  }

  // Fritsch-Carlson limited slopes.
  const std::size_t n = r.size();
  std::vector<double> m = profile.dq.empty() ? centered_derivative(r, q) : profile.dq;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double delta = (q[k + 1] - q[k]) / (r[k + 1] - r[k]);
    if (delta == 0.0) {
      m[k] = m[k + 1] = 0.0;
      continue;
    }
    double a = m[k] / delta;
    double b = m[k + 1] / delta;
    if (a < 0.0) m[k] = a = 0.0;
    if (b < 0.0) m[k + 1] = b = 0.0;
    const double s = a * a + b * b;
    if (s > 9.0) {
      const double tau = 3.0 / std::sqrt(s);
      m[k] = tau * a * delta;
      m[k + 1] = tau * b * delta;
    }
  }

  const auto r2 = grid.radius_squared();
  std::vector<cplx> values(grid.size());
  for (std::size_t f = 0; f < values.size(); ++f) {
    const double rho = std::sqrt(r2[f]);
    double v = 0.0;
    if (rho <= r.front()) {
      v = q.front();
    } else if (rho < r.back()) {
      const auto it = std::upper_bound(r.begin(), r.end(), rho);
      const std::size_t k = static_cast<std::size_t>(it - r.begin()) - 1;
      const double hk = r[k + 1] - r[k];
      const double t = (rho - r[k]) / hk;
      const double t2 = t * t;
      const double t3 = t2 * t;
      v = (2 * t3 - 3 * t2 + 1) * q[k] + (t3 - 2 * t2 + t) * hk * m[k] + (-2 * t3 + 3 * t2) * q[k + 1] +
          (t3 - t2) * hk * m[k + 1];
    }
    values[f] = scale * v;
  }
  return FieldState(grid, std::move(values), 0.0);
}

}  // namespace inls
