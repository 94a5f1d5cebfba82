#include "inls/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "inls/quadrature.hpp"
#include "inls/spectral.hpp"

namespace inls {

namespace {

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

ModelParams::ModelParams(int dim, double sigma, double b) : dim_(dim), sigma_(sigma), b_(b) {
  if (dim < 1) throw Error("InvalidParams", "dimension N must be >= 1");
  if (!std::isfinite(sigma) || sigma <= 0.0) throw Error("InvalidParams", "sigma must be > 0");
  const double bmax = std::min(2.0, static_cast<double>(dim));
  if (!std::isfinite(b) || b < 0.0 || b >= bmax) {
    throw Error("InvalidParams", "b = " + fmt_num(b) + " violates 0 <= b < min(2, N)");
  }
  if (dim >= 3) {
    const double upper = (2.0 - b) / (dim - 2.0);
    if (sigma >= upper) {
      throw Error("InvalidParams",
                  "sigma = " + fmt_num(sigma) + " is not below 2* = " + fmt_num(upper));
    }
  }
  s_sigma_ = 0.5 * dim - (2.0 - b) / (2.0 * sigma);
}

bool ModelParams::l2_critical() const noexcept {
  return std::abs(sigma_ - critical_power()) <= 1e-12 * critical_power();
}

bool ModelParams::supercritical() const noexcept {
  return sigma_ > critical_power() && !l2_critical();
}

GridSpec::GridSpec(int dim, double half_width, std::size_t points)
    : dim_(dim), half_width_(half_width), points_(points), size_(1) {
  if (dim < 1 || dim > 3) throw Error("InvalidGrid", "grid dimension must be 1, 2 or 3");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw Error("InvalidGrid", "half-width L must be > 0");
  }
  if (points < 8 || points % 2 != 0) {
    throw Error("InvalidGrid", "points per axis must be even and >= 8");
  }
  for (int i = 0; i < dim; ++i) size_ *= points;
}

double GridSpec::cell_volume() const noexcept { return std::pow(spacing(), dim_); }

void GridSpec::unflatten(std::size_t flat, std::size_t* idx) const noexcept {
  for (int ax = dim_ - 1; ax >= 0; --ax) {
    idx[ax] = flat % points_;
    flat /= points_;
  }
}

std::vector<double> GridSpec::radius_squared() const {
  std::vector<double> out(size_);
  std::vector<std::size_t> idx(static_cast<std::size_t>(dim_));
  for (std::size_t f = 0; f < size_; ++f) {
    unflatten(f, idx.data());
    double s = 0.0;
    for (auto k : idx) s += coord(k) * coord(k);
    out[f] = s;
  }
  return out;
}

FieldState::FieldState(GridSpec g, std::vector<cplx> v, double time)
    : grid(std::move(g)), values(std::move(v)), t(time) {
  if (values.size() != grid.size()) {
    throw Error("InvalidField", "field length does not match grid size");
  }
  for (const auto& z : values) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error("NonFinite", "field contains non-finite values");
    }
  }
}

double critical_index(const ModelParams& params) { return params.s_sigma(); }

double gamma_half(int dim) {
  // Γ(1/2) = √π, Γ(1) = 1, Γ(x + 1) = x Γ(x).
  double g = (dim % 2 == 1) ? std::sqrt(std::numbers::pi) : 1.0;
  for (double x = (dim % 2 == 1) ? 0.5 : 1.0; x < 0.5 * dim - 0.25; x += 1.0) g *= x;
  return g;
}

double sphere_area(int dim) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / gamma_half(dim);
}

double mass(const FieldState& state) {
  double s = 0.0;
  for (const auto& z : state.values) s += std::norm(z);
  return s * state.grid.cell_volume();
}

double grad_sq(const FieldState& state) {
  std::vector<cplx> spec = state.values;
  Fft(state.grid).forward(spec);
  const auto k2 = wavenumber_squared(state.grid);
  double s = 0.0;
  for (std::size_t f = 0; f < spec.size(); ++f) s += k2[f] * std::norm(spec[f]);
  return s * state.grid.cell_volume() / static_cast<double>(state.grid.size());
}

double potential_term(const FieldState& state, const ModelParams& params) {
  const auto w = singular_cell_weights(state.grid, params.b());
  const double e = params.sigma() + 1.0;
  double s = 0.0;
  for (std::size_t f = 0; f < w.size(); ++f) s += w[f] * std::pow(std::norm(state.values[f]), e);
  return s;
}

double homogeneous_sobolev_norm(const FieldState& state, double s) {
  std::vector<cplx> spec = state.values;
  Fft(state.grid).forward(spec);
  const auto k2 = wavenumber_squared(state.grid);
  double acc = 0.0;
  for (std::size_t f = 0; f < spec.size(); ++f) {
    if (k2[f] == 0.0) continue;
    acc += std::pow(k2[f], s) * std::norm(spec[f]);
  }
  return std::sqrt(acc * state.grid.cell_volume() / static_cast<double>(state.grid.size()));
}

namespace {

// Radial integral of r^{N-1-shift} g; g' sharpens the rule when the profile
// carries Q'.
double profile_integral(const RadialProfile& p, const std::vector<double>& g,
                        const std::vector<double>& dg, double shift) {
  const int n = p.params.dim();
  const double power = n - 1.0 - shift;
  if (dg.empty()) return sphere_area(n) * radial_integral(p.r, g, power);
  return sphere_area(n) * radial_integral(p.r, g, dg, power);
}

}  // namespace

double mass(const RadialProfile& profile) {
  const auto& q = profile.q;
  const auto& dq = profile.dq;
  std::vector<double> g(q.size());
  std::vector<double> dg(dq.size());
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = q[j] * q[j];
  for (std::size_t j = 0; j < dg.size(); ++j) dg[j] = 2.0 * q[j] * dq[j];
  return profile_integral(profile, g, dg, 0.0);
}

double grad_sq(const RadialProfile& profile) {
  const auto& params = profile.params;
  const auto& r = profile.r;
  const auto& q = profile.q;
  if (profile.dq.empty()) {
    auto g = centered_derivative(r, q);
    for (auto& v : g) v *= v;
    return profile_integral(profile, g, {}, 0.0);
  }
  // Q'' from the equation itself.
  const auto& dq = profile.dq;
  std::vector<double> g(q.size());
  std::vector<double> dg(q.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double d2 = -(params.dim() - 1.0) / r[j] * dq[j] + q[j] -
                      std::pow(r[j], -params.b()) * std::pow(std::abs(q[j]), 2.0 * params.sigma()) * q[j];
    g[j] = dq[j] * dq[j];
    dg[j] = 2.0 * dq[j] * d2;
  }
  return profile_integral(profile, g, dg, 0.0);
}

double potential_term(const RadialProfile& profile) {
  const auto& params = profile.params;
  const auto& q = profile.q;
  const auto& dq = profile.dq;
  const double e = 2.0 * params.sigma() + 2.0;
  std::vector<double> g(q.size());
  std::vector<double> dg(dq.size());
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = std::pow(std::abs(q[j]), e);
  for (std::size_t j = 0; j < dg.size(); ++j) {
    dg[j] = e * std::pow(std::abs(q[j]), e - 2.0) * q[j] * dq[j];
  }
  return profile_integral(profile, g, dg, params.b());
}

Norms norms(const FieldState& state, const ModelParams& params) {
  return {mass(state), grad_sq(state), potential_term(state, params)};
}

Norms norms(const RadialProfile& profile) {
  return {mass(profile), grad_sq(profile), potential_term(profile)};
}

double energy(const Norms& n, const ModelParams& params, double coupling) {
  return 0.5 * n.grad_sq - coupling * n.pot / (2.0 * params.sigma() + 2.0);
}

double energy(const FieldState& state, const ModelParams& params, double coupling) {
  Norms n{0.0, grad_sq(state), coupling == 0.0 ? 0.0 : potential_term(state, params)};
  return energy(n, params, coupling);
}

double energy(const RadialProfile& profile, double coupling) {
  return energy(norms(profile), profile.params, coupling);
}

double weinstein(const Norms& n, const ModelParams& params) {
  if (n.pot <= 0.0) throw Error("ZeroDenominator", "I(u) vanishes; Weinstein functional undefined");
  return std::pow(n.grad_sq, 0.5 * params.gn_exponent()) *
         std::pow(n.mass, 0.5 * params.l2_exponent()) / n.pot;
}

double weinstein(const FieldState& state, const ModelParams& params) {
  return weinstein(norms(state, params), params);
}

double weinstein(const RadialProfile& profile) { return weinstein(norms(profile), profile.params); }

double kopt(const ModelParams& params, double q_l2_norm) {
  const double p = params.gn_exponent();
  const double l2e = params.l2_exponent();
  if (l2e == 0.0) throw Error("DegenerateExponent", "2σ+2 equals Nσ+b");
  if (!(q_l2_norm > 0.0)) throw Error("InvalidArgument", "‖Q‖ must be positive");
  return std::pow(p / l2e, 0.5 * (2.0 - p)) * (2.0 * params.sigma() + 2.0) /
         (p * std::pow(q_l2_norm, 2.0 * params.sigma()));
}

FieldState rescale(const FieldState& state, const ModelParams& params, double lambda,
                   const std::optional<GridSpec>& target) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error("InvalidArgument", "lambda must be > 0");
  }
  const GridSpec& src = state.grid;
  const GridSpec dst = target.value_or(GridSpec(src.dim(), src.half_width() / lambda, src.points()));
  if (dst.dim() != src.dim()) throw Error("InvalidArgument", "target grid dimension mismatch");

  const std::size_t m = src.points();
  const std::size_t mt = dst.points();
  const int dim = src.dim();
  const auto k = wavenumbers(src);

  std::vector<cplx> spec = state.values;
  Fft(src).forward(spec);

  // Band limit: largest per-axis wavenumber carrying non-negligible amplitude.
  double peak = 0.0;
  for (const auto& z : spec) peak = std::max(peak, std::abs(z));
  double bandwidth = 0.0;
  std::vector<std::size_t> idx(static_cast<std::size_t>(dim));
  for (std::size_t f = 0; f < spec.size(); ++f) {
    if (std::abs(spec[f]) <= 1e-12 * peak) continue;
    src.unflatten(f, idx.data());
    for (auto i : idx) bandwidth = std::max(bandwidth, std::abs(k[i]));
  }
  const double nyquist = std::numbers::pi / dst.spacing();
  if (lambda * bandwidth > nyquist * (1.0 + 1e-12)) {
    throw Error("AliasingError", "rescaled bandwidth " + fmt_num(lambda * bandwidth) +
                                     " exceeds target Nyquist " + fmt_num(nyquist));
  }

  // Evaluation matrix: row i holds e^{iξ_k(λy_i - x_0)}/M, or zero outside the
  // source box. The Nyquist mode is split symmetrically (cosine).
  const double x0 = src.coord(0);
  std::vector<cplx> eval(mt * m);
  for (std::size_t i = 0; i < mt; ++i) {
    const double y = lambda * dst.coord(i);
    if (y < -src.half_width() || y >= src.half_width()) continue;
    for (std::size_t j = 0; j < m; ++j) {
      const double ph = k[j] * (y - x0);
      eval[i * m + j] = (j == m / 2) ? cplx(std::cos(ph), 0.0) / static_cast<double>(m)
                                     : std::polar(1.0 / static_cast<double>(m), ph);
    }
  }

  // Contract one axis at a time; shape goes from m^N to mt^N.
  std::vector<std::size_t> shape(static_cast<std::size_t>(dim), m);
  std::vector<cplx> cur = std::move(spec);
  for (int ax = 0; ax < dim; ++ax) {
    std::size_t outer = 1;
    std::size_t inner = 1;
    for (int a = 0; a < ax; ++a) outer *= shape[a];
    for (int a = ax + 1; a < dim; ++a) inner *= shape[a];
    std::vector<cplx> next(outer * mt * inner);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t i = 0; i < mt; ++i) {
        cplx* dst_row = &next[(o * mt + i) * inner];
        for (std::size_t j = 0; j < m; ++j) {
          const cplx e = eval[i * m + j];
          if (e == cplx{}) continue;
          const cplx* src_row = &cur[(o * m + j) * inner];
          for (std::size_t q = 0; q < inner; ++q) dst_row[q] += e * src_row[q];
        }
      }
    }
    shape[ax] = mt;
    cur = std::move(next);
  }

  const double amp = std::pow(lambda, (2.0 - params.b()) / (2.0 * params.sigma()));
  for (auto& z : cur) z *= amp;
  return FieldState(dst, std::move(cur), state.t / (lambda * lambda));
}

}  // namespace inls
