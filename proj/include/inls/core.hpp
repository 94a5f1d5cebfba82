// Model parameters, discretization types and the conserved/variational
// functionals of the inhomogeneous NLS  i u_t + Δu + |x|^{-b}|u|^{2σ}u = 0.
#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace inls {

using cplx = std::complex<double>;

/// Error carrying a stable machine-readable kind (e.g. "SingularQuadrature").
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// Dimension N, power σ and inhomogeneity b, validated on construction.
///
/// b = 0 is admitted (classical NLS) so closed-form solitons can serve as
/// oracles; otherwise 0 < b < min(2, N) and 0 < σ < 2*.
class ModelParams {
 public:
  ModelParams(int dim, double sigma, double b);

  int dim() const noexcept { return dim_; }
  double sigma() const noexcept { return sigma_; }
  double b() const noexcept { return b_; }

  /// s_σ = N/2 - (2-b)/(2σ).
  double s_sigma() const noexcept { return s_sigma_; }

  /// Nσ + b, the gradient exponent of the Gagliardo-Nirenberg inequality.
  double gn_exponent() const noexcept { return dim_ * sigma_ + b_; }

  /// 2σ + 2 - (Nσ + b), the L² exponent of the Gagliardo-Nirenberg inequality.
  double l2_exponent() const noexcept { return 2.0 * sigma_ + 2.0 - gn_exponent(); }

  /// (2-b)/N, the L²-critical power.
  double critical_power() const noexcept { return (2.0 - b_) / dim_; }

  /// True when σ equals (2-b)/N up to 1e-12 relative.
  bool l2_critical() const noexcept;

  /// True when σ > (2-b)/N strictly (s_σ > 0).
  bool supercritical() const noexcept;

 private:
  int dim_;
  double sigma_;
  double b_;
  double s_sigma_;
};

/// Cell-centered periodic grid on [-L, L)^N with M points per axis.
/// Samples sit at x_k = -L + (k + 1/2) h, so the origin is never sampled.
class GridSpec {
 public:
  GridSpec(int dim, double half_width, std::size_t points);

  int dim() const noexcept { return dim_; }
  double half_width() const noexcept { return half_width_; }
  std::size_t points() const noexcept { return points_; }
  double spacing() const noexcept { return 2.0 * half_width_ / static_cast<double>(points_); }
  double cell_volume() const noexcept;
  std::size_t size() const noexcept { return size_; }

  double coord(std::size_t k) const noexcept {
    return -half_width_ + (static_cast<double>(k) + 0.5) * spacing();
  }

  /// Per-axis indices of the flat (row-major) index.
  void unflatten(std::size_t flat, std::size_t* idx) const noexcept;

  /// |x|² at every sample, in flat order.
  std::vector<double> radius_squared() const;

  friend bool operator==(const GridSpec& a, const GridSpec& c) {
    return a.dim_ == c.dim_ && a.half_width_ == c.half_width_ && a.points_ == c.points_;
  }

 private:
  int dim_;
  double half_width_;
  std::size_t points_;
  std::size_t size_;
};

/// Complex field on a grid at time t.
struct FieldState {
  GridSpec grid;
  std::vector<cplx> values;
  double t = 0.0;

  FieldState(GridSpec g, std::vector<cplx> v, double time = 0.0);

  /// Zero field on the grid.
  static FieldState zeros(const GridSpec& g) { return {g, std::vector<cplx>(g.size()), 0.0}; }
};

/// Radial samples of a ground state Q(r) with its derivative.
///
/// r is uniform after r[0] > 0. dq may be empty, in which case derivatives
/// are recovered by centered differences.
struct RadialProfile {
  ModelParams params;
  std::vector<double> r;
  std::vector<double> q;
  std::vector<double> dq;
  double alpha = 0.0;
  double residual = 0.0;
};

/// One row of evolution diagnostics.
struct InvariantRecord {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double grad_sq = 0.0;
  double variance = 0.0;
  double variance_rate = 0.0;
  double virial_rhs = 0.0;
};

/// The three integrals every functional here is built from.
struct Norms {
  double mass = 0.0;     // ‖u‖²
  double grad_sq = 0.0;  // ‖∇u‖²
  double pot = 0.0;      // ∫|x|^{-b}|u|^{2σ+2}
};

double critical_index(const ModelParams& params);

/// Surface area ω_{N-1} = 2π^{N/2}/Γ(N/2) of the unit sphere (2 for N = 1).
double sphere_area(int dim);

/// Γ(N/2) by the half-integer recurrence.
double gamma_half(int dim);

double mass(const FieldState& state);
double mass(const RadialProfile& profile);

double grad_sq(const FieldState& state);
double grad_sq(const RadialProfile& profile);

double potential_term(const FieldState& state, const ModelParams& params);
double potential_term(const RadialProfile& profile);

Norms norms(const FieldState& state, const ModelParams& params);
Norms norms(const RadialProfile& profile);

/// ½‖∇u‖² - coupling/(2σ+2) I(u). coupling = 0 gives the free energy.
double energy(const Norms& n, const ModelParams& params, double coupling = 1.0);
double energy(const FieldState& state, const ModelParams& params, double coupling = 1.0);
double energy(const RadialProfile& profile, double coupling = 1.0);

/// Weinstein functional ‖∇u‖^{Nσ+b}‖u‖^{2σ+2-(Nσ+b)} / I(u).
double weinstein(const Norms& n, const ModelParams& params);
double weinstein(const FieldState& state, const ModelParams& params);
double weinstein(const RadialProfile& profile);

/// Sharp Gagliardo-Nirenberg constant from ‖Q‖ (not squared).
double kopt(const ModelParams& params, double q_l2_norm);

/// Homogeneous Sobolev norm ‖u‖_{Ḣ^s} with symbol |ξ|^s; zero mode dropped.
double homogeneous_sobolev_norm(const FieldState& state, double s);

/// u_λ(x) = λ^{(2-b)/(2σ)} u(λx), resampled by band-limited interpolation.
///
/// The default target grid is the source grid contracted by λ, on which
/// resampling is exact. Points of the target falling outside the source
/// box are set to zero.
FieldState rescale(const FieldState& state, const ModelParams& params, double lambda,
                   const std::optional<GridSpec>& target = std::nullopt);

}  // namespace inls
