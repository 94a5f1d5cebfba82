#include "inls/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace inls {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[static_cast<std::size_t>(i)] = z;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

namespace {

struct CellIntegrator {
  int dim;
  double b;
  std::pair<std::vector<double>, std::vector<double>> gl4 = gauss_legendre(4);
  std::pair<std::vector<double>, std::vector<double>> gl8 = gauss_legendre(8);
  double origin_unit = 0.0;  // ∫_{[0,1]^N} |x|^{-b}

  CellIntegrator(int d, double bb) : dim(d), b(bb) {
    // C(1) = S + 2^{-(N-b)} C(1), S the non-origin children of the unit cube.
    double s = 0.0;
    for (int child = 1; child < (1 << dim); ++child) {
      std::array<double, 3> a{};
      for (int ax = 0; ax < dim; ++ax) a[ax] = ((child >> ax) & 1) ? 0.5 : 0.0;
      s += integrate(a, 0.5);
    }
    origin_unit = s / (1.0 - std::pow(2.0, -(dim - b)));
  }

  double tensor(const std::array<double, 3>& a, double size,
                const std::pair<std::vector<double>, std::vector<double>>& rule) const {
    const auto& [x, w] = rule;
    const std::size_t n = x.size();
    const double half = 0.5 * size;
    std::size_t total = 1;
    for (int ax = 0; ax < dim; ++ax) total *= n;
    double sum = 0.0;
    for (std::size_t f = 0; f < total; ++f) {
      std::size_t rem = f;
      double r2 = 0.0;
      double wt = 1.0;
      for (int ax = 0; ax < dim; ++ax) {
        const std::size_t i = rem % n;
        rem /= n;
        const double c = a[ax] + half * (1.0 + x[i]);
        r2 += c * c;
        wt *= w[i];
      }
      sum += wt * std::pow(r2, -0.5 * b);
    }
    double jac = 1.0;
    for (int ax = 0; ax < dim; ++ax) jac *= half;
    return sum * jac;
  }

  double integrate(const std::array<double, 3>& a, double size) const {
    double d2 = 0.0;
    for (int ax = 0; ax < dim; ++ax) d2 += a[ax] * a[ax];
    if (d2 == 0.0) return std::pow(size, dim - b) * origin_unit;
    const double ratio = std::sqrt(d2) / size;
    if (ratio >= 8.0) return tensor(a, size, gl4);
    if (ratio >= 3.0) return tensor(a, size, gl8);
    double sum = 0.0;
    const double h = 0.5 * size;
    for (int child = 0; child < (1 << dim); ++child) {
      std::array<double, 3> c = a;
      for (int ax = 0; ax < dim; ++ax) c[ax] += ((child >> ax) & 1) ? h : 0.0;
      sum += integrate(c, h);
    }
    return sum;
  }
};

std::vector<double> compute_cell_weights(const GridSpec& grid, double b) {
  const std::size_t m = grid.points();
  const std::size_t half = m / 2;
  const double h = grid.spacing();
  const int dim = grid.dim();
  if (m % 2 != 0) {
    throw Error("SingularQuadrature", "odd point count places a sample at the origin");
  }
  std::vector<double> out(grid.size());
  if (b == 0.0) {
    std::fill(out.begin(), out.end(), grid.cell_volume());
    return out;
  }

  std::size_t orth_size = 1;
  for (int ax = 0; ax < dim; ++ax) orth_size *= half;
  std::vector<double> orth(orth_size);
  if (dim == 1) {
    for (std::size_t i = 0; i < half; ++i) {
      const double a = static_cast<double>(i) * h;
      orth[i] = (std::pow(a + h, 1.0 - b) - std::pow(a, 1.0 - b)) / (1.0 - b);
    }
  } else {
    // Unit-spacing cells scaled by h^{N-b}; the weight is homogeneous.
    const CellIntegrator integ(dim, b);
    const double scale = std::pow(h, dim - b);
    for (std::size_t f = 0; f < orth_size; ++f) {
      std::array<double, 3> a{};
      std::size_t rem = f;
      std::array<std::size_t, 3> idx{};
      for (int ax = dim - 1; ax >= 0; --ax) {
        idx[ax] = rem % half;
        rem /= half;
      }
      // Cells are symmetric under coordinate permutations; reuse sorted ones.
      std::array<std::size_t, 3> sorted = idx;
      std::sort(sorted.begin(), sorted.begin() + dim);
      std::size_t key = 0;
      for (int ax = 0; ax < dim; ++ax) key = key * half + sorted[ax];
      if (key < f) {
        orth[f] = orth[key];
        continue;
      }
      for (int ax = 0; ax < dim; ++ax) a[ax] = static_cast<double>(idx[ax]);
      orth[f] = integ.integrate(a, 1.0) * scale;
    }
  }

  std::vector<std::size_t> idx(static_cast<std::size_t>(dim));
  for (std::size_t f = 0; f < out.size(); ++f) {
    grid.unflatten(f, idx.data());
    std::size_t o = 0;
    for (auto k : idx) {
      const std::size_t i = k >= half ? k - half : half - 1 - k;
      o = o * half + i;
    }
    out[f] = orth[o];
  }
  return out;
}

}  // namespace

std::vector<double> singular_cell_weights(const GridSpec& grid, double b) {
  using Key = std::tuple<int, double, std::size_t, double>;
  static std::mutex mutex;
  static std::map<Key, std::vector<double>> cache;
  const Key key{grid.dim(), grid.half_width(), grid.points(), b};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto weights = compute_cell_weights(grid, b);
  std::lock_guard lock(mutex);
  if (cache.size() > 16) cache.clear();
  cache.emplace(key, weights);
  return weights;
}

double radial_integral(std::span<const double> r, std::span<const double> g, double power) {
  if (r.empty()) return 0.0;
  if (r.front() <= 0.0) {
    throw Error("SingularQuadrature", "radial abscissae must be strictly positive");
  }
  const double p1 = power + 1.0;
  const double p2 = power + 2.0;
  double sum = g[0] * std::pow(r[0], p1) / p1;
  double ap1 = std::pow(r[0], p1);
  double ap2 = ap1 * r[0];
  for (std::size_t j = 0; j + 1 < r.size(); ++j) {
    const double a = r[j];
    const double c = r[j + 1];
    const double cp1 = std::pow(c, p1);
    const double cp2 = cp1 * c;
    const double i0 = (cp1 - ap1) / p1;
    const double i1 = (cp2 - ap2) / p2;
    const double len = c - a;
    sum += g[j] * (c * i0 - i1) / len + g[j + 1] * (i1 - a * i0) / len;
    ap1 = cp1;
    ap2 = cp2;
  }
  return sum;
}

double radial_integral(std::span<const double> r, std::span<const double> g,
                       std::span<const double> dg, double power) {
  if (r.empty()) return 0.0;
  if (r.front() <= 0.0) {
    throw Error("SingularQuadrature", "radial abscissae must be strictly positive");
  }
  double sum = g[0] * std::pow(r[0], power + 1.0) / (power + 1.0);
  auto f = [&](std::size_t j) { return std::pow(r[j], power) * g[j]; };
  auto df = [&](std::size_t j) {
    return std::pow(r[j], power) * (power / r[j] * g[j] + dg[j]);
  };
  double fa = f(0);
  double dfa = df(0);
  for (std::size_t j = 0; j + 1 < r.size(); ++j) {
    const double len = r[j + 1] - r[j];
    const double fb = f(j + 1);
    const double dfb = df(j + 1);
    sum += 0.5 * len * (fa + fb) + len * len / 12.0 * (dfa - dfb);
    fa = fb;
    dfa = dfb;
  }
  return sum;
}

std::vector<double> centered_derivative(std::span<const double> r, std::span<const double> q) {
  const std::size_t n = r.size();
  std::vector<double> d(n, 0.0);
  if (n < 3) {
    if (n == 2) d[0] = d[1] = (q[1] - q[0]) / (r[1] - r[0]);
    return d;
  }
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double h1 = r[j] - r[j - 1];
    const double h2 = r[j + 1] - r[j];
    d[j] = -h2 / (h1 * (h1 + h2)) * q[j - 1] + (h2 - h1) / (h1 * h2) * q[j] +
           h1 / (h2 * (h1 + h2)) * q[j + 1];
  }
  auto one_sided = [&](std::size_t i0, std::size_t i1, std::size_t i2) {
    const double h1 = r[i1] - r[i0];
    const double h2 = r[i2] - r[i1];
    return -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * q[i0] + (h1 + h2) / (h1 * h2) * q[i1] -
           h1 / (h2 * (h1 + h2)) * q[i2];
  };
  d[0] = one_sided(0, 1, 2);
  // Mirror of the forward formula for the last point.
  {
    const double h1 = r[n - 1] - r[n - 2];
    const double h2 = r[n - 2] - r[n - 3];
    d[n - 1] = (2.0 * h1 + h2) / (h1 * (h1 + h2)) * q[n - 1] - (h1 + h2) / (h1 * h2) * q[n - 2] +
               h1 / (h2 * (h1 + h2)) * q[n - 3];
  }
  return d;
}

}  // namespace inls
