#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "inls/quadrature.hpp"
#include "oracles.hpp"

using namespace inls;
using std::numbers::pi;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1 exactly") {
  for (int n : {2, 5, 8, 16}) {
    const auto [x, w] = gauss_legendre(n);
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(2.0).epsilon(1e-14));
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], d);
      const double exact = d % 2 == 1 ? 0.0 : 2.0 / (d + 1);
      CHECK(std::abs(s - exact) < 1e-14);
    }
  }
}

TEST_CASE("cell weights sum to the integral over the box") {
  const double L = 3.0;
  for (double b : {0.2, 0.5, 0.9}) {
    const auto w = singular_cell_weights(GridSpec(1, L, 64), b);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    CHECK(rel(total, 2.0 * std::pow(L, 1.0 - b) / (1.0 - b)) < 1e-13);
  }
  // Square: 8/(2-b) L^{2-b} ∫_0^{π/4} cos^{b-2}θ dθ.
  for (double b : {0.5, 1.5}) {
    const auto w = singular_cell_weights(GridSpec(2, L, 32), b);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    const double ang = oracle::integrate([&](double t) { return std::pow(std::cos(t), b - 2.0); }, 0.0, pi / 4);
    CHECK(rel(total, 8.0 / (2.0 - b) * std::pow(L, 2.0 - b) * ang) < 1e-10);
  }
  // Cube: six pyramids over the faces, x = t (L, y, z),
  // ∫ = 6 L/(3-b) ∫∫_{|y|,|z|<L} (L² + y² + z²)^{-b/2}.
  {
    const double b = 1.2;
    const auto w = singular_cell_weights(GridSpec(3, L, 16), b);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    const double face = 4.0 * oracle::integrate(
                                  [&](double y) {
                                    return oracle::integrate(
                                        [&](double z) { return std::pow(L * L + y * y + z * z, -0.5 * b); }, 0.0, L,
                                        1e-13);
                                  },
                                  0.0, L, 1e-12);
    CHECK(rel(total, 6.0 * L / (3.0 - b) * face) < 1e-9);
  }
}

TEST_CASE("cell weights are homogeneous of degree N-b") {
  for (int n = 1; n <= 3; ++n) {
    const double b = 0.7;
    const auto a = singular_cell_weights(GridSpec(n, 2.0, 16), b);
    const auto c = singular_cell_weights(GridSpec(n, 4.0, 16), b);
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, rel(c[k], std::pow(2.0, n - b) * a[k]));
    CHECK(worst < 1e-12);
  }
  const auto flat = singular_cell_weights(GridSpec(2, 2.0, 16), 0.0);
  for (double v : flat) CHECK(v == doctest::Approx(0.0625).epsilon(1e-15));
}

TEST_CASE("radial integral is exact for piecewise-linear data") {
  std::vector<double> r, g;
  for (int j = 0; j <= 100; ++j) {
    r.push_back(0.01 + 0.05 * j);
    g.push_back(3.0);
  }
  for (double p : {0.0, 0.5, 1.0, 2.0, -0.5}) {
    CHECK(rel(radial_integral(r, g, p), 3.0 * std::pow(r.back(), p + 1) / (p + 1)) < 1e-13);
  }
  // g linear on [r0, R] and held at g(r0) on [0, r0].
  for (std::size_t j = 0; j < r.size(); ++j) g[j] = 1.0 + 2.0 * r[j];
  const double p = 1.0;
  const double R = r.back();
  const double r0 = r.front();
  const double exact = (1.0 + 2.0 * r0) * r0 * r0 / 2 + (R * R - r0 * r0) / 2 + 2.0 * (R * R * R - r0 * r0 * r0) / 3;
  CHECK(rel(radial_integral(r, g, p), exact) < 1e-13);
}

TEST_CASE("radial integral with derivative data is fourth order") {
  const double p = 2.0;  // smooth r^p; fractional powers need the graded grid
  const auto g = [](double r) { return std::exp(-r) * std::cos(r); };
  const auto dg = [](double r) { return -std::exp(-r) * (std::cos(r) + std::sin(r)); };
  const double r0 = 1e-3;
  const double R = 20.0;
  const double exact = g(0.0) * std::pow(r0, p + 1) / (p + 1) +
                       oracle::integrate([&](double r) { return std::pow(r, p) * g(r); }, r0, R);
  double err[2];
  int i = 0;
  for (int n : {200, 400}) {
    std::vector<double> r, gs, ds;
    for (int j = 0; j <= n; ++j) {
      const double x = r0 + (R - r0) * j / n;
      r.push_back(x);
      gs.push_back(g(x));
      ds.push_back(dg(x));
    }
    // The head term uses g(r0) for g(0); take it out of the comparison.
    const double head_fix = (g(r0) - g(0.0)) * std::pow(r0, p + 1) / (p + 1);
    err[i++] = std::abs(radial_integral(r, gs, ds, p) - head_fix - exact);
  }
  CHECK(err[1] < 1e-7);
  CHECK(err[0] / err[1] > 14.0);
}

TEST_CASE("radial integral rejects a grid touching the origin") {
  const std::vector<double> r{0.0, 1.0};
  const std::vector<double> g{1.0, 1.0};
  CHECK_THROWS_AS(radial_integral(r, g, 1.0), Error);
}

TEST_CASE("centered derivative is exact for quadratics inside the grid") {
  std::vector<double> r, q;
  double x = 0.1;
  for (int j = 0; j < 50; ++j) {
    r.push_back(x);
    q.push_back(2.0 - 3.0 * x + 0.5 * x * x);
    x += 0.01 * (1.0 + 0.1 * j);
  }
  const auto d = centered_derivative(r, q);
  for (std::size_t j = 1; j + 1 < r.size(); ++j) CHECK(std::abs(d[j] - (-3.0 + r[j])) < 1e-12);
}
