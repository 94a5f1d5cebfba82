// Quadrature rules for the singular weight |x|^{-b} on Cartesian cells and
// for radial integrals ∫ r^p g(r) dr on sampled profiles.
#pragma once

#include <span>
#include <utility>
#include <vector>

#include "inls/core.hpp"

namespace inls {

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

/// Exact cell integrals ∫_cell |x|^{-b} dx for every sample of `grid`, in
/// flat order. For b = 0 every entry is h^N.
///
/// Cells far from the origin use tensor Gauss-Legendre rules; cells near it
/// are subdivided, and the cell with a corner at the origin is resolved by
/// self-similarity: C(s) = s^{N-b} C(1).
std::vector<double> singular_cell_weights(const GridSpec& grid, double b);

/// ∫_0^{r_last} r^power g(r) dr with g piecewise linear between samples and
/// r^power integrated exactly; g is held at g(r_0) on [0, r_0].
/// Requires power > -1 and strictly increasing positive r.
double radial_integral(std::span<const double> r, std::span<const double> g, double power);

/// Same integral with the endpoint-corrected trapezoid rule on r^power g,
/// using the sampled derivative dg; fourth order in the local spacing.
double radial_integral(std::span<const double> r, std::span<const double> g,
                       std::span<const double> dg, double power);

/// First derivative on a nonuniform grid by 3-point centered differences.
std::vector<double> centered_derivative(std::span<const double> r, std::span<const double> q);

}  // namespace inls
