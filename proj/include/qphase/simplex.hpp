#pragma once

#include <span>
#include <vector>

namespace qphase {

// Euclidean projection onto the probability simplex by the standard
// sort-and-threshold rule. Clipped coordinates come out exactly zero.
void project_simplex(std::span<double> v);

// Euclidean norm of the projection of g onto the tangent cone of the simplex
// at x, i.e. onto {d : sum d_i = 0, d_i >= 0 wherever x_i = 0}. This is the
// first-order stationarity residual for maximizing over the simplex.
double tangent_residual(std::span<const double> x, std::span<const double> g);

} // namespace qphase
