#pragma once

#include <span>

namespace stablab {

// Composite trapezoid rule on an arbitrary ascending grid.
double trapz(std::span<const double> x, std::span<const double> y);

// Composite trapezoid rule on a uniform grid with spacing h.
double trapz_uniform(double h, std::span<const double> y);

// Surface measure |S^{n-1}| of the unit sphere in R^n.
double sphere_area(int n);

// Volume |B_1| of the unit ball in R^n.
double ball_volume(int n);

// ∫_0^theta sin^{n-2}(t) dt for the ambient dimension n (polar cap weight).
double cap_integral(int n, double theta);

}  // namespace stablab
