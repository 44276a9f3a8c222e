#pragma once

#include <functional>

namespace stablab {

// Root of f on [a,b] by Brent's method. Requires f(a)*f(b) <= 0.
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double xtol = 1e-14, int max_iter = 200);

// Argmax of a unimodal function on [a,b] by golden-section search.
double golden_max(const std::function<double(double)>& f, double a, double b,
                  double xtol = 1e-8);

// Adaptive Simpson quadrature of f over [a,b].
double simpson(const std::function<double(double)>& f, double a, double b,
               double tol = 1e-12, int max_depth = 32);

}  // namespace stablab
