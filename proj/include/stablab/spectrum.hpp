#pragma once

#include <span>

#include "stablab/radial.hpp"
#include "stablab/reports.hpp"

namespace stablab {

// Principal Dirichlet eigenvalue of -xi'' - ((n-1)/r) xi' - lambda f'(u) xi
// on the solution grid. The operator is discretized in conservation form with
// weight r^{n-1}, which makes the matrix pencil symmetric; the smallest
// eigenvalue comes from shifted inverse iteration. `modes` >= 1 additionally
// fills low_eigenvalues with the lowest `modes` eigenvalues (Sturm bisection).
//
// Stability flag: mu1 >= -1e-6 * (1 + |lambda| * max f'(u)).
StabilityReport principal_eigenvalue(const RadialSolution& sol, int modes = 1);

// Quadratic form Q(xi) = |S^{n-1}| ∫ (xi'^2 - lambda f'(u) xi^2) r^{n-1} dr
// by the trapezoid rule on the solution grid; xi sampled on the same grid,
// xi(1) = 0 required, xi' by centered differences.
double rayleigh(const RadialSolution& sol, std::span<const double> xi);

// Pointwise defect of (Delta + lambda f'(u))|grad u| =
// (|grad_T |grad u||^2 + |A|^2 |grad u|^2) / |grad u| on the regular set
// {|u'| >= threshold}. For radial profiles the right side is ((n-1)/r^2)|u'|.
// Derivatives of |u'| are centered differences of the stored uprime; the
// reported defect is relative: |lhs-rhs| / (1 + max(|lhs|,|rhs|)) per node.
InequalityReport gradient_identity_defect(const RadialSolution& sol,
                                          double uprime_threshold = 1e-6);

}  // namespace stablab
