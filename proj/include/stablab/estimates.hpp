#pragma once

#include <functional>
#include <span>
#include <vector>

#include "stablab/radial.hpp"
#include "stablab/reports.hpp"
#include "stablab/field.hpp"

namespace stablab {

// Admissible exponent window for the weighted Dirichlet estimate: the
// intersection of (n-2, n-1) with the quadratic condition
//   (alpha-2)^2/4 < (n-1-alpha)^2/(n-1)   (general domains)
//   (alpha-2)^2/4 < n-1                   (radial)
// with endpoints solved in closed form.
struct AlphaAdmissibility {
  int n = 0;
  bool radial = false;
  bool nonempty = false;
  double lo = 0.0, hi = 0.0;

  bool contains(double alpha) const { return nonempty && alpha > lo && alpha < hi; }
};

AlphaAdmissibility admissible_alpha(int n, bool radial);

// The two defining inequalities, evaluated directly (for certificates).
bool alpha_range_ok(int n, double alpha);                       // n-2 < alpha < n-1
bool alpha_quadratic_ok(int n, bool radial, double alpha);

// Curvature-energy bound for stable solutions:
//   ∫ (|grad_T |grad u||^2 + |A|^2 |grad u|^2) eta^2 <= ∫ |grad u|^2 |grad eta|^2.
// Radial reduction: the left side is (n-1)/r^2 u'^2 eta^2. Refuses unstable
// solutions (the bound is only asserted under stability).
InequalityReport curvature_stability_bound(const RadialSolution& sol,
                                           const std::function<double(double)>& eta,
                                           const std::function<double(double)>& deta,
                                           const StabilityReport& stability);

// Weighted Dirichlet integral I = ∫ |grad u|^2 r^{-alpha} dx (y = 0) against
// the boundary-layer energy ||grad u||^2_{L^2(Omega \ K_delta)}.
EstimateReport weighted_dirichlet(const RadialSolution& sol, double alpha, double delta,
                                  const StabilityReport& stability,
                                  bool override_admissibility = false);

// Reproduces every link of the chain behind the weighted Dirichlet bound on a
// radial solution: the foliated Hardy step with phi_kappa = (u'^2+kappa^2)^{1/4} zeta,
// the epsilon Cauchy-Schwarz split, the pointwise curvature comparison
// H^2 <= (n-1)|A|^2, the stability step with eta = r^{(2-alpha)/2} zeta, and the
// final absorption that solves for I. zeta is a C^1 cubic ramp, 1 on K_{delta/2},
// 0 at the boundary, |zeta'| <= 3/delta.
std::vector<InequalityReport> dirichlet_pipeline(const RadialSolution& sol, double alpha,
                                                 double delta, double epsilon,
                                                 const StabilityReport& stability);

// |u(0) - average over B_{delta/2}(0)| against ∫ r_y^{1-n} |grad u| dx with the
// representation constant reported as an empirical fit, not assumed.
EstimateReport potential_bound(const RadialSolution& sol, double delta);

// sup_{K_delta} |u| / (||u||_{L^1} + ||grad u||_{L^2(Omega \ K_delta)}).
EstimateReport linfty_ratio(const RadialSolution& sol, double delta);

// Checks the explicit singular pair u = -2 log r, f(u) = 2(n-2) e^u:
// (i) pointwise PDE residual on (h, 1] from the closed-form derivatives,
// (ii) the stability form against xi = r^{-(n-2)/2+s}(1-r) for a sweep of
// s > 0, nonnegative for all sampled s exactly when (n-2)^2/4 >= 2(n-2).
struct SingularCheck {
  int n = 0;
  double max_residual = 0.0;
  bool form_nonnegative = false;
  double min_q = 0.0;
  double witness_s = 0.0;                     // argmin of Q over the sweep
  double hardy_const = 0.0;                   // (n-2)^2/4
  double nonlin_const = 0.0;                  // 2(n-2)
  std::vector<std::pair<double, double>> sweep;  // (s, Q(xi_s))
};

SingularCheck singular_solution_check(int n);

// Morrey seminorm sup_{y,rho} rho^{lam-n} ∫_{B_rho(y)} |w|^p, approximated on
// a center lattice and dyadic radii; returns the p-th root (a lower bound of
// the true sup). Radial data uses a lattice of |y| values.
double morrey_norm_radial(std::span<const double> r, std::span<const double> w, int n, double p,
                          double lam, int centers = 16, int radii = 12);
double morrey_norm(const RadialSolution& sol, bool of_gradient, double p, double lam,
                   int centers = 16, int radii = 12);
double morrey_norm(const ScalarField& w, double p, double lam, int centers_per_axis = 16,
                   int radii = 12);

double lp_norm(const RadialSolution& sol, double p);

// Minimal-branch family u_{t lambda*} of the exponential problem, used by
// the verification campaigns.
struct GelfandFamily {
  int n = 0;
  double lambda_star = 0.0;
  double u0_at_fold = 0.0;
  std::vector<double> ratios;
  std::vector<RadialSolution> members;
};

GelfandFamily gelfand_family(int n, std::vector<double> ratios, int branch_points = 80,
                             int steps = 4096, double m0_cap = 12.0);

}  // namespace stablab
