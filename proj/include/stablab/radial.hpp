#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "stablab/nonlinearity.hpp"

namespace stablab {

// Radial profile u(r) of -u'' - ((n-1)/r) u' = lambda f(u) on a uniform grid.
// Solver-produced profiles start at r = 0 with u'(0) = 0; analytic or
// singular sample data may start at r_min > 0. The grid always ends at r = 1.
struct RadialSolution {
  int n = 0;
  double lambda = 0.0;
  std::vector<double> r, u, uprime;
  Nonlinearity spec = Nonlinearity::affine(1.0, 0.0);

  bool diverged = false;
  double blowup_radius = 0.0;  // meaningful only when diverged

  double h() const { return r.size() > 1 ? r[1] - r[0] : 0.0; }
  std::size_t size() const { return r.size(); }
};

// Integrates the IVP u(0) = m0, u'(0) = 0 out to r = 1 on a uniform grid of
// `steps` cells. Dormand-Prince 5(4) with adaptive substeps inside each cell;
// the origin is entered through the series u(r) ~ m0 - lambda f(m0) r^2/(2n).
// Does not enforce u(1) = 0. Blow-up before r = 1 sets the diverged flag and
// truncates the grid at the blow-up radius.
RadialSolution integrate_radial(int n, const Nonlinearity& spec, double lambda, double m0,
                                int steps);

// Shoots on m0 = u(0) for the smallest root of u(1; m0) = 0 (minimal branch).
// Throws std::runtime_error("beyond extremal parameter ...") when no root
// exists below m0_cap.
RadialSolution solve_minimal(int n, const Nonlinearity& spec, double lambda, double tol = 1e-9,
                             double m0_cap = 20.0, int steps = 4096);

struct BranchPoint {
  double lambda = 0.0;
  double u0 = 0.0;
  double mu1 = 0.0;  // NaN when no eigenvalue evaluator was supplied
};

struct BranchFold {
  double lambda_star = 0.0;
  double u0_at_fold = 0.0;
  double lambda_uncertainty = 0.0;
  bool interior = false;  // true when the maximum of lambda(m0) is interior
};

struct Branch {
  std::vector<BranchPoint> points;  // ordered by increasing u0
  BranchFold fold;
};

using Mu1Fn = std::function<double(const RadialSolution&)>;

// Continuation in the center value m0, which parametrizes the branch
// monotonically through the fold. For each m0 the parameter lambda(m0) is the
// unique root of u(1; lambda, m0) = 0. The fold is the maximum of lambda(m0),
// refined by golden-section search to m0_tol.
Branch trace_branch(int n, const Nonlinearity& spec, double lambda_cap, int points,
                    const Mu1Fn& mu1 = {}, double m0_cap = 14.0, int steps = 4096,
                    double m0_tol = 1e-6);

// Max over interior grid nodes of |u'' + ((n-1)/r) u' + lambda f(u)| with
// u'' taken as the centered difference of the stored uprime.
double residual(const RadialSolution& sol);

// Builds a RadialSolution from closed-form u, u' on [r0, 1].
RadialSolution sample_profile(int n, double lambda, const Nonlinearity& spec,
                              const std::function<double(double)>& u,
                              const std::function<double(double)>& uprime, double r0, int steps);

// CSV export, header "r,u,uprime".
void write_profile_csv(std::ostream& os, const RadialSolution& sol);
// CSV export, header "lambda,u0,mu1".
void write_branch_csv(std::ostream& os, const Branch& branch);

}  // namespace stablab
