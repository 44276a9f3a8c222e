#pragma once

#include <array>
#include <functional>
#include <vector>

#include "stablab/field.hpp"
#include "stablab/geometry.hpp"
#include "stablab/radial.hpp"
#include "stablab/reports.hpp"

namespace stablab {

// Weighted sample of a hypersurface in R^n: points, unit normals, mean
// curvature, area weights, and the test function phi with |grad_T phi|^2.
struct SurfaceSample {
  int ambient_dim = 0;
  std::vector<double> points;    // count * n
  std::vector<double> normals;   // count * n
  std::vector<double> mean_curv;
  std::vector<double> weight;
  std::vector<double> phi;
  std::vector<double> tgrad_sq;

  std::size_t count() const { return weight.size(); }
};

struct HardyPair {
  HardyReport foliated;  // (n-1-a) I + a I_r <= sqrt(I) sqrt(J)
  HardyReport manifold;  // (n-1-a)^2 I <= J
};

// Foliated Hardy inequality on a sampled field. The weight r_y^{-alpha} is
// excised on B_{2h}(y) with the analytic remainder folded into eps_disc.
// Requires 0 <= alpha < n-1 and u or phi vanishing on the domain boundary.
HardyPair foliated_hardy(const ScalarField& u, const ScalarField& phi, double alpha,
                         std::array<double, 3> y);

// 1D reduction for radially symmetric data about y = 0 with radial phi.
HardyPair foliated_hardy(const RadialSolution& sol, const std::function<double(double)>& phi,
                         double alpha);

// Radially-symmetric variant: (n-1)^2 ∫ |u_r| phi^2 r^{-alpha}
//   <= ∫ |u_r| (4 |grad_T phi|^2 + H^2 phi^2) r^{2-alpha},  H = (n-1)/r.
// phi = g(r) * Y(theta) tabulated on an (r, theta) product grid; Y empty
// means radial phi, for which both sides coincide node by node.
HardyReport radial_hardy(const RadialSolution& sol, const std::function<double(double)>& g,
                         double alpha, const std::function<double(double)>& zonal = {},
                         int theta_points = 512);

// Single-hypersurface inequalities and Carron's bound for comparison.
struct SurfaceHardySet {
  HardyReport p2;       // (n-3) ∫ phi^2/|x|^2 + 2 ∫ (x/|x|.nu)^2 phi^2/|x|^2 <= CS right side
  HardyReport squared;  // ((n-3)^2/4) ∫ phi^2/|x|^2 <= ∫ (|grad_T phi|^2 + H^2 phi^2/4)
  HardyReport carron;   // ((n-3)^2/4) ∫ phi^2/|x|^2 <= ∫ (|grad_T phi|^2 + ((n-3)/2)(|H|/|x|) phi^2)
  double rhs_ratio_new_vs_carron = 0.0;
};

SurfaceHardySet surface_hardy(const SurfaceSample& m);

// --- surface builders -------------------------------------------------------

// Centered sphere of radius rho in R^n as one aggregate sample with exact
// area, normal and curvature (every integrand is constant there); phi == 1.
SurfaceSample sphere_surface_exact(int n, double rho);

// Recursively subdivided icosahedral sphere in R^3. Samples are flat-triangle
// centroids with flat areas; curvature carries the exact 2/rho.
SurfaceSample icosphere_surface(
    double rho, int subdivisions,
    const std::function<double(std::array<double, 3>)>& phi = {},
    const std::function<double(std::array<double, 3>, std::array<double, 3>)>& tgrad_sq = {});

// Flat hyperplane patch through the origin in R^n with a radial test function
// g(|x|) supported on [0, radius]; midpoint shells, H = 0.
SurfaceSample flat_patch_radial(int ambient_n, double radius, int shells,
                                const std::function<double(double)>& g,
                                const std::function<double(double)>& gprime);

// Triangle soup (e.g. an extracted level set) to a SurfaceSample; normals
// oriented outward from the origin.
SurfaceSample surface_from_triangles(
    const std::vector<Triangle3D>& tris, const std::function<double(std::array<double, 3>)>& mean_curv,
    const std::function<double(std::array<double, 3>)>& phi,
    const std::function<double(std::array<double, 3>)>& tgrad_sq);

}  // namespace stablab
