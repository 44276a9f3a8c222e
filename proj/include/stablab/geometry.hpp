#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "stablab/field.hpp"
#include "stablab/reports.hpp"

namespace stablab {

// Per-node level-set calculus of a sampled function u: gradient, unit normal
// nu = grad u/|grad u|, mean curvature H = div nu, and |A|^2 from the
// tangentially projected Jacobian of nu. All derivatives are centered
// differences (second-order one-sided at box/mask edges for the gradient).
//
// regular:          gradient valid and |grad u| > eps_reg
// regular_interior: regular with centered nu-stencils available, where H and
//                   |A|^2 are defined
struct GeometryFields {
  int dim = 0;
  std::array<int, 3> dims{1, 1, 1};
  double eps_reg = 0.0;
  double max_gradnorm = 0.0;

  std::vector<double> gradient;   // dim components per node
  std::vector<double> gradnorm;
  std::vector<double> normal;     // dim components per node, unit on the regular set
  std::vector<double> mean_curv;  // on regular_interior
  std::vector<double> shape_sq;   // |A|^2 on regular_interior
  std::vector<std::uint8_t> grad_valid, regular, regular_interior;
};

// eps_reg <= 0 selects the default 1e-3 * max |grad u|.
GeometryFields geometry_fields(const ScalarField& field, double eps_reg = -1.0);

// Tangential derivatives delta_i phi = d_i phi - (d_k phi nu^k) nu^i and
// |grad_T phi|^2 = sum_i (delta_i phi)^2, on geom's regular set.
struct TangentialGradient {
  int dim = 0;
  std::vector<double> delta;     // dim components per node
  std::vector<double> tgrad_sq;
  std::vector<std::uint8_t> valid;
};

TangentialGradient tangential_gradient(const GeometryFields& geom, const ScalarField& phi);

// --- level-set extraction ------------------------------------------------

struct Segment2D {
  std::array<double, 2> a, b;
};

struct Triangle3D {
  std::array<double, 3> a, b, c;
};

// Marching squares / marching tetrahedra (6-tet cube split), restricted to
// cells whose corners are all masked-in.
std::vector<Segment2D> extract_level_2d(const ScalarField& field, double t);
std::vector<Triangle3D> extract_level_3d(const ScalarField& field, double t);

// ∫_{u=t} g dV over the extracted level set (polyline length / triangle area
// measure, g interpolated multilinearly).
double level_integral(const ScalarField& field, const ScalarField& g, double t);

// CSV "x1,y1,x2,y2" per segment.
void write_segments_csv(std::ostream& os, const std::vector<Segment2D>& segments);

// --- integral checks ------------------------------------------------------

// Compares ∫ |grad u| g dx against ∫ dt ∫_{u=t} g dV with `levels` midpoint
// slices of the sampled range of u.
InequalityReport coarea_check(const ScalarField& field, const ScalarField& g, int levels);

// Defect of the foliation integration-by-parts identity along `axis`:
//   ∫ |grad u| (delta_i phi) psi = -∫ |grad u| phi (delta_i psi)
//                                  + ∫ |grad u| H nu^i phi psi.
// Requires either u locally constant along each piece of the mask boundary or
// phi*psi vanishing there (checked; mixed per-component hypotheses allowed).
InequalityReport ibp_defect(const ScalarField& field, const ScalarField& phi,
                            const ScalarField& psi, int axis);

}  // namespace stablab
