#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "oracles.hpp"
#include "stablab/field.hpp"
#include "stablab/geometry.hpp"

using namespace stablab;

namespace {

double norm3(std::array<double, 3> p) {
  return std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
}

ScalarField cone3d(int m) {  // u = |x| on [-1.2, 1.2]^3
  return ScalarField::sample(3, {-1.2, -1.2, -1.2}, {1.2, 1.2, 1.2}, {m, m, m},
                             [](std::array<double, 3> p) { return norm3(p); });
}

ScalarField cone2d(int m) {
  return ScalarField::sample(2, {-1.2, -1.2, 0}, {1.2, 1.2, 0}, {m, m, 1},
                             [](std::array<double, 3> p) { return std::hypot(p[0], p[1]); });
}

}  // namespace

TEST_CASE("geometry_fields: concentric spheres in R^3") {
  const int m = 97;  // grid spacing 0.025, nodes at multiples of 0.025
  ScalarField u = cone3d(m);
  const GeometryFields g = geometry_fields(u);
  const double h = u.max_spacing();

  // node at (0.5, 0, 0): H = 2/|x| = 4, |A|^2 = 2/|x|^2 = 8, H^2 = 2 |A|^2
  int i0 = -1, j0 = -1;
  for (int i = 0; i < m; ++i) {
    const auto p = u.position(i, 0, 0);
    if (std::abs(p[0] - 0.5) < 1e-9) i0 = i;
    if (std::abs(p[0]) < 1e-9) j0 = i;
  }
  REQUIRE(i0 >= 0);
  REQUIRE(j0 >= 0);
  const std::size_t id = u.index(i0, j0, j0);
  REQUIRE(g.regular_interior[id]);
  CHECK(g.mean_curv[id] == doctest::Approx(4.0).epsilon(10.0 * h));
  CHECK(g.shape_sq[id] == doctest::Approx(8.0).epsilon(10.0 * h));
  CHECK(g.mean_curv[id] * g.mean_curv[id] ==
        doctest::Approx(2.0 * g.shape_sq[id]).epsilon(20.0 * h));

  // |nu| = 1 on the regular set
  for (std::size_t k = 0; k < u.node_count(); k += 101) {
    if (!g.regular[k]) continue;
    double nn = 0.0;
    for (int a = 0; a < 3; ++a) nn += g.normal[k * 3 + a] * g.normal[k * 3 + a];
    CHECK(std::abs(nn - 1.0) <= 1e-10);
  }

  // H^2 <= (n-1)|A|^2 + tolerance at every regular-interior node
  for (std::size_t k = 0; k < u.node_count(); ++k) {
    if (!g.regular_interior[k]) continue;
    CHECK(g.mean_curv[k] * g.mean_curv[k] <=
          2.0 * g.shape_sq[k] + 50.0 * h * (1.0 + g.shape_sq[k]));
  }
}

TEST_CASE("geometry_fields: flat foliation has zero curvature") {
  ScalarField u = ScalarField::sample(3, {0, 0, 0}, {1, 1, 1}, {33, 33, 33},
                                      [](std::array<double, 3> p) { return p[0]; });
  const GeometryFields g = geometry_fields(u);
  for (std::size_t k = 0; k < u.node_count(); ++k) {
    if (!g.regular_interior[k]) continue;
    CHECK(std::abs(g.mean_curv[k]) <= 1e-12);
    CHECK(std::abs(g.shape_sq[k]) <= 1e-12);
  }
}

TEST_CASE("geometry_fields: circle curvature in R^2 under refinement") {
  double errs[2];
  int idx = 0;
  for (int m : {97, 193}) {
    ScalarField u = cone2d(m);
    const GeometryFields g = geometry_fields(u);
    int i0 = -1, j0 = -1;
    for (int i = 0; i < m; ++i) {
      const auto p = u.position(i, 0, 0);
      if (std::abs(p[0] - 0.5) < 1e-9) i0 = i;
      if (std::abs(p[0]) < 1e-9) j0 = i;
    }
    REQUIRE(i0 >= 0);
    const std::size_t id = u.index(i0, j0);
    REQUIRE(g.regular_interior[id]);
    errs[idx++] = std::abs(g.mean_curv[id] - 2.0);
    CHECK(std::abs(g.mean_curv[id] - 2.0) <= 10.0 * u.max_spacing());
  }
  CHECK(errs[1] < errs[0]);
}

TEST_CASE("geometry_fields: curvature of offset spheres u = |x - y0|") {
  ScalarField u = ScalarField::sample(3, {-1.2, -1.2, -1.2}, {1.2, 1.2, 1.2}, {81, 81, 81},
                                      [](std::array<double, 3> p) {
                                        return norm3({p[0] - 0.15, p[1] + 0.1, p[2]});
                                      });
  const GeometryFields g = geometry_fields(u);
  const double h = u.max_spacing();
  double worst = 0.0;
  for (int k = 0; k < 81; ++k)
    for (int j = 0; j < 81; ++j)
      for (int i = 0; i < 81; ++i) {
        const std::size_t id = u.index(i, j, k);
        if (!g.regular_interior[id]) continue;
        const double d = u.at(i, j, k);
        if (d < 0.4 || d > 1.0) continue;  // annulus
        worst = std::max(worst, std::abs(g.mean_curv[id] - 2.0 / d) / (2.0 / d));
      }
  CHECK(worst <= 10.0 * h);
}

TEST_CASE("tangential_gradient: algebraic identities at machine precision") {
  ScalarField u = cone3d(49);
  const GeometryFields g = geometry_fields(u);
  ScalarField phi = ScalarField::sample(3, {-1.2, -1.2, -1.2}, {1.2, 1.2, 1.2}, {49, 49, 49},
                                        [](std::array<double, 3> p) {
                                          return std::sin(p[0]) + p[1] * p[2] + 0.3 * p[2];
                                        });
  const TangentialGradient tg = tangential_gradient(g, phi);
  const GeometryFields pg = geometry_fields(phi);
  for (std::size_t id = 0; id < u.node_count(); ++id) {
    if (!tg.valid[id] || !pg.grad_valid[id]) continue;
    // sum_i (delta_i phi)^2 == |grad phi|^2 - (grad phi . nu)^2
    double proj = 0.0, full = 0.0;
    for (int a = 0; a < 3; ++a) {
      proj += pg.gradient[id * 3 + a] * g.normal[id * 3 + a];
      full += pg.gradient[id * 3 + a] * pg.gradient[id * 3 + a];
    }
    CHECK(std::abs(tg.tgrad_sq[id] - (full - proj * proj)) <= 1e-10 * (1.0 + full));
    // nu . grad_T phi == 0
    double dot = 0.0;
    for (int a = 0; a < 3; ++a) dot += tg.delta[id * 3 + a] * g.normal[id * 3 + a];
    CHECK(std::abs(dot) <= 1e-10 * (1.0 + std::sqrt(full)));
  }
}

TEST_CASE("tangential_gradient: level-set-constant functions") {
  ScalarField u = cone3d(49);
  const GeometryFields g = geometry_fields(u);
  ScalarField phi = u;  // phi = |x| constant on every level set
  const TangentialGradient tg = tangential_gradient(g, phi);
  for (std::size_t id = 0; id < u.node_count(); ++id)
    if (tg.valid[id]) CHECK(tg.tgrad_sq[id] <= 1e-16);
}

TEST_CASE("tangential_gradient: coordinate sums give n - 1") {
  for (int dim : {2, 3}) {
    ScalarField u = dim == 2 ? cone2d(65) : cone3d(65);
    const GeometryFields g = geometry_fields(u);
    std::vector<TangentialGradient> tgs;
    for (int axis = 0; axis < dim; ++axis) {
      ScalarField coord = ScalarField::sample(
          dim, {-1.2, -1.2, -1.2}, {1.2, 1.2, 1.2},
          {65, 65, dim == 2 ? 1 : 65},
          [axis](std::array<double, 3> p) { return p[axis]; });
      tgs.push_back(tangential_gradient(g, coord));
    }
    for (std::size_t id = 0; id < u.node_count(); id += 7) {
      bool all = g.regular[id] != 0;
      for (const auto& t : tgs) all = all && t.valid[id];
      if (!all) continue;
      double sum = 0.0;
      for (int axis = 0; axis < dim; ++axis) sum += tgs[axis].delta[id * dim + axis];
      CHECK(sum == doctest::Approx(dim - 1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("tangential_gradient: planar foliation picks out transverse axes") {
  ScalarField u = ScalarField::sample(2, {0, 0, 0}, {1, 1, 0}, {33, 33, 1},
                                      [](std::array<double, 3> p) { return p[0]; });
  ScalarField phi = ScalarField::sample(2, {0, 0, 0}, {1, 1, 0}, {33, 33, 1},
                                        [](std::array<double, 3> p) { return p[1]; });
  const GeometryFields g = geometry_fields(u);
  const TangentialGradient tg = tangential_gradient(g, phi);
  for (std::size_t id = 0; id < u.node_count(); ++id) {
    if (!tg.valid[id]) continue;
    CHECK(tg.delta[id * 2 + 0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(tg.delta[id * 2 + 1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tg.tgrad_sq[id] == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(tangential_gradient(g, cone3d(9)), std::invalid_argument);
}

TEST_CASE("coarea: disk, ball, and Fubini slab") {
  {  // u = |x| on B_1 in R^2, g = 1: both sides pi
    ScalarField u = cone2d(481);
    u.mask_where([](std::array<double, 3> p) { return std::hypot(p[0], p[1]) <= 1.0; });
    ScalarField g = u;
    for (double& v : g.values()) v = 1.0;
    const InequalityReport rep = coarea_check(u, g, 24);
    CHECK(rep.lhs == doctest::Approx(oracles::pi).epsilon(0.02));
    CHECK(rep.rhs == doctest::Approx(oracles::pi).epsilon(0.02));
    CHECK(rep.params.at("relative_gap") <= 0.02);
  }
  {  // u = |x| on B_1 in R^3, g = 1: both sides 4 pi / 3
    ScalarField u = cone3d(161);
    u.mask_where([](std::array<double, 3> p) { return norm3(p) <= 1.0; });
    ScalarField g = u;
    for (double& v : g.values()) v = 1.0;
    const InequalityReport rep = coarea_check(u, g, 20);
    CHECK(rep.lhs == doctest::Approx(4.0 * oracles::pi / 3.0).epsilon(0.02));
    CHECK(rep.params.at("relative_gap") <= 0.02);
  }
  {  // u = x1 on the unit square, g = x2: both sides 1/2
    ScalarField u = ScalarField::sample(2, {0, 0, 0}, {1, 1, 0}, {201, 201, 1},
                                        [](std::array<double, 3> p) { return p[0]; });
    ScalarField g = ScalarField::sample(2, {0, 0, 0}, {1, 1, 0}, {201, 201, 1},
                                        [](std::array<double, 3> p) { return p[1]; });
    const InequalityReport rep = coarea_check(u, g, 32);
    CHECK(rep.lhs == doctest::Approx(0.5).epsilon(0.01));
    CHECK(rep.rhs == doctest::Approx(0.5).epsilon(0.01));
    CHECK(rep.params.at("relative_gap") <= 0.01);
  }
}

TEST_CASE("coarea: gap decreases at first order under refinement") {
  std::vector<double> gaps;
  for (int m : {121, 241, 481}) {
    ScalarField u = cone2d(m);
    u.mask_where([](std::array<double, 3> p) { return std::hypot(p[0], p[1]) <= 1.0; });
    ScalarField g = u;
    for (double& v : g.values()) v = 1.0;
    gaps.push_back(coarea_check(u, g, 24).params.at("relative_gap"));
  }
  // rate >= O(h) over the refinement chain
  CHECK(gaps[2] <= 0.6 * gaps[0]);
}

TEST_CASE("level extraction: circle length and sphere area") {
  ScalarField u2 = cone2d(241);
  double len = 0.0;
  for (const auto& s : extract_level_2d(u2, 0.7))
    len += std::hypot(s.b[0] - s.a[0], s.b[1] - s.a[1]);
  CHECK(len == doctest::Approx(2.0 * oracles::pi * 0.7).epsilon(1e-3));

  ScalarField u3 = cone3d(81);
  ScalarField ones = u3;
  for (double& v : ones.values()) v = 1.0;
  CHECK(level_integral(u3, ones, 0.8) ==
        doctest::Approx(4.0 * oracles::pi * 0.64).epsilon(5e-3));
}

TEST_CASE("ibp: annulus with a radial-cutoff test function") {
  const int m = 241;
  ScalarField u = ScalarField::sample(2, {-2.2, -2.2, 0}, {2.2, 2.2, 0}, {m, m, 1},
                                      [](std::array<double, 3> p) { return std::hypot(p[0], p[1]); });
  u.mask_where([](std::array<double, 3> p) {
    const double r = std::hypot(p[0], p[1]);
    return r >= 1.0 && r <= 2.0;
  });
  auto ramp = [](double t) { return t <= 0 ? 0.0 : (t >= 1 ? 1.0 : t * t * (3 - 2 * t)); };
  auto cutoff = [&](double r) { return ramp((r - 1.1) / 0.3) * ramp((1.9 - r) / 0.3); };
  ScalarField phi = ScalarField::sample(2, {-2.2, -2.2, 0}, {2.2, 2.2, 0}, {m, m, 1},
                                        [&](std::array<double, 3> p) {
                                          return p[0] * cutoff(std::hypot(p[0], p[1]));
                                        });
  ScalarField psi = u;
  for (double& v : psi.values()) v = 1.0;
  const InequalityReport rep = ibp_defect(u, phi, psi, 0);
  CHECK(std::abs(rep.slack) <= 0.01 * (std::abs(rep.lhs) + std::abs(rep.rhs)));
}

TEST_CASE("ibp: exact-variant integrals on the annulus") {
  // u = |x|, phi = x1, psi = 1: the boundary rings are level sets, so the
  // hypothesis holds without a cutoff, and
  //   int |grad u| (delta_1 x1) = int (1 - nu_1^2) = 3 pi / 2
  //   int |grad u| H nu^1 x1    = int cos^2(theta) = 3 pi / 2.
  const int m = 441;
  ScalarField u = ScalarField::sample(2, {-2.2, -2.2, 0}, {2.2, 2.2, 0}, {m, m, 1},
                                      [](std::array<double, 3> p) { return std::hypot(p[0], p[1]); });
  u.mask_where([](std::array<double, 3> p) {
    const double r = std::hypot(p[0], p[1]);
    return r >= 1.0 && r <= 2.0;
  });
  ScalarField phi = ScalarField::sample(2, {-2.2, -2.2, 0}, {2.2, 2.2, 0}, {m, m, 1},
                                        [](std::array<double, 3> p) { return p[0]; });
  ScalarField psi = u;
  for (double& v : psi.values()) v = 1.0;
  const InequalityReport rep = ibp_defect(u, phi, psi, 0);
  const double expect = 1.5 * oracles::pi;
  CHECK(rep.params.at("int_delta_phi_psi") == doctest::Approx(expect).epsilon(0.02));
  CHECK(rep.params.at("int_H_nu_phi_psi") == doctest::Approx(expect).epsilon(0.02));
  CHECK(rep.params.at("int_phi_delta_psi") == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("ibp: zero test function") {
  ScalarField u = cone2d(61);
  ScalarField zero = u;
  for (double& v : zero.values()) v = 0.0;
  ScalarField psi = u;
  for (double& v : psi.values()) v = 1.0;
  const InequalityReport rep = ibp_defect(u, zero, psi, 1);
  CHECK(rep.lhs == 0.0);
  CHECK(rep.rhs == 0.0);
}

TEST_CASE("ibp: mixed hypothesis on the square and O(h) rate") {
  auto bump = [](double t) {
    return t <= 0.15 || t >= 0.85 ? 0.0 : std::pow(std::sin(oracles::pi * (t - 0.15) / 0.7), 2);
  };
  std::vector<double> defects;
  for (int m : {81, 161, 321}) {
    ScalarField u = ScalarField::sample(2, {0, 0, 0}, {1, 1, 0}, {m, m, 1},
                                        [](std::array<double, 3> p) { return p[0]; });
    ScalarField phi = ScalarField::sample(2, {0, 0, 0}, {1, 1, 0}, {m, m, 1},
                                          [&](std::array<double, 3> p) { return bump(p[1]); });
    const InequalityReport rep = ibp_defect(u, phi, phi, 1);
    CHECK(std::abs(rep.params.at("int_H_nu_phi_psi")) <= 1e-10);  // H = 0
    defects.push_back(std::abs(rep.slack));
  }
  CHECK(defects[2] <= 0.6 * defects[0]);  // rate >= O(h)
}

TEST_CASE("ibp: precondition rejection") {
  // u = x1 on the annulus: boundary rings are not level sets and phi psi
  // does not vanish there
  const int m = 101;
  ScalarField u = ScalarField::sample(2, {-2.2, -2.2, 0}, {2.2, 2.2, 0}, {m, m, 1},
                                      [](std::array<double, 3> p) { return p[0]; });
  u.mask_where([](std::array<double, 3> p) {
    const double r = std::hypot(p[0], p[1]);
    return r >= 1.0 && r <= 2.0;
  });
  ScalarField phi = ScalarField::sample(2, {-2.2, -2.2, 0}, {2.2, 2.2, 0}, {m, m, 1},
                                        [](std::array<double, 3> p) { return p[0]; });
  ScalarField psi = u;
  for (double& v : psi.values()) v = 1.0;
  CHECK_THROWS_AS((void)ibp_defect(u, phi, psi, 0), std::invalid_argument);
}

TEST_CASE("field io: csv and binary round trips") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  ScalarField f = ScalarField::sample(2, {-0.5, 0.25, 0}, {1.0, 2.0, 0}, {7, 9, 1},
                                      [&](std::array<double, 3>) { return val(rng); });
  f.write_csv("field_io_test.csv");
  const ScalarField back = ScalarField::read_csv("field_io_test.csv");
  REQUIRE(back.dims() == f.dims());
  for (std::size_t i = 0; i < f.node_count(); ++i)
    CHECK(back.values()[i] == doctest::Approx(f.values()[i]).epsilon(1e-11));

  f.write_binary("field_io_test.bin");
  const ScalarField back2 = ScalarField::read_binary("field_io_test.bin");
  for (std::size_t i = 0; i < f.node_count(); ++i) CHECK(back2.values()[i] == f.values()[i]);
  std::remove("field_io_test.csv");
  std::remove("field_io_test.bin");
}
