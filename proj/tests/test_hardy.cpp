#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "stablab/estimates.hpp"
#include "stablab/hardy.hpp"
#include "stablab/numerics.hpp"
#include "stablab/quadrature.hpp"

using namespace stablab;

namespace {

double norm3(std::array<double, 3> p) {
  return std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
}

// u = |x| on the annulus [r_lo, 1] as radial data (|u'| = 1)
RadialSolution cone_profile(int n, double r_lo, int steps) {
  return sample_profile(
      n, 1.0, Nonlinearity::affine(1, 0), [](double r) { return r; }, [](double) { return 1.0; },
      r_lo, steps);
}

}  // namespace

TEST_CASE("foliated (radial route): cross-check against adaptive quadrature") {
  // u = |x| on an annulus in R^3, radial bump phi, y = 0; alpha inside the
  // admissible range [0, n-1)
  const int n = 3;
  const double alpha = 1.5;
  auto phi = [](double r) {
    return r <= 0.4 || r >= 0.9 ? 0.0 : std::pow(std::sin(oracles::pi * (r - 0.4) / 0.5), 2);
  };
  const RadialSolution sol = cone_profile(n, 0.25, 60000);
  const HardyPair pair = foliated_hardy(sol, phi, alpha);

  const double I_oracle = sphere_area(n) * simpson([&](double r) {
    const double p = phi(r);
    return p * p * std::pow(r, n - 1 - alpha);
  }, 0.4, 0.9, 1e-12);
  CHECK(pair.foliated.params.at("I") == doctest::Approx(I_oracle).epsilon(1e-4));
  CHECK(pair.foliated.lhs_main == doctest::Approx((n - 1 - alpha) * I_oracle).epsilon(1e-4));
  CHECK(pair.foliated.slack >= -pair.foliated.eps_disc);
  CHECK(pair.manifold.slack >= -pair.manifold.eps_disc);
  // manifold slack has the closed form ((n-1)^2 - (n-1-alpha)^2) I
  const double expect_slack = ((n - 1.0) * (n - 1.0) - std::pow(n - 1.0 - alpha, 2)) * I_oracle;
  CHECK(pair.manifold.slack == doctest::Approx(expect_slack).epsilon(1e-4));
}

TEST_CASE("foliated (radial route): zero test function") {
  const RadialSolution sol = cone_profile(3, 0.25, 2000);
  const HardyPair pair = foliated_hardy(sol, [](double) { return 0.0; }, 1.0);
  CHECK(pair.foliated.lhs_main == 0.0);
  CHECK(pair.foliated.lhs_radialterm == 0.0);
  CHECK(pair.foliated.rhs == 0.0);
  CHECK(pair.foliated.slack == 0.0);
}

TEST_CASE("foliated (field route): planar foliation away from the pole") {
  // u = x1 on a slab, phi supported away from y: the classical structure
  const int m = 81;
  ScalarField u = ScalarField::sample(3, {-1, -1, -1}, {1, 1, 1}, {m, m, m},
                                      [](std::array<double, 3> p) { return p[0]; });
  auto bump1 = [](double t, double a, double b) {
    return t <= a || t >= b ? 0.0 : std::pow(std::sin(oracles::pi * (t - a) / (b - a)), 2);
  };
  ScalarField phi = ScalarField::sample(3, {-1, -1, -1}, {1, 1, 1}, {m, m, m},
                                        [&](std::array<double, 3> p) {
                                          return bump1(p[0], 0.2, 0.9) * bump1(p[1], -0.8, 0.8) *
                                                 bump1(p[2], -0.8, 0.8);
                                        });
  const HardyPair pair = foliated_hardy(u, phi, 1.8, {0, 0, 0});
  CHECK(pair.foliated.slack >= -pair.foliated.eps_disc);
  CHECK(pair.manifold.slack >= -pair.manifold.eps_disc);
  CHECK(pair.foliated.lhs_main > 0.0);
}

TEST_CASE("foliated (field route): radial solution sampled on a 2D grid, offset pole") {
  auto u_of_r = [&](double r) {
    const double d = oracles::disk_exp_minimal_d(1.0);
    return r >= 1.0 ? 0.0 : oracles::disk_exp_u(d, r);
  };
  const int m = 241;
  ScalarField u = ScalarField::sample(2, {-1.05, -1.05, 0}, {1.05, 1.05, 0}, {m, m, 1},
                                      [&](std::array<double, 3> p) {
                                        return u_of_r(std::hypot(p[0], p[1]));
                                      });
  u.mask_where([](std::array<double, 3> p) { return std::hypot(p[0], p[1]) <= 1.0; });
  ScalarField phi = ScalarField::sample(2, {-1.05, -1.05, 0}, {1.05, 1.05, 0}, {m, m, 1},
                                        [](std::array<double, 3> p) {
                                          return 1.0 + 0.3 * p[0] - 0.2 * p[1] * p[1];
                                        });
  // u vanishes on the mask boundary, so phi is unconstrained there
  const HardyPair pair = foliated_hardy(u, phi, 0.7, {0.15, -0.1, 0.0});
  CHECK(pair.foliated.slack >= -pair.foliated.eps_disc);
  CHECK(pair.manifold.slack >= -pair.manifold.eps_disc);
}

TEST_CASE("foliated: alpha domain and boundary hypothesis enforced") {
  const RadialSolution sol = cone_profile(3, 0.25, 1000);
  CHECK_THROWS_AS((void)foliated_hardy(sol, [](double) { return 1.0; }, 2.5),
                  std::invalid_argument);  // alpha >= n-1
  const int m = 33;
  ScalarField u = ScalarField::sample(2, {0, 0, 0}, {1, 1, 0}, {m, m, 1},
                                      [](std::array<double, 3> p) { return 1.0 + p[0]; });
  ScalarField phi = u;  // neither vanishes on the boundary
  CHECK_THROWS_AS((void)foliated_hardy(u, phi, 0.5, {0.5, 0.5, 0.0}), std::invalid_argument);
}

TEST_CASE("radial variant: exact equality for radial test functions") {
  const RadialSolution gelfand = solve_minimal(3, Nonlinearity::exponential(1, 1), 2.0);
  for (double alpha : {0.0, 1.0, 1.9}) {
    const HardyReport rep = radial_hardy(gelfand, [](double r) { return 1.0 - r; }, alpha);
    CHECK(std::abs(rep.slack) <= 1e-8 * (1.0 + std::abs(rep.rhs)));
  }
}

TEST_CASE("radial variant: zonal modes give strictly positive slack") {
  // u = 1 - r^2 in n = 5, phi = (1-r) Y with Y the degree-1 zonal mode
  const RadialSolution sol = oracles::quadratic_profile(5, 1.0, 1.0, 4096);
  auto g = [](double r) { return 1.0 - r; };
  const HardyReport rep = radial_hardy(sol, g, 2.0, oracles::zonal1, 720);
  CHECK(rep.slack > 0.0);

  // spherical-harmonic oracle: slack = 4 l (l+n-2) * omega_{n-2} ∫ Y^2 sin^{n-2}
  //                                  * ∫ |u_r| g^2 r^{n-1-alpha} dr
  const int n = 5, l = 1;
  const double ang2 = simpson([&](double th) {
    return std::pow(std::cos(th), 2) * std::pow(std::sin(th), n - 2);
  }, 0, oracles::pi, 1e-13);
  const double radial_int = simpson([&](double r) {
    return 2.0 * r * std::pow(1.0 - r, 2) * std::pow(r, n - 1 - 2.0);
  }, 0, 1, 1e-13);
  const double oracle = 4.0 * l * (l + n - 2) * sphere_area(n - 1) * ang2 * radial_int;
  CHECK(rep.slack == doctest::Approx(oracle).epsilon(1e-2));

  // degree-2 zonal mode: larger Rayleigh quotient once normalized by the
  // mode's mass (slack/lhs = 4 l (l+n-2)/(n-1)^2)
  const HardyReport rep2 =
      radial_hardy(sol, g, 2.0, [&](double th) { return oracles::zonal2_shift(n, th); }, 720);
  CHECK(rep2.slack > 0.0);
  CHECK(rep2.slack / rep2.lhs_main > rep.slack / rep.lhs_main);
  CHECK(rep.slack / rep.lhs_main ==
        doctest::Approx(4.0 * (n - 1.0) / std::pow(n - 1.0, 2)).epsilon(1e-3));
  CHECK(rep2.slack / rep2.lhs_main ==
        doctest::Approx(8.0 * n / std::pow(n - 1.0, 2)).epsilon(1e-3));
}

TEST_CASE("surface: centered spheres realize equality in the two-term form") {
  for (int n = 3; n <= 10; ++n)
    for (double rho : {0.5, 1.0, 2.0}) {
      const SurfaceHardySet set = surface_hardy(sphere_surface_exact(n, rho));
      CHECK(std::abs(set.p2.slack) <= 1e-6 * set.p2.rhs);
      // squared form: slack = (n-2) |M| / rho^2 exactly
      const double area = sphere_area(n) * std::pow(rho, n - 1);
      CHECK(set.squared.slack ==
            doctest::Approx((n - 2.0) * area / (rho * rho)).epsilon(1e-12));
    }
}

TEST_CASE("surface: flat patch through the origin in R^5") {
  // phi = max(0, 1 - |x|): lhs = pi^2/6, rhs = pi^2/2, slack = pi^2/3
  const SurfaceSample patch = flat_patch_radial(
      5, 1.0, 40000, [](double r) { return 1.0 - r; }, [](double) { return -1.0; });
  const SurfaceHardySet set = surface_hardy(patch);
  const double p2 = oracles::pi * oracles::pi;
  CHECK(set.squared.lhs_main == doctest::Approx(p2 / 6.0).epsilon(1e-6));
  CHECK(set.squared.rhs == doctest::Approx(p2 / 2.0).epsilon(1e-6));
  CHECK(set.squared.slack == doctest::Approx(p2 / 3.0).epsilon(1e-5));
  // H = 0: the new and Carron right sides coincide with the Dirichlet term
  CHECK(set.carron.rhs == doctest::Approx(set.squared.rhs).epsilon(1e-12));
}

TEST_CASE("surface: icosphere sampling converges at first order or better") {
  double slack[2];
  double rhs[2];
  int k = 0;
  for (int subdiv : {4, 5}) {
    const SurfaceHardySet set = surface_hardy(icosphere_surface(1.0, subdiv));
    slack[k] = std::abs(set.p2.slack);
    rhs[k] = set.p2.rhs;
    ++k;
  }
  CHECK(slack[0] / rhs[0] <= 1e-2);
  CHECK(slack[1] <= 0.55 * slack[0]);  // h halves, slack at least halves
}

TEST_CASE("surface: icosphere area sanity") {
  const SurfaceSample m = icosphere_surface(1.0, 4);
  double area = 0.0;
  for (double w : m.weight) area += w;
  CHECK(area == doctest::Approx(4.0 * oracles::pi).epsilon(2e-3));
}

TEST_CASE("surface: squared form follows from the two-term form numerically") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double a0 = coef(rng), a1 = coef(rng), a2 = coef(rng);
    auto phi = [&](std::array<double, 3> p) { return 2.0 + a0 * p[0] + a1 * p[1] + a2 * p[2]; };
    auto tg = [&](std::array<double, 3>, std::array<double, 3> nu) {
      const double dot = a0 * nu[0] + a1 * nu[1] + a2 * nu[2];
      return a0 * a0 + a1 * a1 + a2 * a2 - dot * dot;
    };
    const SurfaceHardySet set = surface_hardy(icosphere_surface(1.0, 4, phi, tg));
    CHECK(set.p2.slack >= -1e-10 * set.p2.rhs);
    CHECK(set.squared.slack >= -1e-10 * set.squared.rhs);
    // chain: ((n-3)^2/4) S2 <= (lhs_p2/2)^2/S2 <= (rhs_p2/2)^2/S2 = rhs_squared
    const double S2 = set.p2.params.at("S2");
    const double chain = std::pow(set.p2.lhs_main + set.p2.lhs_radialterm, 2) / (4.0 * S2);
    CHECK(set.squared.lhs_main <= chain + 1e-10 * (1.0 + chain));
    CHECK(chain <= std::pow(set.p2.rhs, 2) / (4.0 * S2) + 1e-10);
  }
}

TEST_CASE("surface: new constant beats Carron's exactly when n >= 5 on spheres") {
  for (int n = 4; n <= 10; ++n) {
    const SurfaceHardySet set = surface_hardy(sphere_surface_exact(n, 1.0));
    if (n >= 5)
      CHECK(set.rhs_ratio_new_vs_carron <= 1.0 + 1e-12);
    else
      CHECK(set.rhs_ratio_new_vs_carron > 1.0);
  }
}

TEST_CASE("surface: origin node rejected") {
  SurfaceSample bad = sphere_surface_exact(3, 1.0);
  bad.points = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS((void)surface_hardy(bad), std::invalid_argument);
}

TEST_CASE("foliated/surface consistency through the coarea formula") {
  // u = |x| in R^3, phi a radial bump on an annulus, y = 0: each foliated
  // integral equals the t-integral of its surface counterpart.
  const double alpha = 1.5;
  const int m = 129;
  ScalarField u = ScalarField::sample(3, {-1.1, -1.1, -1.1}, {1.1, 1.1, 1.1}, {m, m, m},
                                      [](std::array<double, 3> p) { return norm3(p); });
  u.mask_where([](std::array<double, 3> p) { return norm3(p) <= 1.05; });
  auto bump = [](double r) {
    return r <= 0.35 || r >= 0.85 ? 0.0 : std::pow(std::sin(oracles::pi * (r - 0.35) / 0.5), 2);
  };
  ScalarField phi = ScalarField::sample(3, {-1.1, -1.1, -1.1}, {1.1, 1.1, 1.1}, {m, m, m},
                                        [&](std::array<double, 3> p) { return bump(norm3(p)); });
  const HardyPair pair = foliated_hardy(u, phi, 2.0, {0, 0, 0});

  const int levels = 40;
  double I_sum = 0.0, J_sum = 0.0;
  for (int k = 0; k < levels; ++k) {
    const double t = 0.3 + (k + 0.5) * (0.9 - 0.3) / levels;
    const SurfaceSample slice = surface_from_triangles(
        extract_level_3d(u, t), [&](std::array<double, 3>) { return 2.0 / t; },
        [&](std::array<double, 3> x) { return bump(norm3(x)); },
        [](std::array<double, 3>) { return 0.0; });
    double S2 = 0.0, SH2 = 0.0;
    for (std::size_t s = 0; s < slice.count(); ++s) {
      double r2 = 0.0;
      for (int a = 0; a < 3; ++a) r2 += slice.points[s * 3 + a] * slice.points[s * 3 + a];
      S2 += slice.weight[s] * slice.phi[s] * slice.phi[s] / r2;
      SH2 += slice.weight[s] * slice.mean_curv[s] * slice.mean_curv[s] * slice.phi[s] *
             slice.phi[s];
    }
    I_sum += S2 * (0.9 - 0.3) / levels;
    J_sum += SH2 * (0.9 - 0.3) / levels;
  }
  CHECK(pair.foliated.params.at("I") == doctest::Approx(I_sum).epsilon(0.02));
  CHECK(pair.foliated.params.at("J") == doctest::Approx(J_sum).epsilon(0.02));
}
