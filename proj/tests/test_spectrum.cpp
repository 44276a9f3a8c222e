#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "stablab/quadrature.hpp"
#include "stablab/radial.hpp"
#include "stablab/spectrum.hpp"

using namespace stablab;

namespace {

// zero-potential profile (f' = 0) for pure Laplacian eigenvalues
RadialSolution flat_profile(int n, double lambda, int steps) {
  return oracles::quadratic_profile(n, 1.0, lambda, steps);
}

}  // namespace

TEST_CASE("principal eigenvalue: Laplacian ground states") {
  // first radial Dirichlet eigenvalue of the unit ball: pi^2 in R^3, j01^2 in R^2
  const StabilityReport r3 = principal_eigenvalue(flat_profile(3, 1.0, 2048));
  CHECK(r3.mu1 == doctest::Approx(oracles::pi * oracles::pi).epsilon(1e-4));
  const StabilityReport r2 = principal_eigenvalue(flat_profile(2, 1.0, 2048));
  CHECK(r2.mu1 == doctest::Approx(oracles::j01_squared).epsilon(1e-4));

  // against the dense test-side eigensolver at 1e4 cells
  const double oracle3 = oracles::dense_mu1(3, [](double) { return 0.0; }, 10000);
  const double oracle2 = oracles::dense_mu1(2, [](double) { return 0.0; }, 10000);
  CHECK(std::abs(r3.mu1 - oracle3) <= 1e-4);
  CHECK(std::abs(r2.mu1 - oracle2) <= 1e-4);
}

TEST_CASE("principal eigenvalue: stable minimal-branch solution") {
  const RadialSolution sol = solve_minimal(2, Nonlinearity::exponential(1, 1), 1.0);
  const StabilityReport rep = principal_eigenvalue(sol);
  CHECK(rep.mu1 > 0.0);
  CHECK(rep.stable);
  // dense oracle with the matching potential
  const double mu_oracle = oracles::dense_mu1(
      2,
      [&](double r) {
        const double d = oracles::disk_exp_minimal_d(1.0);
        return -std::exp(oracles::disk_exp_u(d, r));
      },
      10000);
  CHECK(rep.mu1 == doctest::Approx(mu_oracle).epsilon(1e-4));
}

TEST_CASE("principal eigenvalue: eigenfunction shape") {
  const StabilityReport rep = principal_eigenvalue(flat_profile(3, 1.0, 1024));
  REQUIRE(rep.eigenfunction.size() == 1025);
  CHECK(rep.eigenfunction.back() == 0.0);
  double mx = 0.0;
  for (std::size_t i = 0; i + 1 < rep.eigenfunction.size(); ++i) {
    CHECK(rep.eigenfunction[i] > 0.0);  // ground state positive on [0, 1)
    mx = std::max(mx, rep.eigenfunction[i]);
  }
  CHECK(mx == doctest::Approx(1.0).epsilon(1e-12));
  // the reported quadratic-form minimum is the eigenvalue itself
  CHECK(rep.quad_form_min == doctest::Approx(rep.mu1).epsilon(1e-9));
}

TEST_CASE("principal eigenvalue: modes returns the low spectrum in order") {
  const StabilityReport rep = principal_eigenvalue(flat_profile(3, 1.0, 2048), 3);
  REQUIRE(rep.low_eigenvalues.size() == 3);
  CHECK(rep.low_eigenvalues[0] == doctest::Approx(oracles::pi * oracles::pi).epsilon(1e-4));
  // radial Dirichlet spectrum of the 3-ball: (k pi)^2
  CHECK(rep.low_eigenvalues[1] == doctest::Approx(4 * oracles::pi * oracles::pi).epsilon(1e-3));
  CHECK(rep.low_eigenvalues[2] == doctest::Approx(9 * oracles::pi * oracles::pi).epsilon(1e-3));
}

TEST_CASE("principal eigenvalue: lambda-independent for zero potential") {
  const StabilityReport a = principal_eigenvalue(flat_profile(3, 1.0, 1024));
  const StabilityReport b = principal_eigenvalue(flat_profile(3, 2.0, 1024));
  const StabilityReport c = principal_eigenvalue(flat_profile(3, 5.0, 1024));
  CHECK(a.mu1 == b.mu1);  // identical matrices, identical floats
  CHECK(b.mu1 == c.mu1);
}

TEST_CASE("rayleigh: closed-form values") {
  // f' = 16 e^u = 16 r^{-2} on the singular pair, xi = 1 - r, n = 10:
  // Q = omega_9 (1/10 - 16 B(8,3)) = omega_9 (1/10 - 2/45)
  const RadialSolution sol = oracles::log_profile(10, 16.0, 1e-4, 100000);
  std::vector<double> xi(sol.size());
  for (std::size_t i = 0; i < xi.size(); ++i) xi[i] = 1.0 - sol.r[i];
  const double expect = sphere_area(10) * (0.1 - 16.0 * oracles::beta_fn(8, 3));
  CHECK(rayleigh(sol, xi) == doctest::Approx(expect).epsilon(1e-6));
  CHECK(expect > 0.0);

  // zero potential, xi = 1 - r^2, n = 3: Q = 16 pi / 5
  const RadialSolution flat = flat_profile(3, 1.0, 100000);
  std::vector<double> xi2(flat.size());
  for (std::size_t i = 0; i < xi2.size(); ++i) xi2[i] = 1.0 - flat.r[i] * flat.r[i];
  CHECK(rayleigh(flat, xi2) == doctest::Approx(16.0 * oracles::pi / 5.0).epsilon(1e-8));

  std::vector<double> zero(flat.size(), 0.0);
  CHECK(rayleigh(flat, zero) == 0.0);
}

TEST_CASE("rayleigh: boundary precondition") {
  const RadialSolution flat = flat_profile(3, 1.0, 512);
  std::vector<double> xi(flat.size(), 1.0);  // xi(1) != 0
  CHECK_THROWS_AS((void)rayleigh(flat, xi), std::invalid_argument);
}

TEST_CASE("rayleigh: random test functions never beat mu1") {
  const RadialSolution sol = solve_minimal(2, Nonlinearity::exponential(1, 1), 1.5);
  const StabilityReport rep = principal_eigenvalue(sol);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const double a = coef(rng), b = coef(rng), c = coef(rng);
    std::vector<double> xi(sol.size()), norm2(sol.size());
    for (std::size_t i = 0; i < sol.size(); ++i) {
      const double r = sol.r[i];
      xi[i] = (1.0 - r) * (a + b * r + c * r * r);
      norm2[i] = xi[i] * xi[i] * r;  // r^{n-1}, n = 2
    }
    const double nn = sphere_area(2) * trapz_uniform(sol.h(), norm2);
    if (nn < 1e-12) continue;
    const double quotient = rayleigh(sol, xi) / nn;
    CHECK(quotient >= rep.mu1 - 1e-3 * (1.0 + std::abs(rep.mu1)));
  }
}

TEST_CASE("stability transition along the planar branch") {
  const Nonlinearity f = Nonlinearity::exponential(1, 1);
  std::vector<double> mus;
  for (double lam : {0.5, 1.0, 1.5, 1.9, 1.99})
    mus.push_back(principal_eigenvalue(solve_minimal(2, f, lam)).mu1);
  for (std::size_t i = 0; i + 1 < mus.size(); ++i) CHECK(mus[i + 1] < mus[i]);
  CHECK(mus.front() > 0.0);
  CHECK(mus.back() > 0.0);
  CHECK(mus.back() < 0.15 * mus.front());  // mu1 -> 0 at the fold
}

TEST_CASE("unstable second-branch solution is flagged") {
  // the larger closed-form root at lambda = 1 lies beyond the fold
  const double d = (4.0 - 1.0 + 2.0 * std::sqrt(4.0 - 2.0)) / 1.0;
  const double m0 = oracles::disk_exp_u(d, 0.0);
  const RadialSolution high = integrate_radial(2, Nonlinearity::exponential(1, 1), 1.0, m0, 4096);
  REQUIRE(std::abs(high.u.back()) < 1e-6);
  const StabilityReport rep = principal_eigenvalue(high);
  CHECK(rep.mu1 < 0.0);
  CHECK_FALSE(rep.stable);
}

TEST_CASE("gradient identity: quadratic profile is stencil-exact") {
  const RadialSolution sol = oracles::quadratic_profile(3, 1.0, 1.0, 200);
  const InequalityReport rep = gradient_identity_defect(sol);
  CHECK(rep.params.at("max_relative_defect") <= 1e-10);
}

TEST_CASE("gradient identity: h^2 decay on the planar profile") {
  std::vector<double> defects;
  for (int steps : {1000, 2000, 4000}) {
    const RadialSolution sol = solve_minimal(2, Nonlinearity::exponential(1, 1), 1.0, 1e-9, 20, steps);
    defects.push_back(gradient_identity_defect(sol).params.at("max_relative_defect"));
  }
  CHECK(defects[0] <= 1e-4);
  for (std::size_t k = 0; k + 1 < defects.size(); ++k) {
    const double slope = std::log2(defects[k] / defects[k + 1]);
    CHECK(slope >= 1.5);  // C h^2 with mild noise
  }
}

TEST_CASE("gradient identity: singular pair on [0.1, 1]") {
  const RadialSolution sol = oracles::log_profile(10, 16.0, 0.1, 12000);
  const InequalityReport rep = gradient_identity_defect(sol);
  CHECK(rep.params.at("max_relative_defect") <= 1e-6);
}

TEST_CASE("gradient identity: empty regular set") {
  const RadialSolution sol = sample_profile(
      3, 1.0, Nonlinearity::affine(0, 0), [](double) { return 1.0; }, [](double) { return 0.0; },
      0.0, 200);
  CHECK_THROWS_AS((void)gradient_identity_defect(sol), std::invalid_argument);
}
