#include "stablab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stablab/quadrature.hpp"

namespace stablab {

namespace {

// Symmetric tridiagonal pencil for the linearized operator, already reduced
// to standard form B = M^{-1/2} A M^{-1/2}. diag/off hold B; vol holds the
// radial cell measures used to map eigenvectors back to nodal values.
struct Tridiag {
  std::vector<double> diag, off, vol;
  std::size_t first_node = 0;  // grid index of the first unknown
};

Tridiag assemble(const RadialSolution& sol) {
  const std::size_t N = sol.size() - 1;  // last node carries the Dirichlet value
  if (N < 3) throw std::invalid_argument("principal_eigenvalue: grid too small");
  const double h = sol.h();
  const int n = sol.n;
  const bool from_origin = sol.r.front() == 0.0;
  const std::size_t i0 = from_origin ? 0 : 1;

  auto rpow = [&](double r) { return std::pow(r, n); };

  const std::size_t M = N - i0;
  std::vector<double> A_diag(M), A_off(M > 0 ? M - 1 : 0), V(M);
  for (std::size_t k = 0; k < M; ++k) {
    const std::size_t i = i0 + k;
    const double r = sol.r[i];
    const double r_lo = (i == 0) ? 0.0 : r - 0.5 * h;
    const double r_hi = r + 0.5 * h;
    V[k] = (rpow(r_hi) - rpow(std::max(r_lo, 0.0))) / n;
    const double w_hi = std::pow(r_hi, n - 1) / h;
    const double w_lo = (i == 0) ? 0.0 : std::pow(r_lo, n - 1) / h;
    const double fprime = sol.spec.fprime(sol.u[i]);
    A_diag[k] = w_lo + w_hi - sol.lambda * fprime * V[k];
    if (k + 1 < M) A_off[k] = -w_hi;
  }

  Tridiag T;
  T.first_node = i0;
  T.vol = V;
  T.diag.resize(M);
  T.off.resize(M > 0 ? M - 1 : 0);
  for (std::size_t k = 0; k < M; ++k) T.diag[k] = A_diag[k] / V[k];
  for (std::size_t k = 0; k + 1 < M; ++k) T.off[k] = A_off[k] / std::sqrt(V[k] * V[k + 1]);
  return T;
}

// Number of eigenvalues of B strictly below x (Sturm sign count).
int count_below(const Tridiag& T, double x) {
  int count = 0;
  double d = T.diag[0] - x;
  if (d < 0) ++count;
  for (std::size_t i = 1; i < T.diag.size(); ++i) {
    const double offsq = T.off[i - 1] * T.off[i - 1];
    if (d == 0.0) d = 1e-300;
    d = (T.diag[i] - x) - offsq / d;
    if (d < 0) ++count;
  }
  return count;
}

// k-th smallest eigenvalue (k = 0 is the principal one) by bisection.
double kth_eigenvalue(const Tridiag& T, int k, double lo, double hi) {
  for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(T, mid) <= k)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Thomas solve of (B - sigma I) y = x.
void shifted_solve(const Tridiag& T, double sigma, const std::vector<double>& x,
                   std::vector<double>& y, std::vector<double>& cw, std::vector<double>& dw) {
  const std::size_t M = T.diag.size();
  cw.resize(M);
  dw.resize(M);
  double denom = T.diag[0] - sigma;
  if (std::abs(denom) < 1e-300) denom = 1e-300;
  cw[0] = (M > 1) ? T.off[0] / denom : 0.0;
  dw[0] = x[0] / denom;
  for (std::size_t i = 1; i < M; ++i) {
    double m = T.diag[i] - sigma - T.off[i - 1] * cw[i - 1];
    if (std::abs(m) < 1e-300) m = 1e-300;
    if (i + 1 < M) cw[i] = T.off[i] / m;
    dw[i] = (x[i] - T.off[i - 1] * dw[i - 1]) / m;
  }
  y.resize(M);
  y[M - 1] = dw[M - 1];
  for (std::size_t i = M - 1; i-- > 0;) y[i] = dw[i] - cw[i] * y[i + 1];
}

double apply_rayleigh(const Tridiag& T, const std::vector<double>& x) {
  const std::size_t M = T.diag.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    double bx = T.diag[i] * x[i];
    if (i > 0) bx += T.off[i - 1] * x[i - 1];
    if (i + 1 < M) bx += T.off[i] * x[i + 1];
    num += x[i] * bx;
    den += x[i] * x[i];
  }
  return num / den;
}

}  // namespace

StabilityReport principal_eigenvalue(const RadialSolution& sol, int modes) {
  if (modes < 1) throw std::invalid_argument("principal_eigenvalue: modes >= 1 required");
  const Tridiag T = assemble(sol);
  const std::size_t M = T.diag.size();

  // Gershgorin bounds for the bisection window.
  double lo = T.diag[0], hi = T.diag[0];
  for (std::size_t i = 0; i < M; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(T.off[i - 1]);
    if (i + 1 < M) radius += std::abs(T.off[i]);
    lo = std::min(lo, T.diag[i] - radius);
    hi = std::max(hi, T.diag[i] + radius);
  }

  StabilityReport rep;
  rep.lambda = sol.lambda;
  rep.grid_size = static_cast<int>(sol.size());
  for (int k = 0; k < modes; ++k)
    rep.low_eigenvalues.push_back(kth_eigenvalue(T, k, lo, hi));

  // Eigenfunction by shifted inverse iteration just below mu1.
  const double mu1_est = rep.low_eigenvalues[0];
  const double gap = (modes > 1 ? rep.low_eigenvalues[1] : mu1_est + 1.0) - mu1_est;
  double sigma = mu1_est - std::max(1e-8 * (1.0 + std::abs(mu1_est)), 1e-3 * std::abs(gap));
  std::vector<double> x(M), y, cw, dw;
  for (std::size_t i = 0; i < M; ++i) x[i] = 1.0;  // positive start, positive ground state
  double rho = mu1_est;
  for (int it = 0; it < 100; ++it) {
    shifted_solve(T, sigma, x, y, cw, dw);
    double norm = 0.0;
    for (double v : y) norm += v * v;
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw std::runtime_error("principal_eigenvalue: inverse iteration breakdown");
    for (std::size_t i = 0; i < M; ++i) x[i] = y[i] / norm;
    const double rho_new = apply_rayleigh(T, x);
    if (std::abs(rho_new - rho) <= 1e-13 * (1.0 + std::abs(rho_new)) && it >= 2) {
      rho = rho_new;
      break;
    }
    rho = rho_new;
    if (it == 99)
      throw std::runtime_error("principal_eigenvalue: inverse iteration did not converge, last rayleigh " +
                               fmt_double(rho));
  }
  rep.mu1 = rep.low_eigenvalues[0];
  rep.quad_form_min = rho;

  // Back to nodal values: xi_i = x_i / sqrt(V_i); pad the grid ends.
  rep.eigenfunction.assign(sol.size(), 0.0);
  for (std::size_t k = 0; k < M; ++k)
    rep.eigenfunction[T.first_node + k] = x[k] / std::sqrt(T.vol[k]);
  if (T.first_node == 1) rep.eigenfunction[0] = 0.0;
  double mx = 0.0;
  double sign = 1.0;
  for (double v : rep.eigenfunction)
    if (std::abs(v) > mx) {
      mx = std::abs(v);
      sign = v > 0 ? 1.0 : -1.0;
    }
  if (mx > 0)
    for (double& v : rep.eigenfunction) v *= sign / mx;

  double max_fprime = 0.0;
  for (std::size_t i = 0; i < sol.size(); ++i)
    max_fprime = std::max(max_fprime, sol.spec.fprime(sol.u[i]));
  rep.stable = rep.mu1 >= -1e-6 * (1.0 + std::abs(sol.lambda) * max_fprime);
  return rep;
}

double rayleigh(const RadialSolution& sol, std::span<const double> xi) {
  if (xi.size() != sol.size()) throw std::invalid_argument("rayleigh: xi size mismatch");
  double xmax = 0.0;
  for (double v : xi) xmax = std::max(xmax, std::abs(v));
  if (std::abs(xi.back()) > 1e-8 * (xmax > 0 ? xmax : 1.0))
    throw std::invalid_argument("rayleigh: xi must vanish at r = 1");

  const std::size_t N = sol.size();
  const double h = sol.h();
  std::vector<double> integrand(N);
  for (std::size_t i = 0; i < N; ++i) {
    double dxi;
    if (i == 0)
      dxi = (-3.0 * xi[0] + 4.0 * xi[1] - xi[2]) / (2.0 * h);
    else if (i + 1 == N)
      dxi = (3.0 * xi[N - 1] - 4.0 * xi[N - 2] + xi[N - 3]) / (2.0 * h);
    else
      dxi = (xi[i + 1] - xi[i - 1]) / (2.0 * h);
    const double w = std::pow(sol.r[i], sol.n - 1);
    integrand[i] =
        (dxi * dxi - sol.lambda * sol.spec.fprime(sol.u[i]) * xi[i] * xi[i]) * w;
  }
  return sphere_area(sol.n) * trapz_uniform(h, integrand);
}

InequalityReport gradient_identity_defect(const RadialSolution& sol, double uprime_threshold) {
  const std::size_t N = sol.size();
  if (N < 3) throw std::invalid_argument("gradient_identity_defect: grid too small");
  const double h = sol.h();
  const int n = sol.n;

  InequalityReport rep;
  rep.name = "gradient_identity";
  std::size_t used = 0;
  double worst = 0.0, worst_lhs = 0.0, worst_rhs = 0.0, worst_r = 0.0;
  for (std::size_t i = 1; i + 1 < N; ++i) {
    const double r = sol.r[i];
    if (r <= 0.0) continue;
    const double g = std::abs(sol.uprime[i]);
    if (g < uprime_threshold) continue;
    const double gm = std::abs(sol.uprime[i - 1]);
    const double gp = std::abs(sol.uprime[i + 1]);
    const double d1 = (gp - gm) / (2.0 * h);
    const double d2 = (gp - 2.0 * g + gm) / (h * h);
    const double lhs = d2 + ((n - 1) / r) * d1 + sol.lambda * sol.spec.fprime(sol.u[i]) * g;
    const double rhs = ((n - 1) / (r * r)) * g;
    const double defect = std::abs(lhs - rhs) / (1.0 + std::max(std::abs(lhs), std::abs(rhs)));
    ++used;
    if (defect > worst) {
      worst = defect;
      worst_lhs = lhs;
      worst_rhs = rhs;
      worst_r = r;
    }
  }
  if (used == 0) throw std::invalid_argument("gradient_identity_defect: empty regular set");
  rep.lhs = worst_lhs;
  rep.rhs = worst_rhs;
  rep.slack = -worst;  // identity: any defect counts against it
  rep.eps_disc = worst;
  rep.params["max_relative_defect"] = worst;
  rep.params["r_at_max"] = worst_r;
  rep.params["h"] = h;
  rep.params["regular_nodes"] = static_cast<double>(used);
  return rep;
}

}  // namespace stablab
