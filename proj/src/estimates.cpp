#include "stablab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stablab/quadrature.hpp"
#include "stablab/spectrum.hpp"

namespace stablab {

bool alpha_range_ok(int n, double alpha) { return alpha > n - 2 && alpha < n - 1; }

bool alpha_quadratic_ok(int n, bool radial, double alpha) {
  const double lhs = 0.25 * (alpha - 2.0) * (alpha - 2.0);
  if (radial) return lhs < n - 1.0;
  const double d = n - 1.0 - alpha;
  return lhs < d * d / (n - 1.0);
}

AlphaAdmissibility admissible_alpha(int n, bool radial) {
  if (n < 2) throw std::invalid_argument("admissible_alpha: n >= 2 required");
  AlphaAdmissibility adm;
  adm.n = n;
  adm.radial = radial;

  double lo = static_cast<double>(n - 2);
  double hi = static_cast<double>(n - 1);

  if (radial) {
    // (alpha-2)^2 < 4(n-1) : alpha in (2 - 2 sqrt(n-1), 2 + 2 sqrt(n-1))
    const double half = 2.0 * std::sqrt(n - 1.0);
    lo = std::max(lo, 2.0 - half);
    hi = std::min(hi, 2.0 + half);
  } else {
    // (5-n) a^2 - 4(n-1) a + 4(n-1)(n-2) > 0 on (n-2, n-1)
    const double a = 5.0 - n, b = -4.0 * (n - 1.0), c = 4.0 * (n - 1.0) * (n - 2.0);
    if (n == 5) {
      // linear boundary: condition holds iff alpha < 3
      hi = std::min(hi, 3.0);
    } else {
      const double disc = b * b - 4.0 * a * c;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        double r1 = (-b - sq) / (2.0 * a), r2 = (-b + sq) / (2.0 * a);
        if (r1 > r2) std::swap(r1, r2);
        if (a > 0) {
          // parabola opens up: condition holds outside [r1, r2]
          const double mid = 0.5 * (lo + hi);
          if (mid > r1 && mid < r2) {
            // the window sits inside the forbidden band unless cut by a root
            if (r1 > lo)
              hi = std::min(hi, r1);
            else if (r2 < hi)
              lo = std::max(lo, r2);
            else
              lo = hi;  // empty
          } else if (mid <= r1) {
            hi = std::min(hi, r1);
          } else {
            lo = std::max(lo, r2);
          }
        } else {
          // opens down: condition holds inside (r1, r2)
          lo = std::max(lo, r1);
          hi = std::min(hi, r2);
        }
      } else if (a < 0) {
        lo = hi;  // condition never holds
      }
    }
  }

  adm.nonempty = hi > lo;
  if (adm.nonempty) {
    adm.lo = lo;
    adm.hi = hi;
  }
  return adm;
}

namespace {

double omega_dx(const RadialSolution& sol) { return sphere_area(sol.n); }

// zeta: C^1 cubic ramp, 1 on [0, 1-delta/2], 0 at r = 1, |zeta'| <= 3/delta.
struct Ramp {
  double delta;
  double operator()(double r) const {
    const double a = 1.0 - 0.5 * delta;
    if (r <= a) return 1.0;
    if (r >= 1.0) return 0.0;
    const double t = (r - a) / (0.5 * delta);
    return 1.0 - t * t * (3.0 - 2.0 * t);
  }
  double deriv(double r) const {
    const double a = 1.0 - 0.5 * delta;
    if (r <= a || r >= 1.0) return 0.0;
    const double t = (r - a) / (0.5 * delta);
    return -6.0 * t * (1.0 - t) / (0.5 * delta) * 0.5;
  }
};

// ∫ f(r_i) dr over the nodes with r >= r_min, trapezoid; the segment below
// r_min is charged as a local power-law remainder f(r0) * r0 / (p+1).
struct Excised {
  double value = 0.0;
  double remainder = 0.0;
};

Excised excised_trapz(const RadialSolution& sol, const std::function<double(double, std::size_t)>& f,
                      double r_min, double local_power) {
  std::vector<double> rs, vals;
  for (std::size_t i = 0; i < sol.size(); ++i) {
    const double r = sol.r[i];
    if (r < r_min) continue;
    rs.push_back(r);
    vals.push_back(f(r, i));
  }
  Excised out;
  if (rs.size() < 2) return out;
  out.value = trapz(rs, vals);
  if (rs.front() > sol.r.front() || rs.front() > 0.0)
    out.remainder = std::abs(vals.front()) * rs.front() / (local_power + 1.0);
  return out;
}

// trapezoid of f over grid nodes with r in [r_lo, 1], first cell split by
// linear interpolation.
double tail_trapz(const RadialSolution& sol, const std::function<double(double, std::size_t)>& f,
                  double r_lo) {
  const std::size_t N = sol.size();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < N; ++i) {
    const double r1 = sol.r[i], r2 = sol.r[i + 1];
    if (r2 <= r_lo) continue;
    const double f1 = f(r1, i), f2 = f(r2, i + 1);
    if (r1 >= r_lo) {
      acc += 0.5 * (r2 - r1) * (f1 + f2);
    } else {
      const double s = (r_lo - r1) / (r2 - r1);
      const double f_lo = f1 + s * (f2 - f1);
      acc += 0.5 * (r2 - r_lo) * (f_lo + f2);
    }
  }
  return acc;
}

void require_stable(const StabilityReport& stability, const char* who) {
  if (!stability.stable)
    throw std::invalid_argument(std::string(who) + ": refused, the solution is not stable");
}

}  // namespace

InequalityReport curvature_stability_bound(const RadialSolution& sol,
                                           const std::function<double(double)>& eta,
                                           const std::function<double(double)>& deta,
                                           const StabilityReport& stability) {
  require_stable(stability, "curvature_stability_bound");
  const int n = sol.n;
  const double omega = omega_dx(sol);
  const std::size_t N = sol.size();

  std::vector<double> lhs_i(N), rhs_i(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double r = sol.r[i];
    const double up = sol.uprime[i];
    const double e = eta(r);
    const double de = deta(r);
    const double w = std::pow(r, n - 1);
    // |grad_T |grad u|| = 0 and |A|^2 |grad u|^2 = (n-1)/r^2 u'^2 radially
    lhs_i[i] = r > 0.0 ? (n - 1.0) / (r * r) * up * up * e * e * w : 0.0;
    rhs_i[i] = up * up * de * de * w;
  }
  InequalityReport rep;
  rep.name = "curvature_stability";
  rep.lhs = omega * trapz(sol.r, lhs_i);
  rep.rhs = omega * trapz(sol.r, rhs_i);
  rep.slack = rep.rhs - rep.lhs;
  rep.eps_disc = 10.0 * sol.h() * sol.h() * (std::abs(rep.lhs) + std::abs(rep.rhs) + 1.0);
  rep.params["n"] = n;
  rep.params["lambda"] = sol.lambda;
  rep.params["mu1"] = stability.mu1;
  return rep;
}

EstimateReport weighted_dirichlet(const RadialSolution& sol, double alpha, double delta,
                                  const StabilityReport& stability, bool override_admissibility) {
  require_stable(stability, "weighted_dirichlet");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("weighted_dirichlet: delta in (0,1) required");
  const AlphaAdmissibility adm = admissible_alpha(sol.n, true);
  const bool admissible = adm.contains(alpha);
  if (!admissible && !override_admissibility)
    throw std::invalid_argument("weighted_dirichlet: alpha outside the admissible interval "
                                "(pass override_admissibility to force)");

  const int n = sol.n;
  const double omega = omega_dx(sol);
  const double r_exc = std::max(2.0 * sol.h(), sol.r.front());
  const Excised I = excised_trapz(
      sol, [&](double r, std::size_t i) {
        return sol.uprime[i] * sol.uprime[i] * std::pow(r, n - 1.0 - alpha);
      },
      alpha > 0 ? r_exc : 0.0, n + 1.0 - alpha);
  const double D = omega * tail_trapz(
                               sol, [&](double r, std::size_t i) {
                                 return sol.uprime[i] * sol.uprime[i] * std::pow(r, n - 1.0);
                               },
                               1.0 - delta);

  EstimateReport rep;
  rep.name = "weighted_dirichlet";
  rep.lhs = omega * I.value;
  rep.rhs = D;
  rep.empirical_constant = D > 0 ? rep.lhs / D : 0.0;
  rep.params["n"] = n;
  rep.params["lambda"] = sol.lambda;
  rep.params["alpha"] = alpha;
  rep.params["delta"] = delta;
  rep.params["excision_remainder"] = omega * I.remainder;
  rep.params["admissible"] = admissible ? 1.0 : 0.0;
  if (!admissible) rep.params["admissibility_overridden"] = 1.0;
  return rep;
}

std::vector<InequalityReport> dirichlet_pipeline(const RadialSolution& sol, double alpha,
                                                 double delta, double epsilon,
                                                 const StabilityReport& stability) {
  require_stable(stability, "dirichlet_pipeline");
  const int n = sol.n;
  if (!(alpha >= 0.0 && alpha < n - 1))
    throw std::invalid_argument("dirichlet_pipeline: alpha in [0, n-1) required");
  if (!(epsilon > 0.0)) throw std::invalid_argument("dirichlet_pipeline: epsilon > 0 required");
  // strict absorption constant, radial form
  if (!((1.0 + 2.0 * epsilon) * (n - 1.0) * 0.25 * (alpha - 2.0) * (alpha - 2.0) <
        (n - 1.0) * (n - 1.0)))
    throw std::invalid_argument(
        "dirichlet_pipeline: final inequality not strict for the supplied (alpha, epsilon)");

  const double omega = omega_dx(sol);
  const Ramp zeta{delta};
  const double r_exc = std::max(2.0 * sol.h(), sol.r.front());
  double up_max = 0.0;
  for (double v : sol.uprime) up_max = std::max(up_max, std::abs(v));

  // K = omega ∫ u'^2 zeta^2 r^{n-1-alpha} dr and its kappa-regularized version
  auto K_of_kappa = [&](double kappa) {
    const Excised e = excised_trapz(
        sol,
        [&](double r, std::size_t i) {
          const double z = zeta(r);
          const double mod = std::sqrt(sol.uprime[i] * sol.uprime[i] + kappa * kappa);
          return std::abs(sol.uprime[i]) * mod * z * z * std::pow(r, n - 1.0 - alpha);
        },
        alpha > 0 ? r_exc : 0.0, n + 1.0 - alpha);
    return omega * e.value;
  };
  const double k1 = K_of_kappa(1e-2 * up_max), k2 = K_of_kappa(1e-3 * up_max),
               k3 = K_of_kappa(1e-4 * up_max);
  // Richardson in kappa^2 on the last two values (ratio 100)
  const double K_extrap = k3 + (k3 - k2) / 99.0;
  const Excised Kexact = excised_trapz(
      sol,
      [&](double r, std::size_t i) {
        const double z = zeta(r);
        return sol.uprime[i] * sol.uprime[i] * z * z * std::pow(r, n - 1.0 - alpha);
      },
      alpha > 0 ? r_exc : 0.0, n + 1.0 - alpha);
  const double K = omega * Kexact.value;

  std::vector<InequalityReport> links;

  {  // 1. foliated Hardy step with phi_kappa
    InequalityReport l;
    l.name = "hardy_step";
    l.lhs = (n - 1.0) * K_extrap;  // (n-1-alpha) I + alpha I_r, radial I_r = I
    l.rhs = std::sqrt(K_extrap) * std::sqrt((n - 1.0) * (n - 1.0) * K_extrap);
    l.slack = l.rhs - l.lhs;
    l.eps_disc = 1e-12 * (1.0 + std::abs(l.rhs)) + omega * Kexact.remainder * (n - 1.0);
    l.params["I_kappa_1"] = k1;
    l.params["I_kappa_2"] = k2;
    l.params["I_kappa_3"] = k3;
    l.params["I_extrapolated"] = K_extrap;
    l.params["I_unregularized"] = K;
    links.push_back(l);
  }

  {  // 2. epsilon Cauchy-Schwarz split of the tangential term (vanishes radially)
    InequalityReport l;
    l.name = "cs_split";
    l.lhs = 0.0;
    l.rhs = 0.0;
    l.slack = 0.0;
    l.eps_disc = 0.0;
    l.params["radial"] = 1.0;
    l.params["epsilon"] = epsilon;
    links.push_back(l);
  }

  {  // 3. curvature comparison H^2 <= (n-1)|A|^2, an equality on spheres
    double max_defect = 0.0;
    for (std::size_t i = 0; i < sol.size(); ++i) {
      const double r = sol.r[i];
      if (r < r_exc) continue;
      const double H2 = ((n - 1.0) / r) * ((n - 1.0) / r);
      const double nA2 = (n - 1.0) * ((n - 1.0) / (r * r));
      max_defect = std::max(max_defect, std::abs(H2 - nA2) / (1.0 + H2));
    }
    InequalityReport l;
    l.name = "curvature_comparison";
    l.lhs = (n - 1.0) * (n - 1.0) * K;
    l.rhs = (n - 1.0) * ((n - 1.0) * K);
    l.slack = l.rhs - l.lhs;
    l.eps_disc = 1e-12 * (1.0 + std::abs(l.rhs));
    l.params["pointwise_equality_defect"] = max_defect;
    links.push_back(l);
  }

  double sz_rhs;
  {  // 4. stability step with eta = r^{(2-alpha)/2} zeta
    const Excised rhs_int = excised_trapz(
        sol,
        [&](double r, std::size_t i) {
          const double z = zeta(r);
          const double dz = zeta.deriv(r);
          const double eta_p = 0.5 * (2.0 - alpha) * std::pow(r, -0.5 * alpha) * z +
                               std::pow(r, 0.5 * (2.0 - alpha)) * dz;
          return sol.uprime[i] * sol.uprime[i] * eta_p * eta_p * std::pow(r, n - 1.0);
        },
        r_exc, n + 1.0 - alpha);
    sz_rhs = omega * rhs_int.value;
    InequalityReport l;
    l.name = "stability_step";
    l.lhs = (n - 1.0) * K;
    l.rhs = sz_rhs;
    l.slack = l.rhs - l.lhs;
    l.eps_disc = omega * rhs_int.remainder +
                 10.0 * sol.h() * sol.h() * (std::abs(l.lhs) + std::abs(l.rhs) + 1.0);
    l.params["mu1"] = stability.mu1;
    links.push_back(l);
  }

  {  // 5. absorption: solve the assembled chain for I and compare with the
     //    directly computed weighted Dirichlet integral (no cutoff).
    const Excised Zint_e = excised_trapz(
        sol,
        [&](double r, std::size_t i) {
          const double dz = zeta.deriv(r);
          return sol.uprime[i] * sol.uprime[i] * dz * dz * std::pow(r, n + 1.0 - alpha);
        },
        0.0, n + 3.0 - alpha);
    const double Zint = omega * Zint_e.value;
    const double denom = (n - 1.0) - (1.0 + epsilon) * 0.25 * (alpha - 2.0) * (alpha - 2.0);
    const double K_bound = (1.0 + 1.0 / epsilon) * Zint / denom;

    const Excised Ifull_e = excised_trapz(
        sol,
        [&](double r, std::size_t i) {
          return sol.uprime[i] * sol.uprime[i] * std::pow(r, n - 1.0 - alpha);
        },
        alpha > 0 ? r_exc : 0.0, n + 1.0 - alpha);
    const double I_full = omega * Ifull_e.value;
    const double Dhalf = omega * tail_trapz(
                                     sol,
                                     [&](double r, std::size_t i) {
                                       return sol.uprime[i] * sol.uprime[i] * std::pow(r, n - 1.0);
                                     },
                                     1.0 - 0.5 * delta);
    const double tail_weight =
        std::max(std::pow(1.0 - 0.5 * delta, -alpha), 1.0);  // r^{-alpha} on the collar
    const double I_bound = K_bound + tail_weight * Dhalf;

    InequalityReport l;
    l.name = "absorption";
    l.lhs = I_full;
    l.rhs = I_bound;
    l.slack = l.rhs - l.lhs;
    l.eps_disc = omega * (Ifull_e.remainder + Zint_e.remainder) +
                 10.0 * sol.h() * sol.h() * (std::abs(l.lhs) + std::abs(l.rhs) + 1.0);
    l.params["K"] = K;
    l.params["K_bound"] = K_bound;
    l.params["Z_cutoff"] = Zint;
    l.params["denominator"] = denom;
    l.params["epsilon"] = epsilon;
    l.params["alpha"] = alpha;
    l.params["delta"] = delta;
    links.push_back(l);
  }

  return links;
}

EstimateReport potential_bound(const RadialSolution& sol, double delta) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("potential_bound: B_{delta/2}(0) must stay inside the ball");
  const int n = sol.n;
  const double omega = omega_dx(sol);
  const double rho = 0.5 * delta;

  double num = 0.0, den = 0.0;  // ∫ u r^{n-1}, ∫ r^{n-1} over [0, rho]
  for (std::size_t i = 0; i + 1 < sol.size(); ++i) {
    const double r1 = sol.r[i], r2 = sol.r[i + 1];
    if (r1 >= rho) break;
    const double rb = std::min(r2, rho);
    const double s = (rb - r1) / (r2 - r1);
    const double ub = sol.u[i] + s * (sol.u[i + 1] - sol.u[i]);
    const double f1 = sol.u[i] * std::pow(r1, n - 1.0), f2 = ub * std::pow(rb, n - 1.0);
    num += 0.5 * (rb - r1) * (f1 + f2);
    den += 0.5 * (rb - r1) * (std::pow(r1, n - 1.0) + std::pow(rb, n - 1.0));
  }
  const double avg = den > 0 ? num / den : sol.u.front();

  std::vector<double> g(sol.size());
  for (std::size_t i = 0; i < sol.size(); ++i) g[i] = std::abs(sol.uprime[i]);
  const double rhs = omega * trapz(sol.r, g);  // r^{1-n} |u'| r^{n-1} = |u'|

  EstimateReport rep;
  rep.name = "potential_bound";
  rep.lhs = std::abs(sol.u.front() - avg);
  rep.rhs = rhs;
  rep.empirical_constant = rhs > 0 ? rep.lhs / rhs : 0.0;
  rep.params["n"] = n;
  rep.params["lambda"] = sol.lambda;
  rep.params["delta"] = delta;
  rep.params["ball_average"] = avg;
  return rep;
}

EstimateReport linfty_ratio(const RadialSolution& sol, double delta) {
  if (!(delta > 0.0 && delta <= 0.5))
    throw std::invalid_argument("linfty_ratio: delta in (0, 1/2] required");
  const int n = sol.n;
  const double omega = omega_dx(sol);

  double sup = 0.0;
  for (std::size_t i = 0; i < sol.size(); ++i)
    if (sol.r[i] <= 1.0 - delta) sup = std::max(sup, std::abs(sol.u[i]));

  std::vector<double> l1(sol.size());
  for (std::size_t i = 0; i < sol.size(); ++i)
    l1[i] = std::abs(sol.u[i]) * std::pow(sol.r[i], n - 1.0);
  const double u_l1 = omega * trapz(sol.r, l1);
  const double grad_l2 = std::sqrt(omega * tail_trapz(
                                               sol,
                                               [&](double r, std::size_t i) {
                                                 return sol.uprime[i] * sol.uprime[i] *
                                                        std::pow(r, n - 1.0);
                                               },
                                               1.0 - delta));

  EstimateReport rep;
  rep.name = "linfty_ratio";
  rep.lhs = sup;
  rep.rhs = u_l1 + grad_l2;
  rep.empirical_constant = sup == 0.0 ? 0.0 : sup / rep.rhs;
  rep.params["n"] = n;
  rep.params["lambda"] = sol.lambda;
  rep.params["delta"] = delta;
  rep.params["u_l1"] = u_l1;
  rep.params["grad_l2_collar"] = grad_l2;
  return rep;
}

SingularCheck singular_solution_check(int n) {
  if (n < 3) throw std::invalid_argument("singular_solution_check: n >= 3 required");
  SingularCheck chk;
  chk.n = n;
  chk.hardy_const = 0.25 * (n - 2.0) * (n - 2.0);
  chk.nonlin_const = 2.0 * (n - 2.0);

  const Nonlinearity f = Nonlinearity::exponential(2.0 * (n - 2.0), 1.0);

  // (i) pointwise residual of the pair on (h, 1]
  const int N = 256;
  double worst = 0.0;
  for (int i = 1; i <= N; ++i) {
    const double r = static_cast<double>(i) / N;
    const double u = -2.0 * std::log(r);
    const double upp = 2.0 / (r * r);
    const double up = -2.0 / r;
    const double res = upp + (n - 1.0) / r * up + f.f(u);
    worst = std::max(worst, std::abs(res));
  }
  chk.max_residual = worst;

  // (ii) stability form against xi_s = r^{-(n-2)/2+s}(1-r); the substitution
  // r = t^6 keeps the integrands bounded down to s = 0.1.
  const double omega = sphere_area(n);
  const int q = 6, Nt = 40000;
  auto Q_of = [&](double s) {
    const double gamma = s - 0.5 * (n - 2.0);
    double acc = 0.0;
    for (int i = 0; i <= Nt; ++i) {
      const double t = static_cast<double>(i) / Nt;
      if (t == 0.0) continue;  // integrand vanishes at t = 0 for s > 0
      const double r = std::pow(t, q);
      const double rp = std::pow(r, gamma);
      const double xi = rp * (1.0 - r);
      const double xip = gamma * rp / r * (1.0 - r) - rp;
      const double wvol = std::pow(r, n - 1.0);
      const double fprime = chk.nonlin_const / (r * r);  // f'(u) at u = -2 log r
      const double integrand = (xip * xip - fprime * xi * xi) * wvol;
      const double jac = q * std::pow(t, q - 1);
      const double w = (i == 0 || i == Nt) ? 0.5 : 1.0;
      acc += w * integrand * jac;
    }
    return omega * acc / Nt;
  };

  chk.min_q = 1e300;
  for (int k = 2; k <= 20; ++k) {
    const double s = 0.05 * k;  // 0.1 ... 1.0
    const double qv = Q_of(s);
    chk.sweep.emplace_back(s, qv);
    if (qv < chk.min_q) {
      chk.min_q = qv;
      chk.witness_s = s;
    }
  }
  chk.form_nonnegative = chk.min_q >= -1e-8 * omega;
  return chk;
}

double morrey_norm_radial(std::span<const double> r, std::span<const double> w, int n, double p,
                          double lam, int centers, int radii) {
  if (p < 1.0 || lam <= 0.0 || lam > n) throw std::invalid_argument("morrey_norm: bad (p, lam)");
  const double omega_sub = sphere_area(n - 1);  // equatorial sphere of the polar cap

  std::vector<double> wp(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) wp[i] = std::pow(std::abs(w[i]), p);

  double sup = 0.0;
  for (int c = 0; c < centers; ++c) {
    const double d = static_cast<double>(c) / centers;  // |y|
    for (int j = 0; j < radii; ++j) {
      const double rho = 2.0 * std::pow(0.5, j);
      // ∫_{B_rho(y)} |w|^p = ∫ shells s^{n-1} (cap measure) |w(s)|^p ds
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        auto shell = [&](double s, double val) {
          if (s <= 0.0) return 0.0;
          double ang;
          if (d == 0.0) {
            ang = s <= rho ? sphere_area(n) : 0.0;
          } else if (s + d <= rho) {
            ang = sphere_area(n);
          } else if (std::abs(s - d) >= rho) {
            ang = 0.0;
          } else {
            const double ct = std::clamp((s * s + d * d - rho * rho) / (2.0 * s * d), -1.0, 1.0);
            ang = omega_sub * cap_integral(n, std::acos(ct));
          }
          return val * std::pow(s, n - 1.0) * ang;
        };
        acc += 0.5 * (r[i + 1] - r[i]) * (shell(r[i], wp[i]) + shell(r[i + 1], wp[i + 1]));
      }
      sup = std::max(sup, std::pow(rho, lam - n) * acc);
    }
  }
  return std::pow(sup, 1.0 / p);
}

double morrey_norm(const RadialSolution& sol, bool of_gradient, double p, double lam, int centers,
                   int radii) {
  std::vector<double> w(sol.size());
  for (std::size_t i = 0; i < sol.size(); ++i)
    w[i] = of_gradient ? std::abs(sol.uprime[i]) : std::abs(sol.u[i]);
  return morrey_norm_radial(sol.r, w, sol.n, p, lam, centers, radii);
}

double morrey_norm(const ScalarField& w, double p, double lam, int centers_per_axis, int radii) {
  const int dim = w.dim();
  if (p < 1.0 || lam <= 0.0 || lam > dim) throw std::invalid_argument("morrey_norm: bad (p, lam)");
  const auto dims = w.dims();
  const double vol = w.cell_volume();
  double diam = 0.0;
  for (int a = 0; a < dim; ++a) diam += std::pow((dims[a] - 1) * w.spacing()[a], 2);
  diam = std::sqrt(diam);

  double sup = 0.0;
  for (int cz = 0; cz < (dim == 3 ? centers_per_axis : 1); ++cz)
    for (int cy = 0; cy < centers_per_axis; ++cy)
      for (int cx = 0; cx < centers_per_axis; ++cx) {
        std::array<double, 3> y{0, 0, 0};
        const int cs[3] = {cx, cy, cz};
        for (int a = 0; a < dim; ++a)
          y[a] = w.origin()[a] + (cs[a] + 0.5) / centers_per_axis * (dims[a] - 1) * w.spacing()[a];
        for (int j = 0; j < radii; ++j) {
          const double rho = diam * std::pow(0.5, j);
          double acc = 0.0;
          for (int k = 0; k < dims[2]; ++k)
            for (int jj = 0; jj < dims[1]; ++jj)
              for (int i = 0; i < dims[0]; ++i) {
                if (!w.masked_in(i, jj, k)) continue;  // extension by zero
                const auto pnt = w.position(i, jj, k);
                double dist2 = 0.0;
                for (int a = 0; a < dim; ++a) dist2 += (pnt[a] - y[a]) * (pnt[a] - y[a]);
                if (dist2 > rho * rho) continue;
                acc += std::pow(std::abs(w.at(i, jj, k)), p);
              }
          sup = std::max(sup, std::pow(rho, lam - dim) * acc * vol);
        }
      }
  return std::pow(sup, 1.0 / p);
}

double lp_norm(const RadialSolution& sol, double p) {
  if (p < 1.0) throw std::invalid_argument("lp_norm: p >= 1 required");
  std::vector<double> f(sol.size());
  for (std::size_t i = 0; i < sol.size(); ++i)
    f[i] = std::pow(std::abs(sol.u[i]), p) * std::pow(sol.r[i], sol.n - 1.0);
  return std::pow(sphere_area(sol.n) * trapz(sol.r, f), 1.0 / p);
}

GelfandFamily gelfand_family(int n, std::vector<double> ratios, int branch_points, int steps,
                             double m0_cap) {
  const Nonlinearity f = Nonlinearity::exponential(1.0, 1.0);
  const Branch branch = trace_branch(n, f, 1e30, branch_points, {}, m0_cap, steps);
  GelfandFamily fam;
  fam.n = n;
  fam.lambda_star = branch.fold.lambda_star;
  fam.u0_at_fold = branch.fold.u0_at_fold;
  fam.ratios = std::move(ratios);
  for (double t : fam.ratios)
    fam.members.push_back(solve_minimal(n, f, t * fam.lambda_star, 1e-9, m0_cap + 6.0, steps));
  return fam;
}

}  // namespace stablab
