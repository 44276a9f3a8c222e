#include "stablab/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "stablab/numerics.hpp"
#include "stablab/reports.hpp"

namespace stablab {

namespace {

constexpr double kBlowup = 1e8;

struct State {
  double u, v;  // v = u'
};

// Right-hand side of the first-order system; r > 0.
inline State rhs(int n, const Nonlinearity& spec, double lambda, double r, const State& s) {
  const double fv = spec.f(s.u);
  return {s.v, -((n - 1) / r) * s.v - lambda * fv};
}

// Dormand-Prince 5(4) step from r with size h. Returns the 5th-order result
// and the embedded error estimate.
inline bool dp45_step(int n, const Nonlinearity& spec, double lambda, double r, const State& s,
                      double h, State& out, double& err) {
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                      a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                      b6 = 11.0 / 84;
  static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                      e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                      e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  try {
    const State k1 = rhs(n, spec, lambda, r, s);
    const State k2 = rhs(n, spec, lambda, r + c2 * h, {s.u + h * a21 * k1.u, s.v + h * a21 * k1.v});
    const State k3 = rhs(n, spec, lambda, r + c3 * h,
                         {s.u + h * (a31 * k1.u + a32 * k2.u), s.v + h * (a31 * k1.v + a32 * k2.v)});
    const State k4 = rhs(n, spec, lambda, r + c4 * h,
                         {s.u + h * (a41 * k1.u + a42 * k2.u + a43 * k3.u),
                          s.v + h * (a41 * k1.v + a42 * k2.v + a43 * k3.v)});
    const State k5 = rhs(n, spec, lambda, r + c5 * h,
                         {s.u + h * (a51 * k1.u + a52 * k2.u + a53 * k3.u + a54 * k4.u),
                          s.v + h * (a51 * k1.v + a52 * k2.v + a53 * k3.v + a54 * k4.v)});
    const State k6 = rhs(n, spec, lambda, r + h,
                         {s.u + h * (a61 * k1.u + a62 * k2.u + a63 * k3.u + a64 * k4.u + a65 * k5.u),
                          s.v + h * (a61 * k1.v + a62 * k2.v + a63 * k3.v + a64 * k4.v + a65 * k5.v)});
    out.u = s.u + h * (b1 * k1.u + b3 * k3.u + b4 * k4.u + b5 * k5.u + b6 * k6.u);
    out.v = s.v + h * (b1 * k1.v + b3 * k3.v + b4 * k4.v + b5 * k5.v + b6 * k6.v);
    const State k7 = rhs(n, spec, lambda, r + h, out);
    const double eu = h * (e1 * k1.u + e3 * k3.u + e4 * k4.u + e5 * k5.u + e6 * k6.u + e7 * k7.u);
    const double ev = h * (e1 * k1.v + e3 * k3.v + e4 * k4.v + e5 * k5.v + e6 * k6.v + e7 * k7.v);
    err = std::max(std::abs(eu), std::abs(ev));
    if (!std::isfinite(out.u) || !std::isfinite(out.v) || !std::isfinite(err)) return false;
    return true;
  } catch (const std::domain_error&) {
    return false;  // f not evaluable at a probed state
  }
}

// Advances (u,v) from r_from to r_to with adaptive step control.
// Returns false on blow-up / non-evaluable f; r_stop holds the last radius.
bool advance(int n, const Nonlinearity& spec, double lambda, double r_from, double r_to, State& s,
             double& r_stop) {
  const double rtol = 1e-11, atol = 1e-12;
  double r = r_from;
  double hstep = r_to - r_from;
  while (r < r_to) {
    hstep = std::min(hstep, r_to - r);
    State next;
    double err;
    if (!dp45_step(n, spec, lambda, r, s, hstep, next, err)) {
      // Retry with a smaller step before declaring blow-up.
      if (hstep > 1e-13 * (1.0 + r)) {
        hstep *= 0.25;
        continue;
      }
      r_stop = r;
      return false;
    }
    const double scale = atol + rtol * std::max({std::abs(s.u), std::abs(next.u), std::abs(s.v),
                                                 std::abs(next.v)});
    if (err <= scale) {
      r += hstep;
      s = next;
      // |u'| ~ 1/r is the natural scale near a sharp center layer, so the
      // velocity guard is weighted by the radius.
      if (std::abs(s.u) > kBlowup || std::abs(s.v) * (r + 1e-6) > kBlowup) {
        r_stop = r;
        return false;
      }
      const double grow = (err > 0) ? 0.9 * std::pow(scale / err, 0.2) : 5.0;
      hstep *= std::clamp(grow, 0.2, 5.0);
    } else {
      hstep *= std::max(0.2, 0.9 * std::pow(scale / err, 0.2));
      if (hstep < 1e-14 * (1.0 + r)) {
        r_stop = r;
        return false;
      }
    }
  }
  r_stop = r_to;
  return true;
}

}  // namespace

RadialSolution integrate_radial(int n, const Nonlinearity& spec, double lambda, double m0,
                                int steps) {
  if (n < 2) throw std::invalid_argument("integrate_radial: n >= 2 required");
  if (steps < 100) throw std::invalid_argument("integrate_radial: steps >= 100 required");

  RadialSolution sol;
  sol.n = n;
  sol.lambda = lambda;
  sol.spec = spec;
  const double h = 1.0 / steps;
  sol.r.reserve(steps + 1);
  sol.u.reserve(steps + 1);
  sol.uprime.reserve(steps + 1);
  sol.r.push_back(0.0);
  sol.u.push_back(m0);
  sol.uprime.push_back(0.0);

  // Series start: pick r_s small enough that the quadratic term is a small
  // correction, so the truncated series stays valid even for very stiff
  // center values.
  const double f0 = spec.f(m0);
  double r_s = std::min(h, 0.05 * std::sqrt(2.0 * n * (1.0 + std::abs(m0)) /
                                            (std::abs(lambda * f0) + 1.0)));
  r_s = std::max(r_s, 1e-12);
  State s{m0 - lambda * f0 * r_s * r_s / (2.0 * n), -lambda * f0 * r_s / n};

  double r_cur = r_s;
  for (int i = 1; i <= steps; ++i) {
    const double r_next = (i == steps) ? 1.0 : i * h;
    double r_stop;
    if (!advance(n, spec, lambda, r_cur, r_next, s, r_stop)) {
      sol.diverged = true;
      sol.blowup_radius = r_stop;
      sol.r.push_back(r_stop);
      sol.u.push_back(std::clamp(s.u, -kBlowup, kBlowup));
      sol.uprime.push_back(std::clamp(s.v, -kBlowup, kBlowup));
      return sol;
    }
    r_cur = r_next;
    sol.r.push_back(r_next);
    sol.u.push_back(s.u);
    sol.uprime.push_back(s.v);
  }
  return sol;
}

namespace {

// End value u(1; m0); diverged profiles report the (clamped) value at the
// stopping radius, which carries the right sign for bracketing.
double end_value(int n, const Nonlinearity& spec, double lambda, double m0, int steps) {
  const RadialSolution sol = integrate_radial(n, spec, lambda, m0, steps);
  return sol.u.back();
}

}  // namespace

RadialSolution solve_minimal(int n, const Nonlinearity& spec, double lambda, double tol,
                             double m0_cap, int steps) {
  if (lambda < 0) throw std::invalid_argument("solve_minimal: lambda >= 0 required");
  auto G = [&](double m0) { return end_value(n, spec, lambda, m0, steps); };

  // Scan upward for the first sign change; the minimal root is the first
  // crossing of u(1; m0) from below.
  const int scan = 800;
  const double dm = m0_cap / scan;
  double a = 0.0, fa = G(a);
  if (fa == 0.0 && lambda == 0.0) return integrate_radial(n, spec, lambda, 0.0, steps);
  double b = a, fb = fa;
  bool bracketed = false;
  for (int k = 1; k <= scan; ++k) {
    b = k * dm;
    fb = G(b);
    if (fa < 0.0 && fb >= 0.0) {
      bracketed = true;
      break;
    }
    a = b;
    fa = fb;
  }
  if (!bracketed)
    throw std::runtime_error("beyond extremal parameter: no minimal solution below m0 cap");

  const double m0 = brent_root(G, a, b, 1e-13);
  RadialSolution sol = integrate_radial(n, spec, lambda, m0, steps);
  if (sol.diverged || std::abs(sol.u.back()) > tol)
    throw std::runtime_error("solve_minimal: shooting did not meet the boundary tolerance");
  return sol;
}

namespace {

// lambda(m0): unique root of u(1; lambda) = 0 at fixed m0 (f > 0 makes the
// end value strictly decreasing in lambda).
double lambda_of_m0(int n, const Nonlinearity& spec, double m0, int steps) {
  auto L = [&](double lam) { return end_value(n, spec, lam, m0, steps); };
  double lo = 0.0;
  double flo = m0;  // u(1; 0) = m0
  double hi = 1.0, fhi = L(hi);
  int guard = 0;
  while (fhi > 0.0) {
    lo = hi;
    flo = fhi;
    hi *= 2.0;
    fhi = L(hi);
    if (++guard > 60) throw std::runtime_error("trace_branch: lambda bracket expansion failed");
  }
  (void)flo;
  if (fhi == 0.0) return hi;
  return brent_root(L, lo, hi, 1e-12);
}

}  // namespace

Branch trace_branch(int n, const Nonlinearity& spec, double lambda_cap, int points,
                    const Mu1Fn& mu1, double m0_cap, int steps, double m0_tol) {
  if (points < 8) throw std::invalid_argument("trace_branch: points >= 8 required");

  Branch branch;
  const double m0_min = 0.02;
  const double ratio = std::pow(m0_cap / m0_min, 1.0 / (points - 1));

  std::vector<double> m0s, lams;
  for (int k = 0; k < points; ++k) {
    const double m0 = m0_min * std::pow(ratio, k);
    const double lam = lambda_of_m0(n, spec, m0, steps);
    m0s.push_back(m0);
    lams.push_back(lam);
    BranchPoint pt;
    pt.lambda = lam;
    pt.u0 = m0;
    pt.mu1 = std::numeric_limits<double>::quiet_NaN();
    if (mu1) {
      const RadialSolution sol = integrate_radial(n, spec, lam, m0, steps);
      pt.mu1 = mu1(sol);
    }
    branch.points.push_back(pt);
    if (lam > lambda_cap) break;
  }

  // Fold: maximum of lambda(m0).
  std::size_t kmax = 0;
  for (std::size_t k = 1; k < lams.size(); ++k)
    if (lams[k] > lams[kmax]) kmax = k;

  BranchFold fold;
  fold.interior = kmax > 0 && kmax + 1 < lams.size();
  if (fold.interior) {
    const double a = m0s[kmax - 1], b = m0s[kmax + 1];
    auto lam_of = [&](double m0) { return lambda_of_m0(n, spec, m0, steps); };
    const double m0f = golden_max(lam_of, a, b, m0_tol);
    fold.u0_at_fold = m0f;
    fold.lambda_star = lam_of(m0f);
    // The curvature of lambda(m0) at the fold bounds the refinement error;
    // a non-monotone tail at roundoff level widens the reported interval.
    const double lam_lo = lam_of(m0f - 10 * m0_tol), lam_hi = lam_of(m0f + 10 * m0_tol);
    fold.lambda_uncertainty =
        std::max({fold.lambda_star - lam_lo, fold.lambda_star - lam_hi, 1e-12});
  } else {
    fold.u0_at_fold = m0s[kmax];
    fold.lambda_star = lams[kmax];
    fold.lambda_uncertainty =
        lams.size() > 1 ? std::abs(lams[kmax] - lams[kmax - (kmax > 0 ? 1 : 0)]) : 0.0;
    if (fold.lambda_uncertainty == 0.0 && lams.size() > 1)
      fold.lambda_uncertainty = std::abs(lams.back() - lams[lams.size() - 2]);
  }
  branch.fold = fold;
  return branch;
}

double residual(const RadialSolution& sol) {
  const std::size_t N = sol.size();
  if (N < 3) throw std::invalid_argument("residual: need at least 3 grid nodes");
  const double h = sol.h();
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < N; ++i) {
    const double r = sol.r[i];
    if (r <= 0.0) continue;
    const double upp = (sol.uprime[i + 1] - sol.uprime[i - 1]) / (2.0 * h);
    const double res =
        upp + ((sol.n - 1) / r) * sol.uprime[i] + sol.lambda * sol.spec.f(sol.u[i]);
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

RadialSolution sample_profile(int n, double lambda, const Nonlinearity& spec,
                              const std::function<double(double)>& u,
                              const std::function<double(double)>& uprime, double r0, int steps) {
  RadialSolution sol;
  sol.n = n;
  sol.lambda = lambda;
  sol.spec = spec;
  const double h = (1.0 - r0) / steps;
  for (int i = 0; i <= steps; ++i) {
    const double r = r0 + i * h;
    sol.r.push_back(r);
    sol.u.push_back(u(r));
    sol.uprime.push_back(uprime(r));
  }
  return sol;
}

void write_profile_csv(std::ostream& os, const RadialSolution& sol) {
  os << "r,u,uprime\n";
  for (std::size_t i = 0; i < sol.size(); ++i)
    os << fmt_double(sol.r[i]) << ',' << fmt_double(sol.u[i]) << ',' << fmt_double(sol.uprime[i])
       << '\n';
}

void write_branch_csv(std::ostream& os, const Branch& branch) {
  os << "lambda,u0,mu1\n";
  for (const auto& p : branch.points)
    os << fmt_double(p.lambda) << ',' << fmt_double(p.u0) << ',' << fmt_double(p.mu1) << '\n';
}

}  // namespace stablab
