#include "stablab/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stablab/quadrature.hpp"

namespace stablab {

namespace {

void require_alpha(double alpha, int n) {
  if (!(alpha >= 0.0 && alpha < n - 1))
    throw std::invalid_argument("hardy: alpha must lie in [0, n-1)");
}

// max |w| over mask-boundary nodes vs. tolerance scaled by h |grad w|;
// a sampled function that vanishes on the continuum boundary sits at
// O(h |grad w|) on the discrete one.
bool vanishes_on_boundary(const ScalarField& f) {
  const int dim = f.dim();
  const auto& v = f.values();
  double interior_max = 0.0, boundary_max = 0.0, grad_scale = 0.0;
  const auto dims = f.dims();
  const double h = f.max_spacing();
  for (int k = 0; k < dims[2]; ++k)
    for (int j = 0; j < dims[1]; ++j)
      for (int i = 0; i < dims[0]; ++i) {
        if (!f.masked_in(i, j, k)) continue;
        const std::size_t id = f.index(i, j, k);
        bool bd = false;
        const int c[3] = {i, j, k};
        for (int a = 0; a < dim && !bd; ++a) {
          for (int s = -1; s <= 1 && !bd; s += 2) {
            int nb[3] = {c[0], c[1], c[2]};
            nb[a] += s;
            if (nb[a] < 0 || nb[a] >= dims[a] || !f.masked_in(nb[0], nb[1], nb[2])) bd = true;
          }
        }
        if (bd)
          boundary_max = std::max(boundary_max, std::abs(v[id]));
        else
          interior_max = std::max(interior_max, std::abs(v[id]));
        const int c2[3] = {i, j, k};
        for (int a = 0; a < dim; ++a) {
          int nb[3] = {c2[0], c2[1], c2[2]};
          nb[a] += 1;
          if (nb[a] < dims[a] && f.masked_in(nb[0], nb[1], nb[2]))
            grad_scale = std::max(grad_scale,
                                  std::abs(v[f.index(nb[0], nb[1], nb[2])] - v[id]) / h);
        }
      }
  const double tol = std::max(1e-6 * interior_max, 3.0 * h * grad_scale);
  return boundary_max <= tol;
}

}  // namespace

HardyPair foliated_hardy(const ScalarField& u, const ScalarField& phi, double alpha,
                         std::array<double, 3> y) {
  const int n = u.dim();
  require_alpha(alpha, n);
  if (phi.dims() != u.dims()) throw std::invalid_argument("foliated_hardy: grid mismatch");
  if (!vanishes_on_boundary(u) && !vanishes_on_boundary(phi))
    throw std::invalid_argument("foliated_hardy: neither u nor phi vanishes on the boundary");

  const GeometryFields geom = geometry_fields(u);
  const TangentialGradient tg = tangential_gradient(geom, phi);
  const double h = u.max_spacing();
  const double r_exc = 2.0 * h;
  const double vol = u.cell_volume();
  const auto dims = u.dims();

  double I1 = 0.0, I2 = 0.0, J = 0.0;
  double near_max_main = 0.0, near_max_rhs = 0.0;
  double skipped_mass = 0.0;
  for (int k = 0; k < dims[2]; ++k)
    for (int j = 0; j < dims[1]; ++j)
      for (int i = 0; i < dims[0]; ++i) {
        if (!u.masked_in(i, j, k)) continue;
        const std::size_t id = u.index(i, j, k);
        if (!geom.grad_valid[id]) continue;
        const auto p = u.position(i, j, k);
        double r2 = 0.0;
        for (int a = 0; a < n; ++a) r2 += (p[a] - y[a]) * (p[a] - y[a]);
        const double r = std::sqrt(r2);
        const double gn = geom.gradnorm[id];
        const double ph = phi.values()[id];
        if (r < r_exc) {
          near_max_main = std::max(near_max_main, gn * ph * ph);
          near_max_rhs = std::max(near_max_rhs, gn * ph * ph * geom.max_gradnorm);
          continue;
        }
        const double w_a = std::pow(r, -alpha);
        I1 += gn * ph * ph * w_a;
        if (geom.regular[id]) {
          double ur = 0.0;
          for (int a = 0; a < n; ++a) ur += geom.gradient[id * n + a] * (p[a] - y[a]) / r;
          I2 += (ur * ur / gn) * ph * ph * w_a;
        }
        if (geom.regular_interior[id] && tg.valid[id]) {
          const double hc = geom.mean_curv[id];
          J += gn * (4.0 * tg.tgrad_sq[id] + hc * hc * ph * ph) * w_a * r2;
        } else if (geom.regular[id]) {
          skipped_mass += gn * ph * ph * w_a * r2;
        }
      }
  I1 *= vol;
  I2 *= vol;
  J *= vol;
  skipped_mass *= vol;

  // Excision remainders: the integrands are O(r^{-alpha}) and O(r^{2-alpha})
  // near y, both integrable since alpha < n-1.
  const double rem_main =
      near_max_main * sphere_area(n) * std::pow(r_exc, n - alpha) / (n - alpha);
  const double rem_rhs =
      near_max_rhs * sphere_area(n) * std::pow(r_exc, n + 2 - alpha) / (n + 2 - alpha);

  HardyPair pair;
  HardyReport& fol = pair.foliated;
  fol.variant = "foliated";
  fol.n = n;
  fol.alpha = alpha;
  fol.y = y;
  fol.lhs_main = (n - 1 - alpha) * I1;
  fol.lhs_radialterm = alpha * I2;
  fol.rhs = std::sqrt(I1) * std::sqrt(J);
  fol.slack = fol.rhs - fol.lhs_main - fol.lhs_radialterm;
  fol.eps_disc = (n - 1) * rem_main + rem_rhs + skipped_mass +
                 h * (std::abs(fol.lhs_main) + std::abs(fol.lhs_radialterm) + std::abs(fol.rhs));
  fol.params["h"] = h;
  fol.params["I"] = I1;
  fol.params["I_r"] = I2;
  fol.params["J"] = J;
  fol.params["excision_radius"] = r_exc;
  fol.params["skipped_mass"] = skipped_mass;

  HardyReport& man = pair.manifold;
  man = fol;
  man.variant = "manifold";
  man.lhs_main = (n - 1 - alpha) * (n - 1 - alpha) * I1;
  man.lhs_radialterm = 0.0;
  man.rhs = J;
  man.slack = man.rhs - man.lhs_main;
  man.eps_disc = fol.eps_disc * (1.0 + std::abs(n - 1 - alpha));
  return pair;
}

HardyPair foliated_hardy(const RadialSolution& sol, const std::function<double(double)>& phi,
                         double alpha) {
  const int n = sol.n;
  require_alpha(alpha, n);
  const double h = sol.h();
  const double r_exc = std::max(2.0 * h, sol.r.front());
  const double omega = sphere_area(n);

  // I = ∫ |u'| phi^2 r^{n-1-alpha} dr; for radial data I_r = I and
  // J = (n-1)^2 I by H = (n-1)/r, grad_T phi = 0.
  std::vector<double> rs, f;
  double first_val = 0.0, first_r = 0.0;
  for (std::size_t i = 0; i < sol.size(); ++i) {
    const double r = sol.r[i];
    if (r < r_exc) continue;
    const double ph = phi(r);
    const double val = std::abs(sol.uprime[i]) * ph * ph * std::pow(r, n - 1 - alpha);
    if (rs.empty()) {
      first_val = val;
      first_r = r;
    }
    rs.push_back(r);
    f.push_back(val);
  }
  if (rs.size() < 3) throw std::invalid_argument("foliated_hardy: too few nodes past excision");
  const double I = omega * trapz(rs, f);
  const double J = (n - 1.0) * (n - 1.0) * I;
  // local power-law remainder for the excised segment
  const double rem = omega * first_val * first_r / (n - alpha);

  HardyPair pair;
  HardyReport& fol = pair.foliated;
  fol.variant = "foliated";
  fol.n = n;
  fol.alpha = alpha;
  fol.lhs_main = (n - 1 - alpha) * I;
  fol.lhs_radialterm = alpha * I;
  fol.rhs = std::sqrt(I) * std::sqrt(J);
  fol.slack = fol.rhs - fol.lhs_main - fol.lhs_radialterm;
  fol.eps_disc = (n - 1) * rem + h * h * (n - 1) * (1.0 + I);
  fol.params["h"] = h;
  fol.params["I"] = I;
  fol.params["J"] = J;
  fol.params["excision_radius"] = r_exc;

  HardyReport& man = pair.manifold;
  man = fol;
  man.variant = "manifold";
  man.lhs_main = (n - 1 - alpha) * (n - 1 - alpha) * I;
  man.lhs_radialterm = 0.0;
  man.rhs = J;
  man.slack = man.rhs - man.lhs_main;
  return pair;
}

HardyReport radial_hardy(const RadialSolution& sol, const std::function<double(double)>& g,
                         double alpha, const std::function<double(double)>& zonal,
                         int theta_points) {
  const int n = sol.n;
  require_alpha(alpha, n);
  const double h = sol.h();
  const double r_exc = std::max(2.0 * h, sol.r.front());

  // radial factor nodes past the excision
  std::vector<double> rs, base;  // base = |u_r| g^2 r^{n-1-alpha}
  for (std::size_t i = 0; i < sol.size(); ++i) {
    const double r = sol.r[i];
    if (r < r_exc) continue;
    const double gv = g(r);
    rs.push_back(r);
    base.push_back(std::abs(sol.uprime[i]) * gv * gv * std::pow(r, n - 1 - alpha));
  }
  if (rs.size() < 3) throw std::invalid_argument("radial_hardy: too few nodes past excision");

  HardyReport rep;
  rep.variant = "radial";
  rep.n = n;
  rep.alpha = alpha;
  rep.params["h"] = h;
  rep.params["excision_radius"] = r_exc;

  if (!zonal) {
    // Radial phi: H^2 r^2 = (n-1)^2 and grad_T phi = 0 make both integrands
    // identical node by node.
    const double S = sphere_area(n) * trapz(rs, base);
    rep.lhs_main = (n - 1.0) * (n - 1.0) * S;
    rep.rhs = rep.lhs_main;
    rep.slack = 0.0;
    rep.eps_disc = 1e-14 * std::abs(rep.rhs);
    rep.params["radial_phi"] = 1.0;
    return rep;
  }

  // Product grid (r, theta); phi = g(r) Y(theta), dV = omega_{n-2}
  // r^{n-1} sin^{n-2}(theta) dr dtheta, |grad_T phi|^2 = g^2 Y'(theta)^2/r^2.
  const int M = theta_points;
  const double dth = M_PI / M;
  std::vector<double> Y(M + 1), Yp(M + 1), sinw(M + 1);
  for (int j = 0; j <= M; ++j) {
    const double th = j * dth;
    Y[j] = zonal(th);
    sinw[j] = std::pow(std::sin(th), n - 2);
  }
  for (int j = 0; j <= M; ++j) {
    if (j == 0)
      Yp[j] = (-3.0 * Y[0] + 4.0 * Y[1] - Y[2]) / (2.0 * dth);
    else if (j == M)
      Yp[j] = (3.0 * Y[M] - 4.0 * Y[M - 1] + Y[M - 2]) / (2.0 * dth);
    else
      Yp[j] = (Y[j + 1] - Y[j - 1]) / (2.0 * dth);
  }
  double ang_sq = 0.0, ang_dsq = 0.0;  // ∫ Y^2 sin^{n-2}, ∫ Y'^2 sin^{n-2}
  for (int j = 0; j <= M; ++j) {
    const double w = (j == 0 || j == M) ? 0.5 : 1.0;
    ang_sq += w * Y[j] * Y[j] * sinw[j];
    ang_dsq += w * Yp[j] * Yp[j] * sinw[j];
  }
  ang_sq *= dth;
  ang_dsq *= dth;

  const double omega = sphere_area(n - 1);
  const double R = trapz(rs, base);
  rep.lhs_main = (n - 1.0) * (n - 1.0) * omega * ang_sq * R;
  rep.rhs = omega * (4.0 * ang_dsq + (n - 1.0) * (n - 1.0) * ang_sq) * R;
  rep.slack = rep.rhs - rep.lhs_main;
  rep.eps_disc = (dth * dth + h * h) * (std::abs(rep.lhs_main) + std::abs(rep.rhs)) +
                 omega * base.front() * rs.front() * (4.0 * ang_dsq + (n - 1.0) * (n - 1.0) * ang_sq) /
                     (n - alpha);
  rep.params["theta_points"] = M;
  return rep;
}

SurfaceHardySet surface_hardy(const SurfaceSample& m) {
  const int n = m.ambient_dim;
  if (n < 3) throw std::invalid_argument("surface_hardy: ambient dimension >= 3 required");
  const std::size_t count = m.count();
  if (count == 0) throw std::invalid_argument("surface_hardy: empty sample");

  double S2 = 0.0;    // ∫ phi^2 / |x|^2
  double Sd = 0.0;    // ∫ |grad_T phi|^2
  double SH2 = 0.0;   // ∫ H^2 phi^2
  double SHx = 0.0;   // ∫ (x/|x| . nu)^2 phi^2 / |x|^2
  double ScH = 0.0;   // ∫ (|H| / |x|) phi^2
  for (std::size_t s = 0; s < count; ++s) {
    double r2 = 0.0, xdotnu = 0.0;
    for (int a = 0; a < n; ++a) {
      const double xa = m.points[s * n + a];
      r2 += xa * xa;
      xdotnu += xa * m.normals[s * n + a];
    }
    if (r2 <= 0.0)
      throw std::invalid_argument("surface_hardy: surface passes through the origin");
    const double w = m.weight[s];
    const double p2 = m.phi[s] * m.phi[s];
    const double H = m.mean_curv[s];
    S2 += w * p2 / r2;
    Sd += w * m.tgrad_sq[s];
    SH2 += w * H * H * p2;
    SHx += w * (xdotnu * xdotnu / r2) * p2 / r2;
    ScH += w * (std::abs(H) / std::sqrt(r2)) * p2;
  }

  const double c = n - 3;  // (n-1) - 2

  SurfaceHardySet set;
  HardyReport& p2r = set.p2;
  p2r.variant = "surface_p2";
  p2r.n = n;
  p2r.alpha = 2.0;
  p2r.lhs_main = c * S2;
  p2r.lhs_radialterm = 2.0 * SHx;
  p2r.rhs = std::sqrt(S2) * std::sqrt(4.0 * Sd + SH2);
  p2r.slack = p2r.rhs - p2r.lhs_main - p2r.lhs_radialterm;
  p2r.params["S2"] = S2;
  p2r.params["samples"] = static_cast<double>(count);

  HardyReport& sq = set.squared;
  sq.variant = "surface";
  sq.n = n;
  sq.alpha = 2.0;
  sq.lhs_main = 0.25 * c * c * S2;
  sq.rhs = Sd + 0.25 * SH2;
  sq.slack = sq.rhs - sq.lhs_main;
  sq.params["S2"] = S2;

  HardyReport& car = set.carron;
  car.variant = "carron";
  car.n = n;
  car.alpha = 2.0;
  if (n - 1 >= 3) {
    car.lhs_main = 0.25 * c * c * S2;
    car.rhs = Sd + 0.5 * c * ScH;
    car.slack = car.rhs - car.lhs_main;
    set.rhs_ratio_new_vs_carron = car.rhs != 0.0 ? sq.rhs / car.rhs : 0.0;
  } else {
    car.params["not_applicable"] = 1.0;  // requires n-1 >= 3
  }
  return set;
}

SurfaceSample sphere_surface_exact(int n, double rho) {
  if (n < 3 || !(rho > 0)) throw std::invalid_argument("sphere_surface_exact: bad parameters");
  SurfaceSample m;
  m.ambient_dim = n;
  m.points.assign(n, 0.0);
  m.points[0] = rho;
  m.normals.assign(n, 0.0);
  m.normals[0] = 1.0;
  m.mean_curv = {(n - 1.0) / rho};
  m.weight = {sphere_area(n) * std::pow(rho, n - 1)};
  m.phi = {1.0};
  m.tgrad_sq = {0.0};
  return m;
}

namespace {

using V3 = std::array<double, 3>;

V3 scale_to(const V3& v, double rho) {
  const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  return {v[0] * rho / r, v[1] * rho / r, v[2] * rho / r};
}

void subdivide(std::vector<std::array<V3, 3>>& tris, double rho, int levels) {
  for (int l = 0; l < levels; ++l) {
    std::vector<std::array<V3, 3>> next;
    next.reserve(tris.size() * 4);
    for (const auto& t : tris) {
      const V3 ab = scale_to({0.5 * (t[0][0] + t[1][0]), 0.5 * (t[0][1] + t[1][1]),
                              0.5 * (t[0][2] + t[1][2])}, rho);
      const V3 bc = scale_to({0.5 * (t[1][0] + t[2][0]), 0.5 * (t[1][1] + t[2][1]),
                              0.5 * (t[1][2] + t[2][2])}, rho);
      const V3 ca = scale_to({0.5 * (t[2][0] + t[0][0]), 0.5 * (t[2][1] + t[0][1]),
                              0.5 * (t[2][2] + t[0][2])}, rho);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    tris = std::move(next);
  }
}

}  // namespace

SurfaceSample icosphere_surface(
    double rho, int subdivisions, const std::function<double(std::array<double, 3>)>& phi,
    const std::function<double(std::array<double, 3>, std::array<double, 3>)>& tgrad_sq) {
  if (!(rho > 0) || subdivisions < 0)
    throw std::invalid_argument("icosphere_surface: bad parameters");
  const double tau = 0.5 * (1.0 + std::sqrt(5.0));
  std::vector<V3> v = {{-1, tau, 0}, {1, tau, 0},   {-1, -tau, 0}, {1, -tau, 0},
                       {0, -1, tau}, {0, 1, tau},   {0, -1, -tau}, {0, 1, -tau},
                       {tau, 0, -1}, {tau, 0, 1},   {-tau, 0, -1}, {-tau, 0, 1}};
  for (auto& p : v) p = scale_to(p, rho);
  static const int faces[20][3] = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                   {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                   {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                   {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  std::vector<std::array<V3, 3>> tris;
  for (const auto& f : faces) tris.push_back({v[f[0]], v[f[1]], v[f[2]]});
  subdivide(tris, rho, subdivisions);

  SurfaceSample m;
  m.ambient_dim = 3;
  for (const auto& t : tris) {
    const V3 u = {t[1][0] - t[0][0], t[1][1] - t[0][1], t[1][2] - t[0][2]};
    const V3 w = {t[2][0] - t[0][0], t[2][1] - t[0][1], t[2][2] - t[0][2]};
    V3 cr = {u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]};
    const double norm = std::sqrt(cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2]);
    const double area = 0.5 * norm;
    V3 c = {(t[0][0] + t[1][0] + t[2][0]) / 3.0, (t[0][1] + t[1][1] + t[2][1]) / 3.0,
            (t[0][2] + t[1][2] + t[2][2]) / 3.0};
    for (double& x : cr) x /= norm;
    if (cr[0] * c[0] + cr[1] * c[1] + cr[2] * c[2] < 0)
      for (double& x : cr) x = -x;
    m.points.insert(m.points.end(), c.begin(), c.end());
    m.normals.insert(m.normals.end(), cr.begin(), cr.end());
    m.mean_curv.push_back(2.0 / rho);
    m.weight.push_back(area);
    m.phi.push_back(phi ? phi(c) : 1.0);
    m.tgrad_sq.push_back(tgrad_sq ? tgrad_sq(c, cr) : 0.0);
  }
  return m;
}

SurfaceSample flat_patch_radial(int ambient_n, double radius, int shells,
                                const std::function<double(double)>& g,
                                const std::function<double(double)>& gprime) {
  if (ambient_n < 3 || shells < 4 || !(radius > 0))
    throw std::invalid_argument("flat_patch_radial: bad parameters");
  SurfaceSample m;
  m.ambient_dim = ambient_n;
  const int d = ambient_n - 1;  // dimension of the hyperplane
  const double dr = radius / shells;
  for (int k = 0; k < shells; ++k) {
    const double rho = (k + 0.5) * dr;
    std::vector<double> pt(ambient_n, 0.0), nu(ambient_n, 0.0);
    pt[0] = rho;
    nu[ambient_n - 1] = 1.0;
    m.points.insert(m.points.end(), pt.begin(), pt.end());
    m.normals.insert(m.normals.end(), nu.begin(), nu.end());
    m.mean_curv.push_back(0.0);
    m.weight.push_back(sphere_area(d) * std::pow(rho, d - 1) * dr);
    m.phi.push_back(g(rho));
    const double gp = gprime(rho);
    m.tgrad_sq.push_back(gp * gp);
  }
  return m;
}

SurfaceSample surface_from_triangles(
    const std::vector<Triangle3D>& tris,
    const std::function<double(std::array<double, 3>)>& mean_curv,
    const std::function<double(std::array<double, 3>)>& phi,
    const std::function<double(std::array<double, 3>)>& tgrad_sq) {
  SurfaceSample m;
  m.ambient_dim = 3;
  for (const auto& t : tris) {
    const V3 u = {t.b[0] - t.a[0], t.b[1] - t.a[1], t.b[2] - t.a[2]};
    const V3 w = {t.c[0] - t.a[0], t.c[1] - t.a[1], t.c[2] - t.a[2]};
    V3 cr = {u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]};
    const double norm = std::sqrt(cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2]);
    if (norm == 0.0) continue;  // degenerate sliver from the extraction
    const double area = 0.5 * norm;
    const V3 c = {(t.a[0] + t.b[0] + t.c[0]) / 3.0, (t.a[1] + t.b[1] + t.c[1]) / 3.0,
                  (t.a[2] + t.b[2] + t.c[2]) / 3.0};
    for (double& x : cr) x /= norm;
    if (cr[0] * c[0] + cr[1] * c[1] + cr[2] * c[2] < 0)
      for (double& x : cr) x = -x;
    m.points.insert(m.points.end(), c.begin(), c.end());
    m.normals.insert(m.normals.end(), cr.begin(), cr.end());
    m.mean_curv.push_back(mean_curv(c));
    m.weight.push_back(area);
    m.phi.push_back(phi(c));
    m.tgrad_sq.push_back(tgrad_sq(c));
  }
  return m;
}

}  // namespace stablab
