#include "stablab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <queue>
#include <stdexcept>

namespace stablab {

namespace {

struct Strides {
  int nx, ny, nz;
  std::ptrdiff_t s[3];
};

Strides strides_of(const ScalarField& f) {
  Strides st;
  st.nx = f.dims()[0];
  st.ny = f.dims()[1];
  st.nz = f.dims()[2];
  st.s[0] = 1;
  st.s[1] = st.nx;
  st.s[2] = static_cast<std::ptrdiff_t>(st.nx) * st.ny;
  return st;
}

inline bool in_box(const Strides& st, int i, int j, int k) {
  return i >= 0 && i < st.nx && j >= 0 && j < st.ny && k >= 0 && k < st.nz;
}

}  // namespace

GeometryFields geometry_fields(const ScalarField& field, double eps_reg) {
  const int dim = field.dim();
  const Strides st = strides_of(field);
  const std::size_t count = field.node_count();
  const auto& v = field.values();

  GeometryFields g;
  g.dim = dim;
  g.dims = field.dims();
  g.gradient.assign(count * dim, 0.0);
  g.gradnorm.assign(count, 0.0);
  g.normal.assign(count * dim, 0.0);
  g.mean_curv.assign(count, 0.0);
  g.shape_sq.assign(count, 0.0);
  g.grad_valid.assign(count, 0);
  g.regular.assign(count, 0);
  g.regular_interior.assign(count, 0);

  auto inside = [&](int i, int j, int k) {
    return in_box(st, i, j, k) && field.masked_in(i, j, k);
  };

  // Gradient: centered where possible, second-order one-sided at edges.
  for (int k = 0; k < st.nz; ++k)
    for (int j = 0; j < st.ny; ++j)
      for (int i = 0; i < st.nx; ++i) {
        if (!field.masked_in(i, j, k)) continue;
        const std::size_t id = field.index(i, j, k);
        bool ok = true;
        double grad[3] = {0, 0, 0};
        const int ijk[3] = {i, j, k};
        for (int a = 0; a < dim && ok; ++a) {
          const double h = field.spacing()[a];
          int ip[3] = {i, j, k}, im[3] = {i, j, k};
          ip[a] += 1;
          im[a] -= 1;
          const bool has_p = inside(ip[0], ip[1], ip[2]);
          const bool has_m = inside(im[0], im[1], im[2]);
          if (has_p && has_m) {
            grad[a] = (v[id + st.s[a]] - v[id - st.s[a]]) / (2.0 * h);
          } else if (has_p) {
            int ipp[3] = {i, j, k};
            ipp[a] += 2;
            if (!inside(ipp[0], ipp[1], ipp[2])) { ok = false; break; }
            grad[a] = (-3.0 * v[id] + 4.0 * v[id + st.s[a]] - v[id + 2 * st.s[a]]) / (2.0 * h);
          } else if (has_m) {
            int imm[3] = {i, j, k};
            imm[a] -= 2;
            if (!inside(imm[0], imm[1], imm[2])) { ok = false; break; }
            grad[a] = (3.0 * v[id] - 4.0 * v[id - st.s[a]] + v[id - 2 * st.s[a]]) / (2.0 * h);
          } else {
            ok = false;
          }
        }
        (void)ijk;
        if (!ok) continue;
        g.grad_valid[id] = 1;
        double norm2 = 0.0;
        for (int a = 0; a < dim; ++a) {
          g.gradient[id * dim + a] = grad[a];
          norm2 += grad[a] * grad[a];
        }
        g.gradnorm[id] = std::sqrt(norm2);
        g.max_gradnorm = std::max(g.max_gradnorm, g.gradnorm[id]);
      }

  g.eps_reg = eps_reg > 0 ? eps_reg : 1e-3 * g.max_gradnorm;

  for (std::size_t id = 0; id < count; ++id) {
    if (!g.grad_valid[id] || g.gradnorm[id] <= g.eps_reg) continue;
    g.regular[id] = 1;
    for (int a = 0; a < dim; ++a) g.normal[id * dim + a] = g.gradient[id * dim + a] / g.gradnorm[id];
  }

  // H = div nu and |A|^2 = sum_ij (delta_i nu^j)^2 where the full centered
  // nu-stencil lies in the regular set.
  for (int k = 0; k < st.nz; ++k)
    for (int j = 0; j < st.ny; ++j)
      for (int i = 0; i < st.nx; ++i) {
        const std::size_t id = field.index(i, j, k);
        if (!g.regular[id]) continue;
        bool ok = true;
        for (int a = 0; a < dim && ok; ++a) {
          int ip[3] = {i, j, k}, im[3] = {i, j, k};
          ip[a] += 1;
          im[a] -= 1;
          if (!in_box(st, ip[0], ip[1], ip[2]) || !in_box(st, im[0], im[1], im[2]) ||
              !g.regular[id + st.s[a]] || !g.regular[id - st.s[a]])
            ok = false;
        }
        if (!ok) continue;
        double J[3][3] = {{0}};  // J[a][b] = d_a nu^b
        for (int a = 0; a < dim; ++a) {
          const double h = field.spacing()[a];
          for (int b = 0; b < dim; ++b)
            J[a][b] = (g.normal[(id + st.s[a]) * dim + b] - g.normal[(id - st.s[a]) * dim + b]) /
                      (2.0 * h);
        }
        const double* nu = &g.normal[id * dim];
        double H = 0.0;
        for (int a = 0; a < dim; ++a) H += J[a][a];
        double asq = 0.0;
        for (int b = 0; b < dim; ++b) {
          double nJ = 0.0;  // nu^c J[c][b]
          for (int c = 0; c < dim; ++c) nJ += nu[c] * J[c][b];
          for (int a = 0; a < dim; ++a) {
            const double d = J[a][b] - nu[a] * nJ;
            asq += d * d;
          }
        }
        g.mean_curv[id] = H;
        g.shape_sq[id] = asq;
        g.regular_interior[id] = 1;
      }
  return g;
}

TangentialGradient tangential_gradient(const GeometryFields& geom, const ScalarField& phi) {
  if (phi.dim() != geom.dim || phi.dims() != geom.dims)
    throw std::invalid_argument("tangential_gradient: grid mismatch");
  const GeometryFields pg = geometry_fields(phi, -1.0);  // reuse the stencil machinery
  const int dim = geom.dim;
  const std::size_t count = phi.node_count();

  TangentialGradient out;
  out.dim = dim;
  out.delta.assign(count * dim, 0.0);
  out.tgrad_sq.assign(count, 0.0);
  out.valid.assign(count, 0);
  for (std::size_t id = 0; id < count; ++id) {
    if (!geom.regular[id] || !pg.grad_valid[id]) continue;
    const double* nu = &geom.normal[id * dim];
    const double* dphi = &pg.gradient[id * dim];
    double proj = 0.0;
    for (int a = 0; a < dim; ++a) proj += dphi[a] * nu[a];
    double ts = 0.0;
    for (int a = 0; a < dim; ++a) {
      const double d = dphi[a] - proj * nu[a];
      out.delta[id * dim + a] = d;
      ts += d * d;
    }
    out.tgrad_sq[id] = ts;
    out.valid[id] = 1;
  }
  return out;
}

// --- extraction -----------------------------------------------------------

namespace {

inline std::array<double, 2> lerp2(const std::array<double, 3>& pa, const std::array<double, 3>& pb,
                                   double da, double db) {
  const double s = da / (da - db);
  return {pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])};
}

inline std::array<double, 3> lerp3(const std::array<double, 3>& pa, const std::array<double, 3>& pb,
                                   double da, double db) {
  const double s = da / (da - db);
  return {pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1]), pa[2] + s * (pb[2] - pa[2])};
}

}  // namespace

std::vector<Segment2D> extract_level_2d(const ScalarField& field, double t) {
  if (field.dim() != 2) throw std::invalid_argument("extract_level_2d: 2D field required");
  std::vector<Segment2D> segs;
  const int nx = field.dims()[0], ny = field.dims()[1];
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      if (!(field.masked_in(i, j) && field.masked_in(i + 1, j) && field.masked_in(i, j + 1) &&
            field.masked_in(i + 1, j + 1)))
        continue;
      const std::array<double, 3> p[4] = {field.position(i, j), field.position(i + 1, j),
                                          field.position(i + 1, j + 1), field.position(i, j + 1)};
      const double d[4] = {field.at(i, j) - t, field.at(i + 1, j) - t, field.at(i + 1, j + 1) - t,
                           field.at(i, j + 1) - t};
      std::array<std::array<double, 2>, 4> pts;
      int m = 0;
      int edge_of[4];
      for (int e = 0; e < 4; ++e) {
        const int a = e, b = (e + 1) % 4;
        if ((d[a] < 0) != (d[b] < 0)) {
          edge_of[m] = e;
          pts[m++] = lerp2(p[a], p[b], d[a], d[b]);
        }
      }
      if (m == 2) {
        segs.push_back({pts[0], pts[1]});
      } else if (m == 4) {
        // saddle cell: pair crossings by the sign of the center average
        const double center = 0.25 * (d[0] + d[1] + d[2] + d[3]);
        const bool flip = (center < 0) == (d[0] < 0);
        (void)edge_of;
        if (flip) {
          segs.push_back({pts[0], pts[3]});
          segs.push_back({pts[1], pts[2]});
        } else {
          segs.push_back({pts[0], pts[1]});
          segs.push_back({pts[2], pts[3]});
        }
      }
    }
  return segs;
}

std::vector<Triangle3D> extract_level_3d(const ScalarField& field, double t) {
  if (field.dim() != 3) throw std::invalid_argument("extract_level_3d: 3D field required");
  std::vector<Triangle3D> tris;
  const int nx = field.dims()[0], ny = field.dims()[1], nz = field.dims()[2];
  // 6 tetrahedra per cube, all sharing the main diagonal c0-c7.
  static const int tets[6][4] = {{0, 1, 3, 7}, {0, 3, 2, 7}, {0, 2, 6, 7},
                                 {0, 6, 4, 7}, {0, 4, 5, 7}, {0, 5, 1, 7}};
  for (int k = 0; k + 1 < nz; ++k)
    for (int j = 0; j + 1 < ny; ++j)
      for (int i = 0; i + 1 < nx; ++i) {
        bool all_in = true;
        std::array<double, 3> p[8];
        double d[8];
        for (int c = 0; c < 8; ++c) {
          const int ci = i + (c & 1), cj = j + ((c >> 1) & 1), ck = k + ((c >> 2) & 1);
          if (!field.masked_in(ci, cj, ck)) {
            all_in = false;
            break;
          }
          p[c] = field.position(ci, cj, ck);
          d[c] = field.at(ci, cj, ck) - t;
        }
        if (!all_in) continue;
        for (const auto& tet : tets) {
          int neg[4], pos[4];
          int nn = 0, np = 0;
          for (int c = 0; c < 4; ++c) {
            if (d[tet[c]] < 0)
              neg[nn++] = tet[c];
            else
              pos[np++] = tet[c];
          }
          if (nn == 0 || nn == 4) continue;
          if (nn == 1 || nn == 3) {
            const int a = (nn == 1) ? neg[0] : pos[0];
            const int* others = (nn == 1) ? pos : neg;
            Triangle3D tr{lerp3(p[a], p[others[0]], d[a], d[others[0]]),
                          lerp3(p[a], p[others[1]], d[a], d[others[1]]),
                          lerp3(p[a], p[others[2]], d[a], d[others[2]])};
            tris.push_back(tr);
          } else {
            const auto q0 = lerp3(p[neg[0]], p[pos[0]], d[neg[0]], d[pos[0]]);
            const auto q1 = lerp3(p[neg[0]], p[pos[1]], d[neg[0]], d[pos[1]]);
            const auto q2 = lerp3(p[neg[1]], p[pos[1]], d[neg[1]], d[pos[1]]);
            const auto q3 = lerp3(p[neg[1]], p[pos[0]], d[neg[1]], d[pos[0]]);
            tris.push_back({q0, q1, q2});
            tris.push_back({q0, q2, q3});
          }
        }
      }
  return tris;
}

namespace {

double interp_field(const ScalarField& f, std::array<double, 3> x) {
  const int dim = f.dim();
  double loc[3] = {0, 0, 0};
  int base[3] = {0, 0, 0};
  for (int a = 0; a < dim; ++a) {
    const double s = (x[a] - f.origin()[a]) / f.spacing()[a];
    int i = static_cast<int>(std::floor(s));
    i = std::clamp(i, 0, f.dims()[a] - 2);
    base[a] = i;
    loc[a] = std::clamp(s - i, 0.0, 1.0);
  }
  if (dim == 2) {
    const double fx = loc[0], fy = loc[1];
    return f.at(base[0], base[1]) * (1 - fx) * (1 - fy) +
           f.at(base[0] + 1, base[1]) * fx * (1 - fy) +
           f.at(base[0], base[1] + 1) * (1 - fx) * fy +
           f.at(base[0] + 1, base[1] + 1) * fx * fy;
  }
  const double fx = loc[0], fy = loc[1], fz = loc[2];
  double acc = 0.0;
  for (int c = 0; c < 8; ++c) {
    const double w = ((c & 1) ? fx : 1 - fx) * (((c >> 1) & 1) ? fy : 1 - fy) *
                     (((c >> 2) & 1) ? fz : 1 - fz);
    acc += w * f.at(base[0] + (c & 1), base[1] + ((c >> 1) & 1), base[2] + ((c >> 2) & 1));
  }
  return acc;
}

double tri_area(const Triangle3D& t) {
  const double u[3] = {t.b[0] - t.a[0], t.b[1] - t.a[1], t.b[2] - t.a[2]};
  const double v[3] = {t.c[0] - t.a[0], t.c[1] - t.a[1], t.c[2] - t.a[2]};
  const double cx = u[1] * v[2] - u[2] * v[1];
  const double cy = u[2] * v[0] - u[0] * v[2];
  const double cz = u[0] * v[1] - u[1] * v[0];
  return 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
}

}  // namespace

double level_integral(const ScalarField& field, const ScalarField& g, double t) {
  if (field.dim() == 2) {
    double acc = 0.0;
    for (const auto& s : extract_level_2d(field, t)) {
      const double len = std::hypot(s.b[0] - s.a[0], s.b[1] - s.a[1]);
      const double ga = interp_field(g, {s.a[0], s.a[1], 0.0});
      const double gb = interp_field(g, {s.b[0], s.b[1], 0.0});
      acc += len * 0.5 * (ga + gb);
    }
    return acc;
  }
  double acc = 0.0;
  for (const auto& tr : extract_level_3d(field, t)) {
    const double area = tri_area(tr);
    const double gv =
        (interp_field(g, tr.a) + interp_field(g, tr.b) + interp_field(g, tr.c)) / 3.0;
    acc += area * gv;
  }
  return acc;
}

void write_segments_csv(std::ostream& os, const std::vector<Segment2D>& segments) {
  os << "x1,y1,x2,y2\n";
  for (const auto& s : segments)
    os << fmt_double(s.a[0]) << ',' << fmt_double(s.a[1]) << ',' << fmt_double(s.b[0]) << ','
       << fmt_double(s.b[1]) << '\n';
}

InequalityReport coarea_check(const ScalarField& field, const ScalarField& g, int levels) {
  if (levels < 2) throw std::invalid_argument("coarea_check: levels >= 2 required");
  const GeometryFields geom = geometry_fields(field);

  double volume_side = 0.0;
  double umin = 1e300, umax = -1e300;
  const auto& v = field.values();
  for (std::size_t id = 0; id < field.node_count(); ++id) {
    if (!field.masked_in(id)) continue;
    umin = std::min(umin, v[id]);
    umax = std::max(umax, v[id]);
    if (geom.grad_valid[id]) volume_side += geom.gradnorm[id] * g.values()[id];
  }
  volume_side *= field.cell_volume();
  if (!(umax > umin)) throw std::invalid_argument("coarea_check: field has no range on the mask");

  const double dt = (umax - umin) / levels;
  double level_side = 0.0;
  bool any = false;
  for (int k = 0; k < levels; ++k) {
    const double t = umin + (k + 0.5) * dt;
    const double li = level_integral(field, g, t);
    if (li != 0.0) any = true;
    level_side += dt * li;
  }
  if (!any) throw std::runtime_error("coarea_check: every level slice came back empty");

  InequalityReport rep;
  rep.name = "coarea";
  rep.lhs = volume_side;
  rep.rhs = level_side;
  rep.slack = level_side - volume_side;
  const double scale = std::max(std::abs(volume_side), std::abs(level_side));
  rep.eps_disc = scale > 0 ? std::abs(rep.slack) / scale : 0.0;  // relative gap
  rep.params["levels"] = levels;
  rep.params["h"] = field.max_spacing();
  rep.params["relative_gap"] = rep.eps_disc;
  return rep;
}

namespace {

// Mixed boundary-hypothesis check: boundary nodes where |phi psi| is at
// vanishing level are exempt; every connected component of the remaining
// boundary must have u locally constant (diameter <= 6 h max|grad u|).
void check_ibp_boundary(const ScalarField& field, const std::vector<double>& phipsi,
                        double max_gradnorm) {
  const Strides st = strides_of(field);
  const auto& u = field.values();

  double interior_max = 0.0;
  for (std::size_t id = 0; id < phipsi.size(); ++id)
    if (field.masked_in(id)) interior_max = std::max(interior_max, std::abs(phipsi[id]));
  const double phi_tol = 1e-6 * (interior_max > 0 ? interior_max : 1.0);

  std::vector<std::size_t> boundary;
  std::vector<std::uint8_t> is_boundary(u.size(), 0);
  for (int k = 0; k < st.nz; ++k)
    for (int j = 0; j < st.ny; ++j)
      for (int i = 0; i < st.nx; ++i) {
        const std::size_t id = field.index(i, j, k);
        if (!field.masked_in(id)) continue;
        bool bd = false;
        for (int a = 0; a < field.dim() && !bd; ++a) {
          int ip[3] = {i, j, k}, im[3] = {i, j, k};
          ip[a] += 1;
          im[a] -= 1;
          if (!in_box(st, ip[0], ip[1], ip[2]) || !field.masked_in(field.index(ip[0], ip[1], ip[2])))
            bd = true;
          else if (!in_box(st, im[0], im[1], im[2]) ||
                   !field.masked_in(field.index(im[0], im[1], im[2])))
            bd = true;
        }
        if (bd && std::abs(phipsi[id]) > phi_tol) {
          is_boundary[id] = 1;
          boundary.push_back(id);
        }
      }
  if (boundary.empty()) return;  // phi psi vanishes on the whole boundary

  const double u_tol = 6.0 * field.max_spacing() * (max_gradnorm > 0 ? max_gradnorm : 1.0);

  // Flood-fill components over the non-exempt boundary (Chebyshev adjacency).
  std::vector<std::uint8_t> seen(u.size(), 0);
  for (std::size_t seed : boundary) {
    if (seen[seed]) continue;
    double lo = u[seed], hi = u[seed];
    std::queue<std::size_t> q;
    q.push(seed);
    seen[seed] = 1;
    while (!q.empty()) {
      const std::size_t id = q.front();
      q.pop();
      lo = std::min(lo, u[id]);
      hi = std::max(hi, u[id]);
      const int k = static_cast<int>(id / st.s[2]);
      const int j = static_cast<int>((id - k * st.s[2]) / st.s[1]);
      const int i = static_cast<int>(id % st.s[1]);
      const int kr = field.dim() == 3 ? 1 : 0;
      for (int dk = -kr; dk <= kr; ++dk)
        for (int dj = -1; dj <= 1; ++dj)
          for (int di = -1; di <= 1; ++di) {
            if (!di && !dj && !dk) continue;
            if (!in_box(st, i + di, j + dj, k + dk)) continue;
            const std::size_t nb = field.index(i + di, j + dj, k + dk);
            if (is_boundary[nb] && !seen[nb]) {
              seen[nb] = 1;
              q.push(nb);
            }
          }
    }
    if (hi - lo > u_tol)
      throw std::invalid_argument(
          "ibp_defect: neither boundary hypothesis holds (phi psi nonzero on a boundary piece "
          "that is not a level set of u)");
  }
}

}  // namespace

InequalityReport ibp_defect(const ScalarField& field, const ScalarField& phi,
                            const ScalarField& psi, int axis) {
  if (phi.dim() != field.dim() || phi.dims() != field.dims() || psi.dims() != field.dims())
    throw std::invalid_argument("ibp_defect: grid mismatch");
  if (axis < 0 || axis >= field.dim()) throw std::invalid_argument("ibp_defect: bad axis");

  const GeometryFields geom = geometry_fields(field);
  const TangentialGradient dphi = tangential_gradient(geom, phi);
  const TangentialGradient dpsi = tangential_gradient(geom, psi);

  std::vector<double> phipsi(field.node_count());
  for (std::size_t id = 0; id < phipsi.size(); ++id)
    phipsi[id] = phi.values()[id] * psi.values()[id];
  check_ibp_boundary(field, phipsi, geom.max_gradnorm);

  const double vol = field.cell_volume();
  double int_a = 0.0, int_b = 0.0, int_c = 0.0;
  std::size_t used = 0;
  for (std::size_t id = 0; id < field.node_count(); ++id) {
    if (!field.masked_in(id)) continue;
    if (!geom.regular_interior[id] || !dphi.valid[id] || !dpsi.valid[id]) continue;
    const double w = geom.gradnorm[id];
    int_a += w * dphi.delta[id * geom.dim + axis] * psi.values()[id];
    int_b -= w * phi.values()[id] * dpsi.delta[id * geom.dim + axis];
    int_c += w * geom.mean_curv[id] * geom.normal[id * geom.dim + axis] * phi.values()[id] *
             psi.values()[id];
    ++used;
  }
  int_a *= vol;
  int_b *= vol;
  int_c *= vol;

  InequalityReport rep;
  rep.name = "foliation_ibp";
  rep.lhs = int_a;
  rep.rhs = int_b + int_c;
  rep.slack = rep.rhs - rep.lhs;
  rep.eps_disc = std::abs(rep.slack);
  rep.params["axis"] = axis;
  rep.params["h"] = field.max_spacing();
  rep.params["int_delta_phi_psi"] = int_a;
  rep.params["int_phi_delta_psi"] = -int_b;
  rep.params["int_H_nu_phi_psi"] = int_c;
  rep.params["nodes"] = static_cast<double>(used);
  return rep;
}

}  // namespace stablab
