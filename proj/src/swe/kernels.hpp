#pragma once

// Face-flux and cell-update kernels. Each kernel has a serial reference loop
// and an OpenMP loop built from the same per-element functions, so the two
// produce bit-identical results.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace floodda::swe::kernels {

struct Face {
  double mass = 0.0;
  double mom_lo = 0.0;  // normal momentum flux seen by the lower-index cell
  double mom_hi = 0.0;  // normal momentum flux seen by the higher-index cell
  double mom_t = 0.0;   // tangential momentum flux
};

struct Geometry {
  int nx = 0;
  int ny = 0;
  double dx = 1.0;
  double dy = 1.0;
  double g = 9.81;
  double h_dry = 1e-4;
  double nu_e = 0.0;
  std::span<const double> z_b;
  std::span<const double> ks;  // per cell
};

struct Fields {
  std::span<const double> h;
  std::span<const double> un;  // velocity normal to the faces being computed
  std::span<const double> ut;  // tangential velocity
};

/// Hydrostatic reconstruction + Rusanov flux across one face. `n` is the
/// normal velocity, `t` the tangential one.
inline Face rusanov_face(double hl, double nl, double tl, double zl, double hr, double nr, double tr,
                         double zr, double g, double nu_e, double spacing) {
  const double zf = std::max(zl, zr);
  const double hls = std::max(0.0, hl + zl - zf);
  const double hrs = std::max(0.0, hr + zr - zf);
  const double a = std::max(std::abs(nl) + std::sqrt(g * hls), std::abs(nr) + std::sqrt(g * hrs));
  const double ql = hls * nl;
  const double qr = hrs * nr;
  Face f;
  f.mass = 0.5 * (ql + qr) - 0.5 * a * (hrs - hls);
  const double mom = 0.5 * (ql * nl + 0.5 * g * hls * hls + qr * nr + 0.5 * g * hrs * hrs) - 0.5 * a * (qr - ql);
  f.mom_t = 0.5 * (ql * tl + qr * tr) - 0.5 * a * (hrs * tr - hls * tl);
  f.mom_lo = mom + 0.5 * g * (hl * hl - hls * hls);
  f.mom_hi = mom + 0.5 * g * (hr * hr - hrs * hrs);
  if (nu_e > 0.0 && hls > 0.0 && hrs > 0.0) {
    const double hf = 0.5 * (hls + hrs);
    const double visc_n = nu_e * hf * (nr - nl) / spacing;
    f.mom_lo -= visc_n;
    f.mom_hi -= visc_n;
    f.mom_t -= nu_e * hf * (tr - tl) / spacing;
  }
  return f;
}

/// Reflective wall: mirrored ghost state on the outside of the face.
inline Face wall_face_lo(double h, double n, double t, double z, double g) {
  // Wall on the low side of the cell: ghost is the lower-index neighbour.
  return rusanov_face(h, -n, t, z, h, n, t, z, g, 0.0, 1.0);
}
inline Face wall_face_hi(double h, double n, double t, double z, double g) {
  return rusanov_face(h, n, t, z, h, -n, t, z, g, 0.0, 1.0);
}

/// Face storage for x-faces: (nx + 1) * ny, index j * (nx + 1) + i is the west
/// face of cell (i, j). For y-faces: nx * (ny + 1), index j * nx + i is the
/// south face of cell (i, j).
struct Workspace {
  std::vector<Face> xfaces;
  std::vector<Face> yfaces;
  std::vector<double> h_new, u_new, v_new;

  void resize(int nx, int ny) {
    xfaces.resize(static_cast<std::size_t>(nx + 1) * ny);
    yfaces.resize(static_cast<std::size_t>(nx) * (ny + 1));
    const auto n = static_cast<std::size_t>(nx) * ny;
    h_new.resize(n);
    u_new.resize(n);
    v_new.resize(n);
  }
};

inline void x_face_at(const Geometry& g, std::span<const double> h, std::span<const double> u,
                      std::span<const double> v, int i, int j, Face& out) {
  const int nx = g.nx;
  if (i == 0) {
    const int c = j * nx;
    out = wall_face_lo(h[c], u[c], v[c], g.z_b[c], g.g);
  } else if (i == nx) {
    const int c = j * nx + nx - 1;
    out = wall_face_hi(h[c], u[c], v[c], g.z_b[c], g.g);
  } else {
    const int l = j * nx + i - 1;
    const int r = l + 1;
    out = rusanov_face(h[l], u[l], v[l], g.z_b[l], h[r], u[r], v[r], g.z_b[r], g.g, g.nu_e, g.dx);
  }
}

inline void y_face_at(const Geometry& g, std::span<const double> h, std::span<const double> u,
                      std::span<const double> v, int i, int j, Face& out) {
  const int nx = g.nx;
  if (j == 0) {
    const int c = i;
    out = wall_face_lo(h[c], v[c], u[c], g.z_b[c], g.g);
  } else if (j == g.ny) {
    const int c = (g.ny - 1) * nx + i;
    out = wall_face_hi(h[c], v[c], u[c], g.z_b[c], g.g);
  } else {
    const int s = (j - 1) * nx + i;
    const int n = s + nx;
    out = rusanov_face(h[s], v[s], u[s], g.z_b[s], h[n], v[n], u[n], g.z_b[n], g.g, g.nu_e, g.dy);
  }
}

/// Conservative update plus point-implicit Strickler friction for one cell.
inline double cell_speed(double h, double u, double v, double g, double h_dry) {
  if (h < h_dry) return 0.0;
  return std::sqrt(u * u + v * v) + std::sqrt(g * h);
}

/// Returns the wave speed of the updated cell.
inline double update_cell(const Geometry& g, std::span<const double> h, std::span<const double> u,
                          std::span<const double> v, const Workspace& ws, double dt, int i, int j,
                          double& h_out, double& u_out, double& v_out) {
  const int nx = g.nx;
  const int c = j * nx + i;
  const Face& w = ws.xfaces[static_cast<std::size_t>(j) * (nx + 1) + i];
  const Face& e = ws.xfaces[static_cast<std::size_t>(j) * (nx + 1) + i + 1];
  const Face& s = ws.yfaces[static_cast<std::size_t>(j) * nx + i];
  const Face& n = ws.yfaces[static_cast<std::size_t>(j + 1) * nx + i];
  const double rx = dt / g.dx;
  const double ry = dt / g.dy;

  double hn = h[c] - rx * (e.mass - w.mass) - ry * (n.mass - s.mass);
  double hu = h[c] * u[c] - rx * (e.mom_lo - w.mom_hi) - ry * (n.mom_t - s.mom_t);
  double hv = h[c] * v[c] - rx * (e.mom_t - w.mom_t) - ry * (n.mom_lo - s.mom_hi);
  if (!(hn > 0.0)) hn = hn == hn ? 0.0 : hn;  // keep NaN visible to the caller

  if (hn < g.h_dry) {
    h_out = hn;
    u_out = 0.0;
    v_out = 0.0;
    return 0.0;
  }
  const double speed = std::sqrt(hu * hu + hv * hv) / hn;
  const double ks = g.ks[c];
  const double h43 = hn * std::cbrt(hn);
  const double denom = 1.0 + dt * g.g * speed / (ks * ks * h43);
  h_out = hn;
  u_out = hu / (hn * denom);
  v_out = hv / (hn * denom);
  return cell_speed(hn, u_out, v_out, g.g, g.h_dry);
}

// Serial reference loops.
void interior_fluxes_serial(const Geometry& g, std::span<const double> h, std::span<const double> u,
                            std::span<const double> v, Workspace& ws);
/// Returns the maximum wave speed of the updated state.
double update_cells_serial(const Geometry& g, std::span<const double> h, std::span<const double> u,
                           std::span<const double> v, Workspace& ws, double dt);
double max_speed_serial(std::span<const double> h, std::span<const double> u, std::span<const double> v,
                        double g, double h_dry);

// OpenMP loops.
void interior_fluxes_parallel(const Geometry& g, std::span<const double> h, std::span<const double> u,
                              std::span<const double> v, Workspace& ws);
double update_cells_parallel(const Geometry& g, std::span<const double> h, std::span<const double> u,
                             std::span<const double> v, Workspace& ws, double dt);
double max_speed_parallel(std::span<const double> h, std::span<const double> u, std::span<const double> v,
                          double g, double h_dry);

}  // namespace floodda::swe::kernels
