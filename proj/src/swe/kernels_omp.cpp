#include "kernels.hpp"

namespace floodda::swe::kernels {

void interior_fluxes_parallel(const Geometry& g, std::span<const double> h, std::span<const double> u,
                              std::span<const double> v, Workspace& ws) {
  const int nx = g.nx;
  const int ny = g.ny;
#pragma omp parallel
  {
#pragma omp for schedule(static) nowait
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i <= nx; ++i) {
        x_face_at(g, h, u, v, i, j, ws.xfaces[static_cast<std::size_t>(j) * (nx + 1) + i]);
      }
    }
#pragma omp for schedule(static)
    for (int j = 0; j <= ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        y_face_at(g, h, u, v, i, j, ws.yfaces[static_cast<std::size_t>(j) * nx + i]);
      }
    }
  }
}

double update_cells_parallel(const Geometry& g, std::span<const double> h, std::span<const double> u,
                             std::span<const double> v, Workspace& ws, double dt) {
  const int nx = g.nx;
  const int ny = g.ny;
  double smax = 0.0;
#pragma omp parallel for schedule(static) reduction(max : smax)
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int c = j * nx + i;
      smax = std::max(smax, update_cell(g, h, u, v, ws, dt, i, j, ws.h_new[c], ws.u_new[c], ws.v_new[c]));
    }
  }
  return smax;
}

double max_speed_parallel(std::span<const double> h, std::span<const double> u, std::span<const double> v,
                          double g, double h_dry) {
  double smax = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(h.size());
#pragma omp parallel for reduction(max : smax) schedule(static)
  for (std::ptrdiff_t c = 0; c < n; ++c) smax = std::max(smax, cell_speed(h[c], u[c], v[c], g, h_dry));
  return smax;
}

}  // namespace floodda::swe::kernels
