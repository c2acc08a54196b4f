#include "kernels.hpp"

namespace floodda::swe::kernels {

void interior_fluxes_serial(const Geometry& g, std::span<const double> h, std::span<const double> u,
                            std::span<const double> v, Workspace& ws) {
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      x_face_at(g, h, u, v, i, j, ws.xfaces[static_cast<std::size_t>(j) * (g.nx + 1) + i]);
    }
  }
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      y_face_at(g, h, u, v, i, j, ws.yfaces[static_cast<std::size_t>(j) * g.nx + i]);
    }
  }
}

double update_cells_serial(const Geometry& g, std::span<const double> h, std::span<const double> u,
                           std::span<const double> v, Workspace& ws, double dt) {
  double smax = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int c = j * g.nx + i;
      smax = std::max(smax, update_cell(g, h, u, v, ws, dt, i, j, ws.h_new[c], ws.u_new[c], ws.v_new[c]));
    }
  }
  return smax;
}

double max_speed_serial(std::span<const double> h, std::span<const double> u, std::span<const double> v,
                        double g, double h_dry) {
  double smax = 0.0;
  for (std::size_t c = 0; c < h.size(); ++c) smax = std::max(smax, cell_speed(h[c], u[c], v[c], g, h_dry));
  return smax;
}

}  // namespace floodda::swe::kernels
