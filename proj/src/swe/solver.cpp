#include "floodda/swe/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "floodda/core/error.hpp"
#include "kernels.hpp"

namespace floodda::swe {

FrictionAccel friction_source(double h, double u, double v, double ks, const PhysicalParams& params) {
  if (h < params.h_dry) return {};
  const double speed = std::sqrt(u * u + v * v);
  const double coef = -params.g / (ks * ks) * speed / (h * std::cbrt(h));
  return {coef * u, coef * v};
}

struct Solver::Impl {
  const ScenarioGrid& grid;
  PhysicalParams params;
  Execution exec;
  std::vector<double> ks_cell;
  kernels::Workspace ws;
  double next_dt = 0.0;

  double dt_from_speed(double smax) const {
    const double spacing = std::min(grid.dx, grid.dy);
    double dt = smax > 0.0 ? params.cfl * spacing / smax : params.dt_max;
    if (params.nu_e > 0.0) dt = std::min(dt, 0.25 * spacing * spacing / params.nu_e);
    return std::min(dt, params.dt_max);
  }

  kernels::Geometry geometry() const {
    kernels::Geometry g;
    g.nx = grid.nx;
    g.ny = grid.ny;
    g.dx = grid.dx;
    g.dy = grid.dy;
    g.g = params.g;
    g.h_dry = params.h_dry;
    g.nu_e = params.nu_e;
    g.z_b = grid.z_b;
    g.ks = ks_cell;
    return g;
  }

  void apply_inflow(const RiverState& s, double q_total, StepReport& report) {
    if (grid.upstream_cells.empty() || !(q_total > 0.0)) return;
    const double q = q_total / (static_cast<double>(grid.upstream_cells.size()) * grid.dy);
    for (int c : grid.upstream_cells) {
      const int j = grid.row_of(c);
      kernels::Face& f = ws.xfaces[static_cast<std::size_t>(j) * (grid.nx + 1)];
      const double h = s.h[c];
      // Ghost depth never below critical depth so the momentum flux stays finite.
      const double hb = std::max(h, std::cbrt(q * q / params.g));
      f.mass = q;
      f.mom_hi = q * q / hb + 0.5 * params.g * h * h;
      f.mom_t = 0.0;
    }
    report.inflow = q_total;
  }

  void apply_outflow(const RiverState& s, const RatingCurve& rc, double dt, StepReport& report) {
    if (grid.downstream_cells.empty() || rc.samples().empty()) return;
    double sum_h = 0.0, sum_hz = 0.0, sum_w = 0.0;
    for (int c : grid.downstream_cells) {
      const double h = s.h[c];
      if (h < params.h_dry) continue;
      sum_h += h;
      sum_hz += h * (grid.z_b[c] + h);
      sum_w += ks_cell[c] * h * std::cbrt(h * h);
    }
    if (!(sum_h > 0.0)) return;
    const double q_total = rc(sum_hz / sum_h);
    double applied = 0.0;
    for (int c : grid.downstream_cells) {
      const double h = s.h[c];
      if (h < params.h_dry) continue;
      const double share = ks_cell[c] * h * std::cbrt(h * h) / sum_w;
      double q = q_total * share / grid.dy;
      q = std::min(q, 0.5 * h * grid.dx / dt);
      const int j = grid.row_of(c);
      kernels::Face& f = ws.xfaces[static_cast<std::size_t>(j) * (grid.nx + 1) + grid.nx];
      f.mass = q;
      f.mom_lo = q * q / h + 0.5 * params.g * h * h;
      f.mom_t = q * s.v[c];
      applied += q * grid.dy;
    }
    report.outflow = applied;
  }
};

Solver::Solver(const ScenarioGrid& grid, const FrictionSet& friction, const PhysicalParams& params,
               Execution exec)
    : impl_(std::make_unique<Impl>(Impl{grid, params, exec, {}, {}, 0.0})) {
  grid.validate();
  params.validate();
  friction.validate();
  impl_->ks_cell.resize(static_cast<std::size_t>(grid.cell_count()));
  for (int c = 0; c < grid.cell_count(); ++c) impl_->ks_cell[c] = friction.ks[grid.friction_zone[c]];
  impl_->ws.resize(grid.nx, grid.ny);
}

Solver::~Solver() = default;

double Solver::stable_dt(const RiverState& state) const {
  const auto& p = impl_->params;
  const double smax = impl_->exec == Execution::parallel
                          ? kernels::max_speed_parallel(state.h, state.u, state.v, p.g, p.h_dry)
                          : kernels::max_speed_serial(state.h, state.u, state.v, p.g, p.h_dry);
  return impl_->dt_from_speed(smax);
}

double Solver::stable_dt_after_advance() const { return impl_->next_dt; }

void Solver::advance(RiverState& state, const BoundaryForcing& bc, double dt, StepReport* report) {
  auto& im = *impl_;
  const auto geo = im.geometry();
  if (im.exec == Execution::parallel) {
    kernels::interior_fluxes_parallel(geo, state.h, state.u, state.v, im.ws);
  } else {
    kernels::interior_fluxes_serial(geo, state.h, state.u, state.v, im.ws);
  }
  StepReport local;
  im.apply_inflow(state, bc.upstream(state.t), local);
  im.apply_outflow(state, bc.downstream, dt, local);
  const double smax = im.exec == Execution::parallel
                          ? kernels::update_cells_parallel(geo, state.h, state.u, state.v, im.ws, dt)
                          : kernels::update_cells_serial(geo, state.h, state.u, state.v, im.ws, dt);
  const double t_new = state.t + dt;
  for (std::size_t c = 0; c < im.ws.h_new.size(); ++c) {
    if (!std::isfinite(im.ws.h_new[c]) || !std::isfinite(im.ws.u_new[c]) || !std::isfinite(im.ws.v_new[c])) {
      std::ostringstream msg;
      msg << "solver instability: non-finite state in cell " << c << " (i=" << im.grid.column_of(static_cast<int>(c))
          << ", j=" << im.grid.row_of(static_cast<int>(c)) << ") at t=" << t_new << " s";
      throw SolverInstability(static_cast<int>(c), t_new, msg.str());
    }
  }
  state.h.swap(im.ws.h_new);
  state.u.swap(im.ws.u_new);
  state.v.swap(im.ws.v_new);
  state.t = t_new;
  im.next_dt = im.dt_from_speed(smax);
  if (report) *report = local;
}

double stable_dt(const RiverState& state, const ScenarioGrid& grid, const PhysicalParams& params, Execution exec) {
  Solver solver(grid, FrictionSet{}, params, exec);
  return solver.stable_dt(state);
}

RiverState step(const RiverState& state, const ScenarioGrid& grid, const FrictionSet& friction,
                const PhysicalParams& params, const BoundaryForcing& bc, double dt, Execution exec,
                StepReport* report) {
  Solver solver(grid, friction, params, exec);
  RiverState next = state;
  solver.advance(next, bc, dt, report);
  return next;
}

const RiverState* Trajectory::at(double t) const {
  for (const auto& s : states) {
    if (s.t == t) return &s;
  }
  return nullptr;
}

Trajectory run(const Scenario& scenario, const FrictionSet& friction, const Inflow& inflow,
               const RiverState& initial, double t_start, double t_end, std::span<const double> output_times,
               Execution exec) {
  if (t_end < t_start) throw InputError("run: t_end precedes t_start");
  std::vector<double> outputs(output_times.begin(), output_times.end());
  std::sort(outputs.begin(), outputs.end());
  for (double t : outputs) {
    if (t < t_start || t > t_end) throw InputError("run: output time " + std::to_string(t) + " outside window");
  }
  const auto n = static_cast<std::size_t>(scenario.grid.cell_count());
  if (initial.h.size() != n || initial.u.size() != n || initial.v.size() != n) {
    throw InputError("run: initial state does not match the grid");
  }

  Solver solver(scenario.grid, friction, scenario.params, exec);
  const BoundaryForcing bc{inflow, scenario.rating};
  Trajectory traj;
  traj.states.reserve(outputs.size());
  RiverState state = initial;
  state.t = t_start;

  // The step kernel returns the next stable dt, so only the first step scans the state.
  double dt_next = solver.stable_dt(state);
  auto advance_to = [&](double target) {
    while (state.t < target) {
      const double remaining = target - state.t;
      const double dt = dt_next;
      if (dt >= remaining) {
        solver.advance(state, bc, remaining);
        state.t = target;
      } else {
        solver.advance(state, bc, dt);
      }
      dt_next = solver.stable_dt_after_advance();
    }
  };

  for (double t : outputs) {
    advance_to(t);
    traj.states.push_back(state);
    traj.states.back().t = t;
  }
  advance_to(t_end);
  traj.final_state = std::move(state);
  return traj;
}

double total_volume(const RiverState& state, const ScenarioGrid& grid) {
  double v = 0.0;
  for (double h : state.h) v += h;
  return v * grid.cell_area();
}

double kinetic_energy(const RiverState& state, const ScenarioGrid& grid) {
  double e = 0.0;
  for (std::size_t c = 0; c < state.h.size(); ++c) {
    e += 0.5 * state.h[c] * (state.u[c] * state.u[c] + state.v[c] * state.v[c]);
  }
  return e * grid.cell_area();
}

double total_energy(const RiverState& state, const ScenarioGrid& grid, double g) {
  double e = 0.0;
  for (std::size_t c = 0; c < state.h.size(); ++c) {
    const double h = state.h[c];
    const double z = grid.z_b[c];
    e += 0.5 * h * (state.u[c] * state.u[c] + state.v[c] * state.v[c]) + g * h * (z + 0.5 * h);
  }
  return e * grid.cell_area();
}

}  // namespace floodda::swe
