#pragma once

#include <memory>
#include <span>
#include <vector>

#include "floodda/swe/forcing.hpp"
#include "floodda/swe/types.hpp"

namespace floodda::swe {

/// Loop schedule for the cell kernels. Both produce bit-identical states.
enum class Execution { serial, parallel };

/// Grid, downstream rating curve, nominal upstream hydrograph and numerics.
struct Scenario {
  ScenarioGrid grid;
  Hydrograph inflow;
  RatingCurve rating;
  PhysicalParams params;
};

struct BoundaryForcing {
  Inflow upstream;
  RatingCurve downstream;  // empty table = closed east edge
};

/// Discharges actually applied at the open boundaries during one step (m3/s).
struct StepReport {
  double inflow = 0.0;
  double outflow = 0.0;
};

struct FrictionAccel {
  double fx = 0.0;
  double fy = 0.0;
};

/// Strickler friction acceleration -(g/ks^2) u |u| / h^(4/3). Dry cells give zero.
FrictionAccel friction_source(double h, double u, double v, double ks, const PhysicalParams& params);

/// CFL-limited explicit time step, capped by params.dt_max.
double stable_dt(const RiverState& state, const ScenarioGrid& grid, const PhysicalParams& params,
                 Execution exec = Execution::serial);

/// States at requested output times plus the final state (the restart).
struct Trajectory {
  std::vector<RiverState> states;
  RiverState final_state;

  /// State recorded at exactly time t, or nullptr.
  const RiverState* at(double t) const;
};

/// Reusable stepping engine; holds scratch buffers between steps.
class Solver {
 public:
  Solver(const ScenarioGrid& grid, const FrictionSet& friction, const PhysicalParams& params,
         Execution exec = Execution::serial);
  ~Solver();
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  /// Advances `state` by dt in place. Throws SolverInstability on a
  /// non-finite result.
  void advance(RiverState& state, const BoundaryForcing& bc, double dt, StepReport* report = nullptr);

  double stable_dt(const RiverState& state) const;

  /// Stable dt for the state produced by the last advance(), computed during
  /// the update pass.
  double stable_dt_after_advance() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One explicit step from `state`.
RiverState step(const RiverState& state, const ScenarioGrid& grid, const FrictionSet& friction,
                const PhysicalParams& params, const BoundaryForcing& bc, double dt,
                Execution exec = Execution::serial, StepReport* report = nullptr);

/// Integrates from `initial` (taken to be at t_start) to t_end, landing exactly
/// on every output time. Deterministic for fixed inputs.
Trajectory run(const Scenario& scenario, const FrictionSet& friction, const Inflow& inflow,
               const RiverState& initial, double t_start, double t_end, std::span<const double> output_times,
               Execution exec = Execution::serial);

/// Total water volume (m3).
double total_volume(const RiverState& state, const ScenarioGrid& grid);

/// Kinetic energy sum of 0.5 h |u|^2 dx dy.
double kinetic_energy(const RiverState& state, const ScenarioGrid& grid);

/// Kinetic plus potential energy relative to z = 0.
double total_energy(const RiverState& state, const ScenarioGrid& grid, double g);

}  // namespace floodda::swe
