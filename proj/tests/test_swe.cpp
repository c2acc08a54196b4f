#include <doctest.h>

#include <cmath>
#include <random>

#include <omp.h>

#include "floodda/core/error.hpp"
#include "floodda/swe/restart.hpp"
#include "floodda/swe/solver.hpp"
#include "support.hpp"

using namespace floodda;
using namespace floodda::swe;
using floodda::test::make_grid;
using floodda::test::uniform_friction;

namespace {

/// Uneven bed with a few islands poking through a lake at `level`.
ScenarioGrid bumpy_grid(int nx, int ny, double dx, std::uint64_t seed) {
  ScenarioGrid g = make_grid(nx, ny, dx);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-0.3, 0.3);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double x = (i + 0.5) / nx, y = (j + 0.5) / ny;
      g.z_b[g.index(i, j)] = 1.2 * std::sin(6.0 * x) * std::cos(5.0 * y) + noise(rng);
    }
  }
  return g;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

TEST_SUITE("swe.friction") {
  TEST_CASE("strickler acceleration examples") {
    const PhysicalParams p;
    auto a = friction_source(1.0, 1.0, 0.0, 45.0, p);
    CHECK(a.fx == doctest::Approx(-9.81 / 2025.0).epsilon(1e-12));
    CHECK(a.fx == doctest::Approx(-4.844e-3).epsilon(1e-3));
    CHECK(a.fy == 0.0);

    a = friction_source(1.0, 0.0, 0.0, 40.0, p);
    CHECK(a.fx == 0.0);
    CHECK(a.fy == 0.0);

    a = friction_source(1.0, 3.0, 4.0, 40.0, p);
    CHECK(a.fx == doctest::Approx(-(9.81 / 1600.0) * 3.0 * 5.0).epsilon(1e-12));
    CHECK(a.fx == doctest::Approx(-9.197e-2).epsilon(1e-3));
    CHECK(a.fy == doctest::Approx(-(9.81 / 1600.0) * 4.0 * 5.0).epsilon(1e-12));
  }

  TEST_CASE("dry cell gives no friction") {
    const PhysicalParams p;
    const auto a = friction_source(0.5 * p.h_dry, 2.0, -1.0, 30.0, p);
    CHECK(a.fx == 0.0);
    CHECK(a.fy == 0.0);
  }

  TEST_CASE("friction opposes motion") {
    const PhysicalParams p;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> vel(-3.0, 3.0), depth(1e-3, 10.0), ks(5.0, 60.0);
    for (int k = 0; k < 1000; ++k) {
      const double u = vel(rng), v = vel(rng);
      const auto a = friction_source(depth(rng), u, v, ks(rng), p);
      CHECK(a.fx * u <= 0.0);
      CHECK(a.fy * v <= 0.0);
    }
  }
}

TEST_SUITE("swe.stable_dt") {
  TEST_CASE("still water example") {
    ScenarioGrid g = make_grid(5, 4, 10.0);
    PhysicalParams p;
    p.cfl = 0.9;
    const RiverState s = RiverState::at_rest(g, 1.0);
    CHECK(stable_dt(s, g, p) == doctest::Approx(9.0 / std::sqrt(9.81)).epsilon(1e-12));
    CHECK(stable_dt(s, g, p) == doctest::Approx(2.873).epsilon(1e-3));
    CHECK(stable_dt(s, g, p, Execution::parallel) == stable_dt(s, g, p));
  }

  TEST_CASE("all dry returns dt_max") {
    ScenarioGrid g = make_grid(5, 4, 10.0);
    PhysicalParams p;
    const RiverState s = RiverState::at_rest(g, -1.0);
    CHECK(stable_dt(s, g, p) == p.dt_max);
  }

  TEST_CASE("halving dx halves dt") {
    ScenarioGrid g = make_grid(6, 6, 8.0);
    PhysicalParams p;
    p.dt_max = 1e9;
    RiverState s = RiverState::at_rest(g, 2.0);
    for (std::size_t k = 0; k < s.u.size(); ++k) s.u[k] = 0.1 * static_cast<double>(k % 5);
    const double dt = stable_dt(s, g, p);
    g.dx = g.dy = 4.0;
    CHECK(stable_dt(s, g, p) == doctest::Approx(0.5 * dt).epsilon(1e-14));
  }

  TEST_CASE("dt_max caps deep slow flow") {
    ScenarioGrid g = make_grid(3, 3, 1e6);
    PhysicalParams p;
    const RiverState s = RiverState::at_rest(g, 1.0);
    CHECK(stable_dt(s, g, p) == p.dt_max);
  }
}

TEST_SUITE("swe.rating") {
  TEST_CASE("interpolation and clamping") {
    const RatingCurve rc({{0.0, 0.0}, {2.0, 100.0}});
    CHECK(rating_curve_eval(rc, 1.0) == 50.0);
    CHECK(rating_curve_eval(rc, -3.0) == 0.0);
    CHECK(rating_curve_eval(rc, 7.0) == 100.0);
    CHECK(rating_curve_eval(rc, 2.0) == 100.0);
    const RatingCurve three({{1.0, 5.0}, {2.0, 5.0}, {4.0, 17.25}});
    CHECK(three(4.0) == 17.25);
    CHECK(three(2.0) == 5.0);
    CHECK(three(1.5) == 5.0);
  }

  TEST_CASE("monotone non-decreasing") {
    const RatingCurve rc({{0.0, 0.0}, {1.0, 3.0}, {1.5, 3.0}, {4.0, 90.0}});
    double prev = rc(-1.0);
    for (double h = -1.0; h <= 5.0; h += 0.01) {
      CHECK(rc(h) >= prev);
      prev = rc(h);
    }
  }

  TEST_CASE("invalid tables are rejected") {
    CHECK_THROWS_AS(RatingCurve({{0.0, 0.0}, {0.0, 1.0}}), InputError);
    CHECK_THROWS_AS(RatingCurve({{0.0, 5.0}, {1.0, 1.0}}), InputError);
    CHECK_THROWS_AS(Hydrograph({{10.0, 1.0}, {5.0, 1.0}}), InputError);
    CHECK_THROWS_AS(Hydrograph({{0.0, -1.0}}), InputError);
  }

  TEST_CASE("hydrograph interpolates and clamps") {
    const Hydrograph q({{0.0, 100.0}, {3600.0, 460.0}});
    CHECK(q(1800.0) == 280.0);
    CHECK(q(-50.0) == 100.0);
    CHECK(q(1e7) == 460.0);
  }
}

TEST_SUITE("swe.solver") {
  TEST_CASE("lake at rest on uneven bed") {
    Scenario sc;
    sc.grid = bumpy_grid(24, 18, 5.0, 11);
    const RiverState s0 = RiverState::at_rest(sc.grid, 0.4);
    int dry = 0;
    for (double h : s0.h) dry += h == 0.0;
    REQUIRE(dry > 0);
    Solver solver(sc.grid, uniform_friction(30.0), sc.params);
    RiverState s = s0;
    double worst = 0.0;
    for (int n = 0; n < 1000; ++n) {
      solver.advance(s, {}, solver.stable_dt(s));
      worst = std::max(worst, max_abs_diff(s.h, s0.h));
    }
    CHECK(worst <= 1e-10);
    CHECK(max_abs_diff(s.u, s0.u) <= 1e-10);
    CHECK(max_abs_diff(s.v, s0.v) <= 1e-10);
  }

  TEST_CASE("closed domain conserves mass") {
    Scenario sc;
    sc.grid = bumpy_grid(30, 20, 4.0, 5);
    RiverState s = RiverState::at_rest(sc.grid, 0.3);
    for (int j = 0; j < sc.grid.ny; ++j) {
      for (int i = 0; i < sc.grid.nx; ++i) {
        const int c = sc.grid.index(i, j);
        const double r2 = std::pow(i - 10, 2) + std::pow(j - 8, 2);
        s.h[c] += 0.8 * std::exp(-r2 / 12.0);
      }
    }
    const double v0 = total_volume(s, sc.grid);
    Solver solver(sc.grid, uniform_friction(25.0), sc.params);
    double worst = 0.0;
    for (int n = 0; n < 1000; ++n) {
      solver.advance(s, {}, solver.stable_dt(s));
      worst = std::max(worst, std::abs(total_volume(s, sc.grid) - v0) / v0);
    }
    CHECK(worst <= 1e-8);
  }

  TEST_CASE("wet-bed dam break matches the Stoker profile") {
    // First-order fluxes smear the rarefaction and the bore: depth meets 2% at
    // dx = 1 m, velocity carries a resolution-dependent tolerance (about 8.5%
    // at dx = 1 m, shrinking with dx).
    const auto coarse = test::dam_break_error(1.0, 0.9);
    CHECK(coarse.depth <= 0.02);
    CHECK(coarse.velocity <= 0.10);
    const auto fine = test::dam_break_error(0.5, 0.9);
    CHECK(fine.depth < coarse.depth);
    CHECK(fine.velocity < coarse.velocity);
    CHECK(fine.velocity <= 0.07);
  }

  TEST_CASE("uniform flow relaxes to the Strickler velocity") {
    REQUIRE(40.0 * std::pow(1.0, 2.0 / 3.0) * std::sqrt(1e-4) == doctest::Approx(0.4));
    // Tolerance 1% at dx = 10 m; the error is first order in dx.
    const double fine = test::uniform_flow_error(10.0, 43200.0);
    const double coarse = test::uniform_flow_error(50.0, 172800.0);
    CHECK(fine <= 0.01);
    CHECK(coarse > 3.0 * fine);
  }

  TEST_CASE("steady inflow equals outflow") {
    const double slope = 1e-4, ks = 40.0, q = 6.0;
    Scenario sc = test::sloped_channel(50.0, slope, ks, q, 120);
    RiverState s = RiverState::at_rest(sc.grid, -1e9);
    for (double& h : s.h) h = 0.5;
    Solver solver(sc.grid, uniform_friction(ks), sc.params);
    const BoundaryForcing bc{Inflow{sc.inflow}, sc.rating};
    StepReport rep;
    while (s.t < 5.0 * 86400.0) solver.advance(s, bc, solver.stable_dt(s), &rep);
    CHECK(rep.inflow == doctest::Approx(q));
    CHECK(std::abs(rep.outflow - rep.inflow) <= 1e-3 * rep.inflow);
  }

  TEST_CASE("zero-length window returns the initial state") {
    Scenario sc;
    sc.grid = bumpy_grid(8, 6, 10.0, 2);
    RiverState s0 = RiverState::at_rest(sc.grid, 0.5, 100.0);
    s0.u[3] = 0.2;
    const double t[] = {100.0};
    const auto traj = run(sc, uniform_friction(30.0), Inflow{}, s0, 100.0, 100.0, t);
    REQUIRE(traj.states.size() == 1);
    CHECK(traj.states[0].h == s0.h);
    CHECK(traj.states[0].u == s0.u);
    CHECK(traj.final_state.h == s0.h);
    CHECK(traj.final_state.t == 100.0);
  }

  TEST_CASE("run lands on output times and rejects bad windows") {
    Scenario sc;
    sc.grid = bumpy_grid(8, 6, 10.0, 2);
    const RiverState s0 = RiverState::at_rest(sc.grid, 0.5);
    const double t[] = {7.25, 3.0, 11.0};
    const auto traj = run(sc, uniform_friction(30.0), Inflow{}, s0, 0.0, 11.0, t);
    REQUIRE(traj.states.size() == 3);
    CHECK(traj.states[0].t == 3.0);
    CHECK(traj.states[1].t == 7.25);
    CHECK(traj.at(11.0) != nullptr);
    CHECK(traj.at(5.0) == nullptr);
    CHECK_THROWS_AS(run(sc, uniform_friction(30.0), Inflow{}, s0, 5.0, 1.0, {}), InputError);
    const double outside[] = {12.0};
    CHECK_THROWS_AS(run(sc, uniform_friction(30.0), Inflow{}, s0, 0.0, 11.0, outside), InputError);
  }

  TEST_CASE("identical inputs give bit-identical trajectories") {
    Scenario sc = test::sloped_channel(50.0, 1e-4, 35.0, 3.0, 60);
    sc.inflow = Hydrograph({{0.0, 2.0}, {3600.0, 9.0}, {7200.0, 2.0}});
    RiverState s0 = RiverState::at_rest(sc.grid, -1e9);
    for (double& h : s0.h) h = 0.4;
    const double t[] = {1800.0, 3600.0, 5400.0};
    const auto a = run(sc, uniform_friction(35.0), Inflow{sc.inflow}, s0, 0.0, 7200.0, t);
    const auto b = run(sc, uniform_friction(35.0), Inflow{sc.inflow}, s0, 0.0, 7200.0, t);
    for (std::size_t k = 0; k < a.states.size(); ++k) {
      CHECK(a.states[k].h == b.states[k].h);
      CHECK(a.states[k].u == b.states[k].u);
    }
    CHECK(a.final_state.h == b.final_state.h);
  }

  TEST_CASE("non-finite state raises SolverInstability") {
    Scenario sc;
    sc.grid = make_grid(6, 6, 10.0);
    RiverState s = RiverState::at_rest(sc.grid, 1.0);
    s.u[14] = std::numeric_limits<double>::quiet_NaN();
    Solver solver(sc.grid, uniform_friction(30.0), sc.params);
    CHECK_THROWS_AS(solver.advance(s, {}, 0.1), SolverInstability);
  }
}

TEST_SUITE("swe.properties") {
  TEST_CASE("depth stays non-negative under random wet/dry states") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      CAPTURE(seed);
      Scenario sc;
      sc.grid = bumpy_grid(20, 14, 3.0, 100 + seed);
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> depth(0.0, 1.5), vel(-1.5, 1.5), coin(0.0, 1.0);
      RiverState s = RiverState::at_rest(sc.grid, 0.0);
      for (std::size_t k = 0; k < s.h.size(); ++k) {
        s.h[k] = coin(rng) < 0.3 ? 0.0 : depth(rng);
        if (s.h[k] > sc.params.h_dry) {
          s.u[k] = vel(rng);
          s.v[k] = vel(rng);
        }
      }
      Solver solver(sc.grid, uniform_friction(20.0 + seed), sc.params);
      bool ok = true;
      for (int n = 0; n < 200 && ok; ++n) {
        solver.advance(s, {}, solver.stable_dt(s));
        for (std::size_t k = 0; k < s.h.size(); ++k) {
          if (!(s.h[k] >= 0.0)) ok = false;
          if (s.h[k] < sc.params.h_dry && (s.u[k] != 0.0 || s.v[k] != 0.0)) ok = false;
        }
      }
      CHECK(ok);
    }
  }

  TEST_CASE("closed flat box dissipates energy") {
    // Kinetic energy alone trades with potential energy when the surface
    // tilts; a shear flow on a level surface has no such exchange.
    ScenarioGrid g = make_grid(24, 1, 10.0);
    RiverState s = RiverState::at_rest(g, 1.0);
    for (int i = 0; i < g.nx; ++i) s.v[i] = 0.6 * std::sin(3.0 * i);
    PhysicalParams p;
    Solver solver(g, uniform_friction(30.0), p);
    double ke = kinetic_energy(s, g);
    const double floor = 1e-13 * ke;  // round-off level once the flow has decayed
    bool monotone = true;
    for (int n = 0; n < 1000; ++n) {
      solver.advance(s, {}, solver.stable_dt(s));
      const double next = kinetic_energy(s, g);
      if (next > ke + floor) monotone = false;
      ke = next;
    }
    CHECK(monotone);

    // General closed flat box: total mechanical energy never increases.
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      ScenarioGrid box = make_grid(30, 20, 10.0);
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> dh(0.0, 0.4), vel(-0.8, 0.8);
      RiverState b = RiverState::at_rest(box, 1.0);
      for (std::size_t k = 0; k < b.h.size(); ++k) {
        b.h[k] += dh(rng);
        b.u[k] = vel(rng);
        b.v[k] = vel(rng);
      }
      Solver box_solver(box, uniform_friction(30.0), p);
      double e = total_energy(b, box, p.g);
      bool dissipative = true;
      for (int n = 0; n < 500; ++n) {
        box_solver.advance(b, {}, box_solver.stable_dt(b));
        const double next = total_energy(b, box, p.g);
        if (next > e * (1.0 + 1e-14)) dissipative = false;
        e = next;
      }
      CHECK(dissipative);
    }
  }

  TEST_CASE("serial and OpenMP kernels agree bit for bit") {
    Scenario sc = test::sloped_channel(25.0, 2e-4, 30.0, 4.0, 90);
    sc.grid = bumpy_grid(90, 12, 25.0, 3);
    sc.grid.upstream_cells = {sc.grid.index(0, 5), sc.grid.index(0, 6)};
    for (int j = 0; j < sc.grid.ny; ++j) sc.grid.downstream_cells.push_back(sc.grid.index(sc.grid.nx - 1, j));
    RiverState s0 = RiverState::at_rest(sc.grid, 0.2);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(4);
    const double t[] = {600.0, 1200.0};
    const auto a = run(sc, uniform_friction(30.0), Inflow{sc.inflow}, s0, 0.0, 1800.0, t, Execution::serial);
    const auto b = run(sc, uniform_friction(30.0), Inflow{sc.inflow}, s0, 0.0, 1800.0, t, Execution::parallel);
    omp_set_num_threads(saved);
    for (std::size_t k = 0; k < a.states.size(); ++k) {
      CHECK(a.states[k].h == b.states[k].h);
      CHECK(a.states[k].u == b.states[k].u);
      CHECK(a.states[k].v == b.states[k].v);
    }
    CHECK(a.final_state.h == b.final_state.h);
  }
}

TEST_SUITE("swe.restart") {
  TEST_CASE("round trip is exact") {
    test::TempDir dir("restart");
    ScenarioGrid g = bumpy_grid(9, 7, 10.0, 4);
    RiverState s = RiverState::at_rest(g, 0.3, 1234.5);
    for (std::size_t k = 0; k < s.u.size(); ++k) s.u[k] = s.h[k] > 0.0 ? 0.1 / (1.0 + k) : 0.0;
    write_restart(dir / "a.rst", s, g);
    const RiverState r = read_restart(dir / "a.rst", g);
    CHECK(r.t == s.t);
    CHECK(r.h == s.h);
    CHECK(r.u == s.u);
    CHECK(r.v == s.v);
  }

  TEST_CASE("foreign grid and corrupt files are rejected") {
    test::TempDir dir("restart");
    ScenarioGrid g = bumpy_grid(9, 7, 10.0, 4);
    write_restart(dir / "a.rst", RiverState::at_rest(g, 0.3), g);
    ScenarioGrid other = g;
    other.z_b[5] += 0.01;
    CHECK(grid_checksum(other) != grid_checksum(g));
    CHECK_THROWS_AS(read_restart(dir / "a.rst", other), InputError);
    std::filesystem::resize_file(dir / "a.rst", 20);
    CHECK_THROWS_AS(read_restart(dir / "a.rst", g), InputError);
    CHECK_THROWS_AS(read_restart(dir / "missing.rst", g), InputError);
  }
}
