#include <doctest.h>

#include <cmath>
#include <fstream>

#include "floodda/core/error.hpp"
#include "floodda/core/hash.hpp"
#include "floodda/experiment/lab.hpp"
#include "floodda/twinlab/default_scenario.hpp"
#include "floodda/twinlab/scenario_io.hpp"
#include "floodda/twinlab/twin.hpp"
#include "support.hpp"

using namespace floodda;
using namespace floodda::twinlab;

namespace {

const ScenarioBundle& small_bundle() {
  static const ScenarioBundle b = [] {
    DefaultScenarioOptions opt;
    opt.nx = 24;
    return build_default_scenario(opt);
  }();
  return b;
}

TwinScenario small_twin() {
  TwinScenario tw;
  tw.model = small_bundle();
  tw.truth_control = uncertainty::ControlVector{15.0, 44.0, 37.5, 40.5, 1.08, -48.0, 1200.0};
  tw.gauges = {0.0, 172800.0, 900.0, 0.0};
  tw.overpass_times = {97200.0};
  tw.seed = 3;
  return tw;
}

}  // namespace

TEST_SUITE("twinlab.scenario") {
  TEST_CASE("default scenario layout") {
    const auto& b = small_bundle();
    const auto& g = b.scenario.grid;
    CHECK_NOTHROW(g.validate());
    CHECK(g.stations.size() == 3);
    CHECK(g.column_of(g.station("upper").cell) < g.column_of(g.station("middle").cell));
    CHECK(g.column_of(g.station("middle").cell) < g.column_of(g.station("lower").cell));
    for (const auto& s : g.stations) CHECK(g.friction_zone[s.cell] >= 1);
    int floodplain = 0;
    for (auto z : g.friction_zone) floodplain += z == 0;
    CHECK(floodplain > 0);
    CHECK(b.initial.t == -43200.0);
  }

  TEST_CASE("initial state is steady at base flow") {
    const auto& b = small_bundle();
    const uncertainty::ControlVector x;
    const double t[] = {b.initial.t + 21600.0};
    const auto traj = swe::run(b.scenario, x.friction(), uncertainty::perturb_hydrograph(b.scenario.inflow, x), b.initial,
                               b.initial.t, t[0], t);
    for (const auto& s : b.scenario.grid.stations) {
      CHECK(std::abs(traj.states[0].free_surface(b.scenario.grid, s.cell) - b.initial.free_surface(b.scenario.grid, s.cell)) <
            0.01);
    }
  }

  TEST_CASE("event hydrograph single and double peak") {
    EventHydrograph ev;
    CHECK(ev(0.0) == ev.base);
    CHECK(ev(ev.t_peak) == doctest::Approx(ev.peak));
    CHECK(ev(ev.t_peak - 3600.0) < ev.peak);
    ev.second_peak = 3000.0;
    // Second pulse plus the tail of the first.
    const double r = (ev.t_second_peak - ev.onset) / (ev.t_peak - ev.onset);
    const double tail = (ev.peak - ev.base) * std::pow(r, ev.shape) * std::exp(ev.shape * (1.0 - r));
    CHECK(ev(ev.t_second_peak) == doctest::Approx(3000.0 + tail));
    CHECK(ev(0.5 * (ev.t_peak + ev.t_second_peak)) < ev(ev.t_second_peak));
    const auto q = ev.sampled();
    CHECK(q.samples().front().first == 0.0);
    CHECK(q.samples().back().first == ev.duration);
  }

  TEST_CASE("scenario files round trip with verified hashes") {
    test::TempDir dir("scenario");
    const auto& b = small_bundle();
    const auto written = write_scenario(dir.path(), b);
    AssetHashes read_hashes;
    const auto back = read_scenario(dir / "scenario.json", &read_hashes);
    CHECK(read_hashes == written);
    CHECK(back.scenario.grid.z_b == b.scenario.grid.z_b);
    CHECK(back.scenario.grid.friction_zone == b.scenario.grid.friction_zone);
    CHECK(back.scenario.grid.upstream_cells == b.scenario.grid.upstream_cells);
    CHECK(back.scenario.inflow.samples() == b.scenario.inflow.samples());
    CHECK(back.scenario.rating.samples() == b.scenario.rating.samples());
    CHECK(back.initial.h == b.initial.h);
    {
      std::ofstream f(dir / "inflow.csv", std::ios::app);
      f << "999999,1\n";
    }
    CHECK_THROWS_AS(read_scenario(dir / "scenario.json"), InputError);
  }
}

TEST_SUITE("twinlab.generators") {
  TEST_CASE("truth with prior-mean controls equals the free run") {
    TwinScenario tw = small_twin();
    tw.truth_control = uncertainty::ControlVector{};
    tw.gauges.t_end = 43200.0;
    tw.overpass_times = {21600.0};
    const auto truth = build_truth(tw);
    const auto times = record_times(tw.gauges, tw.overpass_times);
    const uncertainty::ControlVector x;
    const auto fr = swe::run(tw.model.scenario, x.friction(), uncertainty::perturb_hydrograph(tw.model.scenario.inflow, x),
                             tw.model.initial, tw.model.initial.t, times.back(), times);
    REQUIRE(truth.states.size() == fr.states.size());
    for (std::size_t k = 0; k < fr.states.size(); ++k) CHECK(truth.states[k].h == fr.states[k].h);
    const auto again = build_truth(tw);
    CHECK(again.final_state.h == truth.final_state.h);
  }

  TEST_CASE("double-peak event gives two station maxima") {
    DefaultScenarioOptions opt;
    opt.nx = 24;
    opt.event.second_peak = 3200.0;
    TwinScenario tw;
    tw.model = build_default_scenario(opt);
    tw.gauges = {0.0, 172800.0, 900.0, 0.0};
    const auto truth = build_truth(tw);
    const auto obs = generate_gauge_obs(truth, tw.model.scenario.grid, tw.gauges.times(), 0.0, {}, 0);
    std::vector<double> z;
    for (const auto& r : obs.records) {
      if (r.station == "middle") z.push_back(r.value);
    }
    // Count prominent local maxima (at least 0.1 m above the lowest level on
    // either side before the next higher point).
    int peaks = 0;
    for (std::size_t k = 1; k + 1 < z.size(); ++k) {
      if (!(z[k] > z[k - 1] && z[k] >= z[k + 1])) continue;
      double left = z[k], right = z[k];
      for (std::size_t m = k; m-- > 0 && z[m] <= z[k];) left = std::min(left, z[m]);
      for (std::size_t m = k + 1; m < z.size() && z[m] <= z[k]; ++m) right = std::min(right, z[m]);
      if (z[k] - left > 0.1 && z[k] - right > 0.1) ++peaks;
    }
    CHECK(peaks == 2);
  }

  TEST_CASE("gauge observations: exact, offset and noisy") {
    TwinScenario tw = small_twin();
    const auto truth = build_truth(tw);
    const auto& grid = tw.model.scenario.grid;
    const auto times = tw.gauges.times();
    const auto exact = generate_gauge_obs(truth, grid, times, 0.0, {}, 1);
    REQUIRE(exact.records.size() == times.size() * 3);
    for (const auto& r : exact.records) {
      const auto* s = truth.at(r.t);
      REQUIRE(s != nullptr);
      CHECK(r.value == s->free_surface(grid, grid.station(r.station).cell));
    }
    const auto offset = generate_gauge_obs(truth, grid, times, 0.0, {{"upper", 0.72}}, 1);
    for (std::size_t k = 0; k < offset.records.size(); ++k) {
      const double d = offset.records[k].value - exact.records[k].value;
      CHECK(d == doctest::Approx(offset.records[k].station == "upper" ? 0.72 : 0.0).epsilon(1e-12).scale(1.0));
    }
    const auto noisy = generate_gauge_obs(truth, grid, times, 0.15, {}, 1);
    double ss = 0.0;
    for (std::size_t k = 0; k < noisy.records.size(); ++k) {
      const double rel = (noisy.records[k].value - exact.records[k].value) / exact.records[k].value;
      ss += rel * rel;
    }
    CHECK(std::sqrt(ss / noisy.records.size()) == doctest::Approx(0.15).epsilon(0.10));
    const auto again = generate_gauge_obs(truth, grid, times, 0.15, {}, 1);
    for (std::size_t k = 0; k < noisy.records.size(); ++k) CHECK(again.records[k].value == noisy.records[k].value);
  }

  TEST_CASE("exclusion covers the requested share in patches") {
    DefaultScenarioOptions opt;
    opt.nx = 100;
    opt.ny = 40;
    opt.channel_row_lo = 19;
    opt.channel_row_hi = 20;
    opt.initial_spinup = 0.0;
    const auto grid = build_default_scenario(opt).scenario.grid;
    const auto ex = generate_exclusion(grid, 0.086, 4);
    int n = 0;
    for (auto e : ex) n += e;
    CHECK(n == static_cast<int>(std::lround(0.086 * grid.cell_count())));
    CHECK(generate_exclusion(grid, 0.086, 4) == ex);
    // Patches: most excluded cells touch another excluded cell.
    int touching = 0;
    for (int j = 0; j < grid.ny; ++j) {
      for (int i = 0; i < grid.nx; ++i) {
        if (!ex[grid.index(i, j)]) continue;
        bool nb = (i > 0 && ex[grid.index(i - 1, j)]) || (i + 1 < grid.nx && ex[grid.index(i + 1, j)]) ||
                  (j > 0 && ex[grid.index(i, j - 1)]) || (j + 1 < grid.ny && ex[grid.index(i, j + 1)]);
        touching += nb;
      }
    }
    CHECK(touching >= 0.9 * n);
    int none = 0;
    for (auto e : generate_exclusion(grid, 0.0, 4)) none += e;
    CHECK(none == 0);
  }

  TEST_CASE("flood extent degradation") {
    DefaultScenarioOptions opt;
    opt.nx = 200;
    opt.ny = 50;
    opt.channel_row_lo = 24;
    opt.channel_row_hi = 25;
    opt.initial_spinup = 0.0;
    const auto bundle = build_default_scenario(opt);
    const auto& grid = bundle.scenario.grid;
    swe::RiverState s = bundle.initial;
    for (std::size_t k = 0; k < s.h.size(); ++k) s.h[k] = (k % 7 < 3) ? 0.5 : 0.0;
    const auto truth_mask = metrics::rasterize_flood_mask(s, grid);

    ExtentDegradation clean{0.0, 0.0, metrics::kFloodThreshold};
    const std::vector<std::uint8_t> no_excl(grid.cell_count(), 0);
    CHECK(generate_flood_extent_obs(s, grid, clean, no_excl, 1).wet == truth_mask.wet);

    ExtentDegradation noisy{0.05, 0.086, metrics::kFloodThreshold};
    const auto excl = generate_exclusion(grid, noisy.exclusion_fraction, 2);
    const auto m = generate_flood_extent_obs(s, grid, noisy, excl, 2);
    CHECK(m.exclusion == excl);
    double flipped = 0.0, eligible = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (excl[k]) continue;
      eligible += 1.0;
      flipped += m.wet[k] != truth_mask.wet[k];
    }
    const double p = 0.05;
    CHECK(std::abs(flipped / eligible - p) <= 3.0 * std::sqrt(p * (1.0 - p) / eligible));
    CHECK_THROWS_AS((ExtentDegradation{0.5, 0.0, 0.05}.validate()), InputError);
    CHECK_THROWS_AS((ExtentDegradation{0.0, 1.0, 0.05}.validate()), InputError);
  }
}

TEST_SUITE("twinlab.outputs") {
  TEST_CASE("observation products are reproducible and hide the truth") {
    test::TempDir dir("twin");
    experiment::LabOptions opt;
    opt.scenario.nx = 24;
    experiment::write_default_lab(dir.path(), opt);
    const auto tw = read_twin(dir / "twin.json");
    CHECK(tw.truth_control == opt.truth_control);
    write_twin_outputs(tw, dir / "twin.json", dir / "a");
    write_twin_outputs(tw, dir / "twin.json", dir / "b");
    CHECK(sha256_tree(dir / "a") == sha256_tree(dir / "b"));

    const auto products = read_observations(dir / "a" / "obs", tw.model.scenario.grid);
    CHECK(products.overpass_times == opt.overpass_times);
    CHECK(products.masks.size() == opt.overpass_times.size());
    CHECK(products.gauges.records.size() == tw.gauges.times().size() * 3);
    std::ifstream manifest(dir / "a" / "obs" / "manifest.json");
    const std::string text((std::istreambuf_iterator<char>(manifest)), std::istreambuf_iterator<char>());
    CHECK(text.find("truth_control") == std::string::npos);
    CHECK(std::filesystem::exists(dir / "a" / "truth" / "truth.json"));
  }
}
