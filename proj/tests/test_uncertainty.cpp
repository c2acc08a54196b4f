#include <doctest.h>

#include <cmath>
#include <numeric>

#include "floodda/core/error.hpp"
#include "floodda/core/rng.hpp"
#include "floodda/uncertainty/control.hpp"
#include "floodda/uncertainty/control_json.hpp"

using namespace floodda;
using namespace floodda::uncertainty;

namespace {

std::array<double, kControlSize> component_mean(const Ensemble& e) { return e.mean().to_array(); }

}  // namespace

TEST_SUITE("uncertainty.inflow") {
  TEST_CASE("default coefficients leave the hydrograph unchanged") {
    const swe::Hydrograph q({{0.0, 100.0}, {3600.0, 900.0}, {7200.0, 300.0}});
    const auto p = perturb_hydrograph(q, 1.0, 0.0, 0.0);
    for (double t = -1000.0; t <= 9000.0; t += 137.0) CHECK(p(t) == q(t));
  }

  TEST_CASE("constant discharge scaled and shifted") {
    const swe::Hydrograph q({{0.0, 500.0}, {86400.0, 500.0}});
    const auto p = perturb_hydrograph(q, 1.1, 0.0, 3600.0);
    for (double t = -7200.0; t <= 1e5; t += 1111.0) CHECK(p(t) == doctest::Approx(550.0).epsilon(1e-15));
  }

  TEST_CASE("ramp with clamped time shift") {
    const swe::Hydrograph q({{0.0, 0.0}, {1e6, 1e6}});
    const auto p = perturb_hydrograph(q, 1.0, 100.0, 900.0);
    for (double t : {-500.0, 0.0, 899.0, 900.0, 1000.0, 5000.0}) {
      CHECK(p(t) == doctest::Approx(std::max(t - 900.0, 0.0) + 100.0));
    }
  }

  TEST_CASE("linearity without shift is exact") {
    const swe::Hydrograph q({{0.0, 37.5}, {500.0, 812.25}, {1300.0, 90.0}});
    const double a = 1.0731, b = 42.125;
    const auto p = perturb_hydrograph(q, a, b, 0.0);
    for (double t = 0.0; t <= 1400.0; t += 13.0) CHECK(p(t) == a * q(t) + b);
  }

  TEST_CASE("negative discharge clipped to zero") {
    const swe::Hydrograph q({{0.0, 50.0}, {100.0, 50.0}});
    CHECK(perturb_hydrograph(q, 1.0, -80.0, 0.0)(10.0) == 0.0);
  }
}

TEST_SUITE("uncertainty.prior") {
  TEST_CASE("defaults match the prior means and intervals") {
    const ControlPrior prior;
    CHECK(prior.mean == ControlVector{});
    const ControlVector x;
    CHECK(x.to_array() == std::array<double, 7>{17.0, 45.0, 38.0, 40.0, 1.0, 0.0, 0.0});
    CHECK(prior.sigma == std::array<double, 7>{0.85, 2.25, 1.9, 2.0, 0.06, 100.0, 900.0});
    // 95% interval for ks1 is about [40.6, 49.4].
    CHECK(prior.mean.ks1 - 1.96 * prior.sigma[1] == doctest::Approx(40.59));
    CHECK(prior.mean.ks1 + 1.96 * prior.sigma[1] == doctest::Approx(49.41));
  }

  TEST_CASE("large sample statistics") {
    const ControlPrior prior;
    const auto e = sample_prior(prior, 10000, 42);
    REQUIRE(e.size() == 10000);
    CHECK(std::abs(e.mean().ks1 - 45.0) <= 3.0 * 2.25 / 100.0);
    CHECK(e.stddev()[4] == doctest::Approx(0.06).epsilon(0.05));
    for (int k = 0; k < kControlSize; ++k) {
      CHECK(std::abs(component_mean(e)[k] - prior.mean[k]) <= 4.0 * prior.sigma[k] / 100.0);
      CHECK(e.stddev()[k] == doctest::Approx(prior.sigma[k]).epsilon(0.05));
    }
  }

  TEST_CASE("sampling is reproducible and seed dependent") {
    const ControlPrior prior;
    const auto a = sample_prior(prior, 24, 9);
    const auto b = sample_prior(prior, 24, 9);
    const auto c = sample_prior(prior, 24, 10);
    CHECK(a.members == b.members);
    CHECK(a.seeds == b.seeds);
    CHECK(a.members != c.members);
    // The first members do not depend on the ensemble size.
    const auto d = sample_prior(prior, 30, 9);
    for (int i = 0; i < 24; ++i) CHECK(d.members[i] == a.members[i]);
  }

  TEST_CASE("strickler draws are clipped") {
    ControlPrior prior;
    prior.mean.ks0 = 1.5;
    prior.sigma[0] = 5.0;
    const auto e = sample_prior(prior, 2000, 3);
    bool clipped = false;
    for (const auto& m : e.members) {
      CHECK(m.ks0 >= kMinStrickler);
      clipped = clipped || m.ks0 == kMinStrickler;
    }
    CHECK(clipped);
  }

  TEST_CASE("invalid prior or size rejected") {
    ControlPrior prior;
    prior.sigma[3] = 0.0;
    CHECK_THROWS_AS(prior.validate(), InputError);
    CHECK_THROWS_AS(sample_prior(ControlPrior{}, 1, 0), InputError);
  }
}

TEST_SUITE("uncertainty.resampling") {
  TEST_CASE("zero-spread analysis falls back to lambda2 sigma") {
    const ControlPrior prior;
    Ensemble analysis;
    analysis.members.assign(10, ControlVector{16.0, 44.0, 37.0, 41.0, 1.05, 20.0, 300.0});
    const auto sigma = resampling_sigma(analysis, prior, 0.3, 0.7);
    for (int k = 0; k < kControlSize; ++k) CHECK(sigma[k] == doctest::Approx(0.7 * prior.sigma[k]).epsilon(1e-12));
    const auto e = resample_around_mean(analysis, prior, 0.3, 0.7, 5);
    const auto big = resample_around_mean(Ensemble{std::vector<ControlVector>(20000, analysis.members[0]), {}},
                                          prior, 0.3, 0.7, 5);
    CHECK(e.size() == 10);
    for (int k = 0; k < kControlSize; ++k) {
      CHECK(big.stddev()[k] == doctest::Approx(0.7 * prior.sigma[k]).epsilon(0.05));
      CHECK(big.mean()[k] == doctest::Approx(analysis.members[0][k]).epsilon(0.01).scale(prior.sigma[k]));
    }
  }

  TEST_CASE("lambda1 = 1, lambda2 = 0 preserves the analysis spread") {
    const ControlPrior prior;
    const auto analysis = sample_prior(prior, 5000, 77);
    const auto e = resample_around_mean(analysis, prior, 1.0, 0.0, 8);
    for (int k = 0; k < kControlSize; ++k) {
      CHECK(e.stddev()[k] == doctest::Approx(analysis.stddev()[k]).epsilon(0.06));
    }
  }

  TEST_CASE("lambda1 = 0, lambda2 = 1 is the prior recentred") {
    const ControlPrior prior;
    Ensemble analysis = sample_prior(prior, 50, 1);
    const auto s = resampling_sigma(analysis, prior, 0.0, 1.0);
    CHECK(s == prior.sigma);
  }

  TEST_CASE("single member uses only the prior term") {
    const ControlPrior prior;
    Ensemble one;
    one.members = {ControlVector{}};
    const auto s = resampling_sigma(one, prior, 0.3, 0.7);
    for (int k = 0; k < kControlSize; ++k) CHECK(s[k] == 0.7 * prior.sigma[k]);
  }

  TEST_CASE("resampling spread never falls below lambda2 sigma") {
    const ControlPrior prior;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto analysis = sample_prior(prior, 2 + static_cast<int>(seed % 30), seed);
      const auto s = resampling_sigma(analysis, prior, 0.3, 0.7);
      for (int k = 0; k < kControlSize; ++k) CHECK(s[k] >= 0.7 * prior.sigma[k]);
    }
  }
}

TEST_SUITE("uncertainty.json") {
  TEST_CASE("prior round trip") {
    ControlPrior prior;
    prior.mean.ks2 = 36.5;
    prior.sigma[6] = 450.0;
    const auto back = prior_from_json(prior_to_json(prior));
    CHECK(back.mean == prior.mean);
    CHECK(back.sigma == prior.sigma);
  }

  TEST_CASE("unknown control key rejected") {
    auto j = control_to_json(ControlVector{});
    j["ks9"] = 3.0;
    CHECK_THROWS_AS(control_from_json(j), InputError);
  }
}

TEST_SUITE("core.rng") {
  TEST_CASE("derived streams are stable and label separated") {
    CHECK(derive_seed(1, "prior", 0) == derive_seed(1, "prior", 0));
    CHECK(derive_seed(1, "prior", 0) != derive_seed(1, "prior", 1));
    CHECK(derive_seed(1, "prior", 0) != derive_seed(1, "resample", 0));
    CHECK(derive_seed(1, "prior", 0) != derive_seed(2, "prior", 0));
  }
}
