#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "floodda/swe/forcing.hpp"
#include "floodda/swe/types.hpp"

namespace floodda::uncertainty {

inline constexpr int kControlSize = 7;
inline constexpr double kMinStrickler = 1.0;

/// Assimilated scalars: four Strickler zones and the inflow coefficients of
/// Q'(t) = a Q(t - c) + b.
struct ControlVector {
  double ks0 = 17.0;
  double ks1 = 45.0;
  double ks2 = 38.0;
  double ks3 = 40.0;
  double a = 1.0;
  double b = 0.0;  // m3/s
  double c = 0.0;  // s

  std::array<double, kControlSize> to_array() const { return {ks0, ks1, ks2, ks3, a, b, c}; }
  static ControlVector from_array(const std::array<double, kControlSize>& x) {
    return {x[0], x[1], x[2], x[3], x[4], x[5], x[6]};
  }
  double operator[](int k) const { return to_array()[k]; }

  swe::FrictionSet friction() const { return swe::FrictionSet{{ks0, ks1, ks2, ks3}}; }

  /// Raises every Strickler component to at least kMinStrickler.
  ControlVector clipped() const;

  bool operator==(const ControlVector&) const = default;
};

/// Column names used in every controls CSV.
inline constexpr std::array<std::string_view, kControlSize> kControlNames{"ks0", "ks1", "ks2", "ks3",
                                                                         "a",   "b",   "c"};

/// Independent Gaussian prior per component.
struct ControlPrior {
  ControlVector mean{};
  std::array<double, kControlSize> sigma{0.85, 2.25, 1.9, 2.0, 0.06, 100.0, 900.0};

  void validate() const;
};

struct Ensemble {
  std::vector<ControlVector> members;
  std::vector<std::uint64_t> seeds;  // per-member stream seed that produced the draw

  std::size_t size() const noexcept { return members.size(); }
  ControlVector mean() const;
  /// Sample standard deviation per component (n - 1 divisor); zero when size < 2.
  std::array<double, kControlSize> stddev() const;
};

/// Q'(t) = max(a Q(t - c) + b, 0) with clamped evaluation of Q.
swe::Inflow perturb_hydrograph(const swe::Hydrograph& q, double a, double b, double c);

inline swe::Inflow perturb_hydrograph(const swe::Hydrograph& q, const ControlVector& x) {
  return perturb_hydrograph(q, x.a, x.b, x.c);
}

/// Draws n_e members from the prior; deterministic in `seed`.
Ensemble sample_prior(const ControlPrior& prior, int n_e, std::uint64_t seed);

/// Per-component spread used when resampling: lambda1 * std(analysis) + lambda2 * sigma_x.
std::array<double, kControlSize> resampling_sigma(const Ensemble& analysis, const ControlPrior& prior,
                                                  double lambda1, double lambda2);

/// New forecast ensemble centred on the analysis mean with resampling_sigma spread.
Ensemble resample_around_mean(const Ensemble& analysis, const ControlPrior& prior, double lambda1,
                              double lambda2, std::uint64_t seed);

}  // namespace floodda::uncertainty
