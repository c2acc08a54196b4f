#include "floodda/uncertainty/control.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "floodda/core/error.hpp"
#include "floodda/core/rng.hpp"

namespace floodda::uncertainty {
namespace {

Ensemble draw(const std::array<double, kControlSize>& centre, const std::array<double, kControlSize>& sigma,
              int n_e, std::uint64_t seed) {
  if (n_e < 1) throw InputError("ensemble size must be at least 1");
  Ensemble ens;
  ens.members.reserve(n_e);
  ens.seeds.reserve(n_e);
  for (int i = 0; i < n_e; ++i) {
    const std::uint64_t member_seed = derive_seed(seed, "member", static_cast<std::uint64_t>(i));
    Rng rng(member_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::array<double, kControlSize> x{};
    for (int k = 0; k < kControlSize; ++k) x[k] = centre[k] + sigma[k] * normal(rng);
    ens.members.push_back(ControlVector::from_array(x).clipped());
    ens.seeds.push_back(member_seed);
  }
  return ens;
}

}  // namespace

ControlVector ControlVector::clipped() const {
  ControlVector x = *this;
  x.ks0 = std::max(x.ks0, kMinStrickler);
  x.ks1 = std::max(x.ks1, kMinStrickler);
  x.ks2 = std::max(x.ks2, kMinStrickler);
  x.ks3 = std::max(x.ks3, kMinStrickler);
  return x;
}

void ControlPrior::validate() const {
  for (int k = 0; k < kControlSize; ++k) {
    if (!(sigma[k] > 0.0)) throw InputError("prior: sigma of " + std::string(kControlNames[k]) + " must be positive");
  }
}

ControlVector Ensemble::mean() const {
  std::array<double, kControlSize> m{};
  for (const auto& x : members) {
    const auto a = x.to_array();
    for (int k = 0; k < kControlSize; ++k) m[k] += a[k];
  }
  for (double& v : m) v /= static_cast<double>(members.size());
  return ControlVector::from_array(m);
}

std::array<double, kControlSize> Ensemble::stddev() const {
  std::array<double, kControlSize> s{};
  if (members.size() < 2) return s;
  const auto m = mean().to_array();
  for (const auto& x : members) {
    const auto a = x.to_array();
    for (int k = 0; k < kControlSize; ++k) s[k] += (a[k] - m[k]) * (a[k] - m[k]);
  }
  for (double& v : s) v = std::sqrt(v / static_cast<double>(members.size() - 1));
  return s;
}

swe::Inflow perturb_hydrograph(const swe::Hydrograph& q, double a, double b, double c) {
  return swe::Inflow{q, a, b, c};
}

Ensemble sample_prior(const ControlPrior& prior, int n_e, std::uint64_t seed) {
  prior.validate();
  if (n_e < 2) throw InputError("sample_prior: ensemble size must be at least 2");
  return draw(prior.mean.to_array(), prior.sigma, n_e, seed);
}

std::array<double, kControlSize> resampling_sigma(const Ensemble& analysis, const ControlPrior& prior,
                                                  double lambda1, double lambda2) {
  const auto spread = analysis.stddev();
  std::array<double, kControlSize> sigma{};
  for (int k = 0; k < kControlSize; ++k) sigma[k] = lambda1 * spread[k] + lambda2 * prior.sigma[k];
  return sigma;
}

Ensemble resample_around_mean(const Ensemble& analysis, const ControlPrior& prior, double lambda1,
                              double lambda2, std::uint64_t seed) {
  if (analysis.members.empty()) throw InputError("resample_around_mean: empty analysis ensemble");
  if (lambda1 < 0.0 || lambda2 < 0.0) throw InputError("resample_around_mean: lambdas must be non-negative");
  prior.validate();
  return draw(analysis.mean().to_array(), resampling_sigma(analysis, prior, lambda1, lambda2),
              static_cast<int>(analysis.members.size()), seed);
}

}  // namespace floodda::uncertainty
