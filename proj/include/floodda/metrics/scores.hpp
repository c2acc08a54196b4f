#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "floodda/swe/types.hpp"

namespace floodda::metrics {

/// Time-aligned model and observed water levels.
struct SeriesPair {
  std::vector<double> t;
  std::vector<double> model;
  std::vector<double> obs;

  void push(double time, double h_model, double h_obs) {
    t.push_back(time);
    model.push_back(h_model);
    obs.push_back(h_obs);
  }
  std::size_t size() const noexcept { return obs.size(); }
};

double rmse(const SeriesPair& p);
double maae(const SeriesPair& p);
/// Nash-Sutcliffe efficiency. Throws InputError for n < 2 or constant obs.
double nse(const SeriesPair& p);

/// Binary raster (1 = wet) with an optional exclusion raster (1 = excluded).
struct FloodMask {
  int nx = 0;
  int ny = 0;
  std::vector<std::uint8_t> wet;
  std::vector<std::uint8_t> exclusion;  // empty = nothing excluded

  std::size_t size() const noexcept { return wet.size(); }
  bool excluded(std::size_t k) const noexcept { return !exclusion.empty() && exclusion[k] != 0; }
};

struct ContingencyCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const noexcept { return tp + fp + tn + fn; }
  bool operator==(const ContingencyCounts&) const = default;
};

/// Raster codes for contingency maps.
enum class Outcome : std::uint8_t { excluded = 0, true_positive = 1, true_negative = 2, false_positive = 3, false_negative = 4 };

struct Contingency {
  ContingencyCounts counts;
  std::vector<Outcome> raster;
};

/// Pixelwise tally of `sim` against `obs`, skipping pixels excluded by
/// `exclusion` or by either mask's own exclusion raster.
Contingency contingency(const FloodMask& sim, const FloodMask& obs, const std::vector<std::uint8_t>* exclusion = nullptr);

/// Counts only, OpenMP reduction. Equal to contingency().counts.
ContingencyCounts contingency_counts_parallel(const FloodMask& sim, const FloodMask& obs,
                                              const std::vector<std::uint8_t>* exclusion = nullptr);

/// TP / (TP + FP + FN); nullopt when both masks are entirely dry.
std::optional<double> csi(const ContingencyCounts& c);

/// (1 + b^2) P R / (b^2 P + R). Zero when TP = 0 with a non-empty
/// denominator; nullopt when TP = FP = FN = 0.
std::optional<double> f_beta(const ContingencyCounts& c, double beta = 1.0);

enum class KappaMode { paper, standard };

/// Cohen's kappa. `paper` uses p_e = ((TP+FN)/N)((TP+FP)/N) only; `standard`
/// adds the negative-class chance agreement. nullopt when p_e == 1 or N == 0.
std::optional<double> kappa(const ContingencyCounts& c, KappaMode mode = KappaMode::paper);

inline constexpr double kFloodThreshold = 0.05;

/// Wet where h > threshold (strict).
FloodMask rasterize_flood_mask(const swe::RiverState& state, const swe::ScenarioGrid& grid,
                               double threshold = kFloodThreshold);

}  // namespace floodda::metrics
