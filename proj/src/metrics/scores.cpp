#include "floodda/metrics/scores.hpp"

#include <algorithm>
#include <cmath>

#include "floodda/core/error.hpp"

namespace floodda::metrics {
namespace {

void check_pair(const SeriesPair& p, std::size_t min_size, const char* what) {
  if (p.model.size() != p.obs.size() || p.t.size() != p.obs.size()) {
    throw InputError(std::string(what) + ": model and observation series differ in length");
  }
  if (p.size() < min_size) {
    throw InputError(std::string(what) + ": needs at least " + std::to_string(min_size) + " samples");
  }
}

void check_dims(const FloodMask& sim, const FloodMask& obs, const std::vector<std::uint8_t>* exclusion) {
  if (sim.nx != obs.nx || sim.ny != obs.ny || sim.wet.size() != obs.wet.size()) {
    throw InputError("contingency: mask dimensions differ");
  }
  if (exclusion && exclusion->size() != sim.wet.size()) throw InputError("contingency: exclusion dimensions differ");
  if (!sim.exclusion.empty() && sim.exclusion.size() != sim.wet.size()) {
    throw InputError("contingency: exclusion dimensions differ");
  }
  if (!obs.exclusion.empty() && obs.exclusion.size() != obs.wet.size()) {
    throw InputError("contingency: exclusion dimensions differ");
  }
}

inline Outcome classify(const FloodMask& sim, const FloodMask& obs, const std::vector<std::uint8_t>* exclusion,
                        std::size_t k) {
  if (sim.excluded(k) || obs.excluded(k) || (exclusion && (*exclusion)[k])) return Outcome::excluded;
  const bool s = sim.wet[k] != 0;
  const bool o = obs.wet[k] != 0;
  if (s && o) return Outcome::true_positive;
  if (!s && !o) return Outcome::true_negative;
  return s ? Outcome::false_positive : Outcome::false_negative;
}

}  // namespace

double rmse(const SeriesPair& p) {
  check_pair(p, 1, "rmse");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += (p.model[i] - p.obs[i]) * (p.model[i] - p.obs[i]);
  return std::sqrt(sum / static_cast<double>(p.size()));
}

double maae(const SeriesPair& p) {
  check_pair(p, 1, "maae");
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) worst = std::max(worst, std::abs(p.model[i] - p.obs[i]));
  return worst;
}

double nse(const SeriesPair& p) {
  check_pair(p, 2, "nse");
  double mean = 0.0;
  for (double o : p.obs) mean += o;
  mean /= static_cast<double>(p.size());
  double err = 0.0, var = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    err += (p.model[i] - p.obs[i]) * (p.model[i] - p.obs[i]);
    var += (p.obs[i] - mean) * (p.obs[i] - mean);
  }
  if (!(var > 0.0)) throw InputError("nse: observations are constant");
  return 1.0 - err / var;
}

Contingency contingency(const FloodMask& sim, const FloodMask& obs, const std::vector<std::uint8_t>* exclusion) {
  check_dims(sim, obs, exclusion);
  Contingency out;
  out.raster.resize(sim.size());
  for (std::size_t k = 0; k < sim.size(); ++k) {
    const Outcome o = classify(sim, obs, exclusion, k);
    out.raster[k] = o;
    switch (o) {
      case Outcome::true_positive: ++out.counts.tp; break;
      case Outcome::true_negative: ++out.counts.tn; break;
      case Outcome::false_positive: ++out.counts.fp; break;
      case Outcome::false_negative: ++out.counts.fn; break;
      case Outcome::excluded: break;
    }
  }
  return out;
}

ContingencyCounts contingency_counts_parallel(const FloodMask& sim, const FloodMask& obs,
                                              const std::vector<std::uint8_t>* exclusion) {
  check_dims(sim, obs, exclusion);
  std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
  const auto n = static_cast<std::ptrdiff_t>(sim.size());
#pragma omp parallel for schedule(static) reduction(+ : tp, fp, tn, fn)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    switch (classify(sim, obs, exclusion, static_cast<std::size_t>(k))) {
      case Outcome::true_positive: ++tp; break;
      case Outcome::true_negative: ++tn; break;
      case Outcome::false_positive: ++fp; break;
      case Outcome::false_negative: ++fn; break;
      case Outcome::excluded: break;
    }
  }
  return {tp, fp, tn, fn};
}

std::optional<double> csi(const ContingencyCounts& c) {
  const auto denom = c.tp + c.fp + c.fn;
  if (denom == 0) return std::nullopt;
  return static_cast<double>(c.tp) / static_cast<double>(denom);
}

std::optional<double> f_beta(const ContingencyCounts& c, double beta) {
  if (c.tp + c.fp + c.fn == 0) return std::nullopt;
  if (c.tp == 0) return 0.0;
  const double precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  const double recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  const double b2 = beta * beta;
  return (1.0 + b2) * precision * recall / (b2 * precision + recall);
}

std::optional<double> kappa(const ContingencyCounts& c, KappaMode mode) {
  const auto total = c.total();
  if (total == 0) return std::nullopt;
  const double n = static_cast<double>(total);
  const double p_o = static_cast<double>(c.tp + c.tn) / n;
  double p_e = (static_cast<double>(c.tp + c.fn) / n) * (static_cast<double>(c.tp + c.fp) / n);
  if (mode == KappaMode::standard) {
    p_e += (static_cast<double>(c.tn + c.fp) / n) * (static_cast<double>(c.tn + c.fn) / n);
  }
  if (p_e == 1.0) return std::nullopt;
  return (p_o - p_e) / (1.0 - p_e);
}

FloodMask rasterize_flood_mask(const swe::RiverState& state, const swe::ScenarioGrid& grid, double threshold) {
  if (state.h.size() != static_cast<std::size_t>(grid.cell_count())) {
    throw InputError("rasterize_flood_mask: state does not match the grid");
  }
  FloodMask mask;
  mask.nx = grid.nx;
  mask.ny = grid.ny;
  mask.wet.resize(state.h.size());
  for (std::size_t k = 0; k < state.h.size(); ++k) mask.wet[k] = state.h[k] > threshold ? 1 : 0;
  return mask;
}

}  // namespace floodda::metrics
