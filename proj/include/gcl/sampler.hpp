#pragma once

// Poisson sampling and birth-death-move Metropolis-Hastings for the
// finite-volume Gibbs measure with density exp(-E) against the
// Lebesgue-Poisson measure of theta restricted to the window (empty boundary
// condition).

#include <cstdint>
#include <optional>
#include <vector>

#include "gcl/core.hpp"
#include "gcl/potential.hpp"
#include "gcl/random.hpp"
#include "gcl/stats.hpp"

namespace gcl {

/// theta = intensity * Lebesgue, restricted to `window`.
class ReferenceMeasure {
 public:
  ReferenceMeasure(double intensity, Window window);

  double intensity() const { return intensity_; }
  const Window& window() const { return window_; }
  /// theta(window).
  double mass() const { return intensity_ * window_.volume(); }
  /// theta(B) = intensity * vol(B intersect window).
  double measure(const Window& b) const { return intensity_ * window_.overlap_volume(b); }

 private:
  double intensity_;
  Window window_;
};

struct MoveMix {
  double birth = 0.35;
  double death = 0.35;
  double move = 0.30;
};

struct GibbsRunParams {
  PairPotential potential;
  ReferenceMeasure theta;
  std::size_t n_samples = 1000;
  std::size_t burn_in = 100000;
  std::size_t thinning = 100;
  MoveMix move_mix;
  /// Standard deviation of the Gaussian move proposal.
  double move_scale = 0.1;
  std::uint64_t seed = 1;

  /// Throws InvariantError on invalid settings.
  void validate() const;
};

/// Defaults with move_scale = 0.1 * (smallest window side).
GibbsRunParams default_run_params(PairPotential potential, ReferenceMeasure theta);

enum class MoveKind { birth = 0, death = 1, move = 2 };

struct AcceptanceStats {
  std::array<std::uint64_t, 3> proposed{};
  std::array<std::uint64_t, 3> accepted{};
  double rate(MoveKind k) const;
};

struct ChainState {
  std::vector<Point> points;
  ExtendedReal cached_energy = 0.0;
  std::uint64_t step_counter = 0;
  Rng rng;
  AcceptanceStats stats;
};

/// Owns one chain. Starts from the empty configuration.
class GibbsChain {
 public:
  explicit GibbsChain(GibbsRunParams params);
  GibbsChain(GibbsRunParams params, ChainState state);

  /// One Metropolis-Hastings proposal; returns the proposal kind.
  MoveKind step();
  void run(std::size_t n_steps);

  const ChainState& state() const { return state_; }
  std::size_t size() const { return state_.points.size(); }
  GroundConfiguration snapshot() const;
  const GibbsRunParams& params() const { return params_; }

 private:
  void rebuild_grid();
  void add_point(const Point& p);
  void remove_point(std::size_t i);
  Point reflect(Point p) const;

  GibbsRunParams params_;
  ChainState state_;
  std::optional<NeighborGrid> grid_;
};

GroundConfiguration sample_poisson(const ReferenceMeasure& theta, Rng& rng);

/// Functional form of one chain step.
ChainState bdm_step(ChainState state, const GibbsRunParams& params);

struct GibbsEnsemble {
  std::vector<GroundConfiguration> samples;
  AcceptanceStats acceptance;
  /// Point count at every collected sample (trace for mixing inspection).
  std::vector<std::size_t> count_trace;
};

/// Burn-in, then every `thinning`-th state. Deterministic in params.seed.
GibbsEnsemble sample_gibbs(const GibbsRunParams& params);

/// Per-bin kappa^1 estimate: mean gamma(B) / theta(B).
std::vector<stats::MeanSe> estimate_kappa1(const std::vector<GroundConfiguration>& ensemble,
                                           const std::vector<Window>& bins, const ReferenceMeasure& theta);

/// 2 E[gamma(B1) gamma(B2)] / (theta(B1) theta(B2)) for disjoint B1, B2.
stats::MeanSe estimate_kappa2(const std::vector<GroundConfiguration>& ensemble, const Window& b1, const Window& b2,
                              const ReferenceMeasure& theta);

}  // namespace gcl
