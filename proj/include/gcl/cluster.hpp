#pragma once

// In-cluster law, the lift of a center configuration to marked
// configurations, the two projections back to the ground space, and the
// droplet-cluster diagnostics for local finiteness and simplicity.

#include <cstdint>
#include <string>
#include <vector>

#include "gcl/core.hpp"
#include "gcl/random.hpp"
#include "gcl/sampler.hpp"

namespace gcl {

/// Distribution of the number of offsets in a cluster.
class SizeDistribution {
 public:
  enum class Kind { fixed, poisson };

  static SizeDistribution fixed(std::size_t n);
  static SizeDistribution poisson(double mean);

  Kind kind() const { return kind_; }
  std::size_t fixed_size() const { return n_; }
  double poisson_mean() const { return lambda_; }

  double probability(std::size_t n) const;
  /// log P(size = n); -inf when the size is impossible.
  double log_probability(std::size_t n) const;
  double mean() const;
  double second_moment() const;
  /// Largest size with positive probability (SIZE_MAX for Poisson).
  std::size_t max_size() const;
  std::size_t sample(Rng& rng) const;

 private:
  Kind kind_ = Kind::fixed;
  std::size_t n_ = 0;
  double lambda_ = 0.0;
};

/// eta(dy) = h(y) dy with h(y_1..y_n) = P(size = n) prod_i g(y_i), g the
/// isotropic centered Gaussian density with standard deviation `offset_std`.
class ClusterLaw {
 public:
  ClusterLaw(SizeDistribution size, double offset_std, int dim);

  const SizeDistribution& size() const { return size_; }
  double offset_std() const { return s_; }
  int dim() const { return dim_; }

  /// log g(y) for a single offset.
  double log_offset_density(const Point& y) const;
  /// log h(y); -inf when P(size = n) = 0.
  double log_h(const ClusterVector& y) const;
  double log_h(std::span<const Point> offsets) const;

  ClusterLaw with_offset_std(double s) const { return {size_, s, dim_}; }

 private:
  SizeDistribution size_;
  double s_;
  int dim_;
};

ClusterVector sample_cluster(const ClusterLaw& law, Rng& rng);

/// Attaches an independent cluster to every center.
MarkedConfiguration lift(const GroundConfiguration& centers, const ClusterLaw& law, Rng& rng);

/// Centers of a marked configuration.
GroundConfiguration project_px(const MarkedConfiguration& marked);

/// Raised by project_q when two projected points coincide.
class ProjectionCoincidenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Margin, in offset standard deviations, by which the projected window
/// extends the center window.
inline constexpr double kProjectionMarginSd = 6.0;

/// Union over marked points of {x + y_i}. The result lives in the center
/// window grown by `margin` (enlarged further if some point lies beyond it).
GroundConfiguration project_q(const MarkedConfiguration& marked, double margin);
/// Same with margin = 6 * law.offset_std().
GroundConfiguration project_q(const MarkedConfiguration& marked, const ClusterLaw& law);

struct ClusterProcessSample {
  GroundConfiguration centers;
  MarkedConfiguration marked;
  GroundConfiguration projected;
};

/// One Gibbs center draw (burn-in from params, chain seeded from rng), its
/// lift and its projection.
ClusterProcessSample sample_cluster_process(const GibbsRunParams& params, const ClusterLaw& law, Rng& rng);

/// Lifts every configuration of a Gibbs ensemble; deterministic in `seed`.
std::vector<MarkedConfiguration> lift_ensemble(const std::vector<GroundConfiguration>& centers, const ClusterLaw& law,
                                               std::uint64_t seed);

struct DropletMeasure {
  double value = 0.0;
  /// Standard error of the quasi-Monte Carlo estimate; 0 when exact.
  double error = 0.0;
  bool exact = true;
};

/// theta(union_i (B - y_i)) for theta = intensity * Lebesgue on R^d.
/// Exact inclusion-exclusion for n <= 4, randomized QMC otherwise.
DropletMeasure droplet_theta_measure(const Window& b, const ClusterVector& y, double intensity);

enum class ConditionStatus { pass, fail, not_applicable };
std::string to_string(ConditionStatus s);

struct DiagnosticsReport {
  double mean_cluster_size = 0.0;
  double second_moment = 0.0;
  double empirical_mean_size = 0.0;
  /// Monte Carlo estimate of sigma(Z_B) = E theta(D_B(y)).
  double sigma_zb = 0.0;
  double sigma_zb_se = 0.0;
  /// E[N] * theta(B), the subadditivity upper bound on sigma(Z_B).
  double sigma_zb_union_bound = 0.0;
  std::size_t n_mc = 0;
  ConditionStatus a_i = ConditionStatus::pass;
  ConditionStatus a_ii = ConditionStatus::pass;
  ConditionStatus b_i = ConditionStatus::pass;
  ConditionStatus b_ii = ConditionStatus::pass;
};

DiagnosticsReport diagnose(const ClusterLaw& law, double intensity, const Window& b, std::size_t n_mc, Rng& rng);

}  // namespace gcl
