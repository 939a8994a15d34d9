#pragma once

// Two-sided Monte Carlo checks of the integral identities satisfied by the
// Gibbs measure, its lift and the projected cluster measure. Every check
// evaluates both sides on the same samples and scores the paired difference.

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gcl/calculus.hpp"
#include "gcl/cluster.hpp"
#include "gcl/potential.hpp"
#include "gcl/sampler.hpp"

namespace gcl {

inline constexpr double kDefaultTolSigma = 4.0;

struct IdentityReport {
  std::string identity;
  double lhs = 0.0;
  double rhs = 0.0;
  double lhs_se = 0.0;
  double rhs_se = 0.0;
  /// Standard error of the paired difference (or of the independent
  /// difference for unpaired comparisons).
  double diff_se = 0.0;
  double z = 0.0;
  std::size_t n = 0;
  double tol_sigma = kDefaultTolSigma;
  bool pass = true;
  std::string params_digest;
};

/// Scores per-sample pairs (lhs_i, rhs_i).
IdentityReport paired_report(std::string identity, std::span<const double> lhs, std::span<const double> rhs,
                             double tol_sigma = kDefaultTolSigma);
/// Scores a comparison of two independent means.
IdentityReport independent_report(std::string identity, stats::MeanSe lhs, stats::MeanSe rhs, std::size_t n,
                                  double tol_sigma = kDefaultTolSigma);
/// Scores a sample mean against an exact value.
IdentityReport exact_report(std::string identity, std::span<const double> lhs, double exact,
                            double tol_sigma = kDefaultTolSigma);

/// H(x, gamma) = phi(x) G(gamma) with phi an indicator of a box or a bump
/// and G a bounded cylinder function (G = 1 when absent).
struct GnzTestFunction {
  std::variant<Window, Bump> spatial;
  std::optional<CylinderFunction> functional;
};

/// E sum_{x in gamma} H(x, gamma) = E int H(x, gamma + x) e^{-E({x}, gamma)} theta(dx).
/// The right side integrates over theta restricted to the window by
/// `n_inner` uniform draws per sample from the part of the window where
/// phi is nonzero.
IdentityReport check_gnz(const std::vector<GroundConfiguration>& ensemble, const PairPotential& pot,
                         const ReferenceMeasure& theta, const GnzTestFunction& h, Rng& rng, std::size_t n_inner = 4,
                         double tol_sigma = kDefaultTolSigma);

/// E exp(-<f, q(lifted)>) against E prod_{x in centers} int exp(-sum f(y_i + x)) eta(dy),
/// the inner integral estimated with n_inner fresh clusters per center.
IdentityReport check_laplace_projection(const std::vector<MarkedConfiguration>& marked, const ClusterLaw& law,
                                        const Bump& f, std::size_t n_inner, Rng& rng,
                                        double tol_sigma = kDefaultTolSigma);
/// Samples n_outer configurations of the cluster pipeline first.
IdentityReport check_laplace_projection(const GibbsRunParams& params, const ClusterLaw& law, const Bump& f,
                                        std::size_t n_outer, std::size_t n_inner, Rng& rng,
                                        double tol_sigma = kDefaultTolSigma);

/// Event on the cluster coordinate.
struct MarkEvent {
  enum class Kind { any, size_equals, first_offset_within };
  Kind kind = Kind::any;
  std::size_t size = 0;
  double radius = 0.0;

  bool contains(const ClusterVector& y) const;
  /// eta(A), analytic.
  double probability(const ClusterLaw& law) const;
};

/// E[N(B1 x A1) N(B2 x A2)] = eta(A1) eta(A2) E[gamma(B1) gamma(B2)].
IdentityReport check_correlation_projection(const std::vector<MarkedConfiguration>& marked, const Window& b1,
                                            const Window& b2, const MarkEvent& a1, const MarkEvent& a2,
                                            const ClusterLaw& law, double tol_sigma = kDefaultTolSigma);

/// E F(q(hat_phi(lifted))) = E F(q(lifted)) R(lifted), R computed with `law`.
IdentityReport check_quasi_invariance(const std::vector<MarkedConfiguration>& marked, const Diffeomorphism& phi,
                                      const CylinderFunction& f, const ClusterLaw& law,
                                      double tol_sigma = kDefaultTolSigma);

/// E R = 1.
IdentityReport check_rnd_normalization(const std::vector<MarkedConfiguration>& marked, const Diffeomorphism& phi,
                                       const ClusterLaw& law, double tol_sigma = kDefaultTolSigma);

/// E sum_u grad_u F . v(u) = -E F sum_z beta_v(z), over the projected
/// configurations.
IdentityReport check_ibp(const std::vector<MarkedConfiguration>& marked, const VectorField& v,
                         const CylinderFunction& f, const ClusterLaw& law, double tol_sigma = kDefaultTolSigma);

/// Projected points of a marked configuration, without window bookkeeping.
std::vector<Point> projected_points(const MarkedConfiguration& marked);

}  // namespace gcl
