#pragma once

// Small statistics toolkit used by the estimators and verification checks.

#include <cstddef>
#include <span>
#include <vector>

namespace gcl::stats {

/// Streaming mean/variance (Welford).
class Accumulator {
 public:
  void add(double x);
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance; 0 for fewer than two samples.
  double variance() const;
  /// Standard error of the mean.
  double se() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(std::span<const double> xs);

double normal_cdf(double z);
/// Two-sided p-value of a standard normal statistic.
double normal_two_sided_p(double z);

/// Upper tail of the chi-squared distribution.
double chi2_sf(double stat, double dof);

/// Chi-squared goodness of fit of integer counts against Poisson(mean).
/// Tail cells are pooled so each expected count is at least `min_expected`.
struct Chi2Result {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 0.0;
};
Chi2Result chi2_poisson(std::span<const std::size_t> counts, double mean, double min_expected = 5.0);

/// Asymptotic Kolmogorov distribution upper tail P(K > x).
double kolmogorov_sf(double x);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};
/// One-sample KS against N(mu, sd^2).
KsResult ks_normal(std::vector<double> xs, double mu, double sd);
/// Two-sample KS.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Mann-Kendall trend test (no ties correction); returns two-sided p-value.
double mann_kendall_p(std::span<const double> xs);
/// Mann-Kendall with the Hamed-Rao variance correction for serial
/// correlation (significant rank autocorrelations of the Sen-detrended series).
double mann_kendall_p_corrected(std::span<const double> xs);

}  // namespace gcl::stats
