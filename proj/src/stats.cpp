#include "gcl/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

namespace gcl::stats {

void Accumulator::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

double Accumulator::variance() const { return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1); }

double Accumulator::se() const { return n_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_)); }

MeanSe mean_se(std::span<const double> xs) {
  Accumulator acc;
  for (double x : xs) acc.add(x);
  return {acc.mean(), acc.se()};
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_two_sided_p(double z) { return std::erfc(std::abs(z) / std::numbers::sqrt2); }

double chi2_sf(double stat, double dof) {
  if (dof <= 0) return 1.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, std::max(stat, 0.0)));
}

Chi2Result chi2_poisson(std::span<const std::size_t> counts, double mean, double min_expected) {
  if (counts.empty()) throw std::invalid_argument("chi2_poisson: no observations");
  if (!(mean > 0)) throw std::invalid_argument("chi2_poisson: mean must be positive");
  const double n = static_cast<double>(counts.size());
  const std::size_t kmax = *std::max_element(counts.begin(), counts.end());
  std::vector<double> observed(kmax + 1, 0.0);
  for (auto k : counts) observed[k] += 1.0;

  boost::math::poisson_distribution<> pois(mean);
  // Cells [lo, hi] built left to right; last cell absorbs the upper tail.
  struct Cell {
    double obs = 0.0, expd = 0.0;
  };
  std::vector<Cell> cells;
  Cell cur;
  const std::size_t top = std::max<std::size_t>(kmax, static_cast<std::size_t>(mean * 3 + 10));
  for (std::size_t k = 0; k <= top; ++k) {
    cur.obs += k < observed.size() ? observed[k] : 0.0;
    cur.expd += n * boost::math::pdf(pois, static_cast<double>(k));
    if (cur.expd >= min_expected) {
      cells.push_back(cur);
      cur = {};
    }
  }
  // Upper tail beyond `top`.
  cur.expd += n * boost::math::cdf(boost::math::complement(pois, static_cast<double>(top)));
  if (cells.empty()) {
    cells.push_back(cur);
  } else {
    cells.back().obs += cur.obs;
    cells.back().expd += cur.expd;
  }
  Chi2Result r;
  for (const auto& c : cells) r.statistic += (c.obs - c.expd) * (c.obs - c.expd) / c.expd;
  r.dof = static_cast<double>(cells.size()) - 1.0;
  r.p_value = chi2_sf(r.statistic, r.dof);
  return r;
}

double kolmogorov_sf(double x) {
  if (x <= 0) return 1.0;
  if (x < 0.2) return 1.0;
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    s += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

namespace {
// Stephens' finite-sample correction for the KS statistic.
double ks_scale(double en) { return std::sqrt(en) + 0.12 + 0.11 / std::sqrt(en); }
}  // namespace

KsResult ks_normal(std::vector<double> xs, double mu, double sd) {
  if (xs.empty()) throw std::invalid_argument("ks_normal: empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = normal_cdf((xs[i] - mu) / sd);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, kolmogorov_sf(ks_scale(n) * d)};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return {d, kolmogorov_sf(ks_scale(na * nb / (na + nb)) * d)};
}

double mann_kendall_p(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 3) return 1.0;
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = xs[j] - xs[i];
      s += (d > 0) - (d < 0);
    }
  const double nn = static_cast<double>(n);
  const double var = nn * (nn - 1) * (2 * nn + 5) / 18.0;
  const double z = s > 0 ? (s - 1) / std::sqrt(var) : s < 0 ? (s + 1) / std::sqrt(var) : 0.0;
  return normal_two_sided_p(z);
}

double mann_kendall_p_corrected(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 3) return 1.0;
  double s = 0.0;
  std::vector<double> slopes;
  slopes.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = xs[j] - xs[i];
      s += (d > 0) - (d < 0);
      slopes.push_back(d / static_cast<double>(j - i));
    }
  // Sen's slope, then ranks of the detrended series.
  std::nth_element(slopes.begin(), slopes.begin() + static_cast<std::ptrdiff_t>(slopes.size() / 2), slopes.end());
  const double beta = slopes[slopes.size() / 2];
  std::vector<double> resid(n);
  for (std::size_t i = 0; i < n; ++i) resid[i] = xs[i] - beta * static_cast<double>(i);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return resid[a] < resid[b]; });
  std::vector<double> rank(n);
  for (std::size_t r = 0; r < n; ++r) rank[order[r]] = static_cast<double>(r);
  const double nn = static_cast<double>(n);
  const double mean = (nn - 1) / 2.0;
  double c0 = 0.0;
  for (double r : rank) c0 += (r - mean) * (r - mean);
  double sum = 0.0;
  const double bound = 1.96 / std::sqrt(nn);
  for (std::size_t k = 1; k + 2 < n; ++k) {
    double ck = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) ck += (rank[i] - mean) * (rank[i + k] - mean);
    const double rho = ck / c0;
    if (std::abs(rho) <= bound) continue;
    const double m = static_cast<double>(n - k);
    sum += m * (m - 1) * (m - 2) * rho;
  }
  const double factor = std::max(1.0, 1.0 + 2.0 * sum / (nn * (nn - 1) * (nn - 2)));
  const double var = nn * (nn - 1) * (2 * nn + 5) / 18.0 * factor;
  const double z = s > 0 ? (s - 1) / std::sqrt(var) : s < 0 ? (s + 1) / std::sqrt(var) : 0.0;
  return normal_two_sided_p(z);
}

}  // namespace gcl::stats
