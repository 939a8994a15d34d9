#include <doctest.h>

#include <cmath>
#include <numeric>

#include "gcl/sampler.hpp"

using namespace gcl;

namespace {

// Count distribution of hard-core rods on [0, 1]: the ordered n-tuples with
// all gaps above r0 have volume (1 - (n - 1) r0)^n.
std::vector<double> hard_core_rod_law(double z, double r0) {
  std::vector<double> w;
  double fact = 1.0;
  for (int n = 0;; ++n) {
    if (n > 0) fact *= n;
    const double free = 1.0 - (n - 1) * r0;
    if (n > 1 && free <= 0) break;
    w.push_back(std::pow(z, n) / fact * (n == 0 ? 1.0 : std::pow(free, n)));
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= total;
  return w;
}

// Midpoint quadrature of the admissible volume for n = 2, 3.
double admissible_volume(int n, double r0, int m) {
  const double h = 1.0 / m;
  double vol = 0.0;
  if (n == 2) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) vol += std::abs((i - j) * h) > r0 ? 1.0 : 0.0;
    return vol * h * h;
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (std::abs((i - j) * h) <= r0) continue;
      for (int k = 0; k < m; ++k)
        if (std::abs((i - k) * h) > r0 && std::abs((j - k) * h) > r0) vol += 1.0;
    }
  return vol * h * h * h;
}

GibbsRunParams params_for(PairPotential pot, double intensity, Window w, std::size_t n, std::uint64_t seed) {
  GibbsRunParams p = default_run_params(std::move(pot), ReferenceMeasure(intensity, w));
  p.n_samples = n;
  p.burn_in = 20000;
  p.thinning = 500;
  p.seed = seed;
  return p;
}

}  // namespace

TEST_SUITE("sampler") {
  TEST_CASE("rod volumes by quadrature match the closed form") {
    const double r0 = 0.3;
    CHECK(admissible_volume(2, r0, 2000) == doctest::Approx(std::pow(1 - r0, 2)).epsilon(2e-3));
    CHECK(admissible_volume(3, r0, 300) == doctest::Approx(std::pow(1 - 2 * r0, 3)).epsilon(2e-2));
  }

  TEST_CASE("poisson sampling") {
    const ReferenceMeasure theta(50.0, Window::unit(2));
    Rng rng = make_rng(11);
    stats::Accumulator acc;
    for (int i = 0; i < 4000; ++i) acc.add(static_cast<double>(sample_poisson(theta, rng).size()));
    CHECK(std::abs(acc.mean() - 50.0) < 4 * acc.se());
    // Variance of the sample variance of a Poisson(50) is about 2 * 50^2 / n.
    CHECK(std::abs(acc.variance() - 50.0) < 4 * std::sqrt(2.0 * 2500.0 / 4000.0));
    CHECK_THROWS_AS(ReferenceMeasure(-1.0, Window::unit(2)), InvariantError);
  }

  TEST_CASE("ideal gas chain has Poisson counts") {
    const auto p = params_for(PairPotential::zero(), 20.0, Window::unit(2), 2000, 12);
    const auto ens = sample_gibbs(p);
    std::vector<std::size_t> counts;
    for (const auto& g : ens.samples) counts.push_back(g.size());
    CHECK(stats::chi2_poisson(counts, 20.0).p_value > 0.001);
  }

  TEST_CASE("hard-core rods match the exact count law") {
    const double r0 = 0.3, z = 2.0;
    auto p = params_for(PairPotential::hard_core(r0), z, Window::unit(1), 20000, 13);
    p.thinning = 10;
    const auto ens = sample_gibbs(p);
    const auto law = hard_core_rod_law(z, r0);
    REQUIRE(law.size() == 5);
    std::vector<double> freq(law.size(), 0.0);
    for (const auto& g : ens.samples) {
      REQUIRE(g.size() < law.size());
      freq[g.size()] += 1.0;
    }
    // Pool 3 and 4, then a chi-squared test.
    const double n = static_cast<double>(ens.samples.size());
    std::vector<double> obs = {freq[0], freq[1], freq[2], freq[3] + freq[4]};
    std::vector<double> exp = {law[0] * n, law[1] * n, law[2] * n, (law[3] + law[4]) * n};
    double chi2 = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) chi2 += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
    CHECK(stats::chi2_sf(chi2, 3.0) > 0.001);
  }

  TEST_CASE("two-state chain satisfies detailed balance") {
    // A hard core longer than the window caps the count at 1.
    const double z = 2.0;
    GibbsRunParams p = default_run_params(PairPotential::hard_core(1.5), ReferenceMeasure(z, Window::unit(1)));
    p.seed = 14;
    GibbsChain chain(p);
    const std::size_t steps = 400000;
    double visits[2] = {0, 0}, jumps[2] = {0, 0};
    std::size_t prev = chain.size();
    for (std::size_t t = 0; t < steps; ++t) {
      chain.step();
      const std::size_t cur = chain.size();
      REQUIRE(cur <= 1);
      visits[prev] += 1;
      if (cur != prev) jumps[prev] += 1;
      prev = cur;
    }
    const double p01 = jumps[0] / visits[0], p10 = jumps[1] / visits[1];
    const double e01 = p.move_mix.birth * std::min(1.0, z * p.move_mix.death / p.move_mix.birth);
    const double e10 = p.move_mix.death * std::min(1.0, p.move_mix.birth / (z * p.move_mix.death));
    CHECK(std::abs(p01 - e01) < 4 * std::sqrt(e01 * (1 - e01) / visits[0]));
    CHECK(std::abs(p10 - e10) < 4 * std::sqrt(e10 * (1 - e10) / visits[1]));
    const double pi0 = 1.0 / (1.0 + z), pi1 = z / (1.0 + z);
    const double se = std::sqrt(pi0 * pi0 * e01 * (1 - e01) / visits[0] + pi1 * pi1 * e10 * (1 - e10) / visits[1]);
    CHECK(std::abs(pi0 * p01 - pi1 * p10) < 4 * se);
  }

  TEST_CASE("same seed gives identical ensembles") {
    const auto p = params_for(PairPotential::soft_repulsive(2.0, 0.1), 50.0, Window::unit(2), 200, 15);
    const auto a = sample_gibbs(p), b = sample_gibbs(p);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(a.samples[i].points() == b.samples[i].points());
  }

  TEST_CASE("acceptance rates lie strictly inside (0, 1) for a hard core") {
    const auto ens = sample_gibbs(params_for(PairPotential::hard_core(0.05), 50.0, Window::unit(2), 200, 16));
    for (auto k : {MoveKind::birth, MoveKind::death, MoveKind::move}) {
      CHECK(ens.acceptance.rate(k) > 0.0);
      CHECK(ens.acceptance.rate(k) < 1.0);
    }
  }

  TEST_CASE("correlation estimates") {
    const Window w = Window::unit(2);
    const ReferenceMeasure theta(50.0, w);
    const auto poisson = sample_gibbs(params_for(PairPotential::zero(), 50.0, w, 3000, 17));
    std::vector<Window> bins;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) bins.emplace_back(Point{0.5 * i, 0.5 * j}, Point{0.5 * i + 0.5, 0.5 * j + 0.5});
    for (const auto& k : estimate_kappa1(poisson.samples, bins, theta)) CHECK(std::abs(k.mean - 1.0) < 4 * k.se);
    const auto k2 = estimate_kappa2(poisson.samples, bins[0], bins[3], theta);
    CHECK(std::abs(k2.mean - 2.0) < 4 * k2.se);

    const auto hc = sample_gibbs(params_for(PairPotential::hard_core(0.08), 50.0, w, 3000, 18));
    const auto k1 = estimate_kappa1(hc.samples, {w}, theta);
    CHECK(k1[0].mean + 4 * k1[0].se < 1.0);
    // Far-apart corners decorrelate.
    const Window c1(Point{0.0, 0.0}, Point{0.3, 0.3}), c2(Point{0.7, 0.7}, Point{1.0, 1.0});
    const auto a = estimate_kappa1(hc.samples, {c1, c2}, theta);
    const auto k2h = estimate_kappa2(hc.samples, c1, c2, theta);
    const double se = std::hypot(k2h.se, 2 * a[1].mean * a[0].se, 2 * a[0].mean * a[1].se);
    CHECK(std::abs(k2h.mean - 2 * a[0].mean * a[1].mean) < 4 * se);

    CHECK_THROWS(estimate_kappa2(poisson.samples, bins[0], bins[0], theta));
    CHECK_THROWS(estimate_kappa1(poisson.samples, {Window(Point{2.0, 2.0}, Point{3.0, 3.0})}, theta));
    CHECK_THROWS(estimate_kappa1({}, bins, theta));
  }

  TEST_CASE("empty bins estimate zero") {
    const Window w = Window::unit(2);
    std::vector<GroundConfiguration> ens(10, GroundConfiguration(w));
    const auto k = estimate_kappa1(ens, {w}, ReferenceMeasure(5.0, w));
    CHECK(k[0].mean == 0.0);
  }
}
