#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gcl/cluster.hpp"

using namespace gcl;

namespace {

// Length of a union of intervals [a_i, b_i].
double union_length(std::vector<std::pair<double, double>> iv) {
  std::sort(iv.begin(), iv.end());
  double total = 0.0, lo = iv[0].first, hi = iv[0].second;
  for (std::size_t i = 1; i < iv.size(); ++i) {
    if (iv[i].first > hi) {
      total += hi - lo;
      lo = iv[i].first;
    }
    hi = std::max(hi, iv[i].second);
  }
  return total + hi - lo;
}

double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// int_a^b [Phi(u / s) - Phi((u - 1) / s)] du by Simpson's rule.
double smeared_mass(double a, double b, double s) {
  const int m = 2000;
  const double h = (b - a) / m;
  double acc = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double u = a + i * h;
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * (phi(u / s) - phi((u - 1) / s));
  }
  return acc * h / 3.0;
}

}  // namespace

TEST_SUITE("cluster") {
  TEST_CASE("size distributions") {
    const auto f = SizeDistribution::fixed(3);
    CHECK(f.probability(3) == 1.0);
    CHECK(f.probability(2) == 0.0);
    CHECK(std::isinf(f.log_probability(2)));
    CHECK(f.mean() == 3.0);
    CHECK(f.second_moment() == 9.0);
    const auto p = SizeDistribution::poisson(2.0);
    CHECK(p.probability(1) == doctest::Approx(2.0 * std::exp(-2.0)));
    CHECK(p.second_moment() == doctest::Approx(6.0));
    CHECK_THROWS_AS(SizeDistribution::poisson(-1.0), InvariantError);
  }

  TEST_CASE("log h") {
    const ClusterLaw law(SizeDistribution::poisson(2.0), 0.1, 2);
    const ClusterVector y({Point{0.1, 0.0}, Point{0.0, -0.2}});
    const double log_g = [](double r2) { return -std::log(2 * M_PI * 0.01) - r2 / (2 * 0.01); }(0.01) +
                         [](double r2) { return -std::log(2 * M_PI * 0.01) - r2 / (2 * 0.01); }(0.04);
    CHECK(law.log_h(y) == doctest::Approx(std::log(2.0 * std::exp(-2.0)) + log_g));
    CHECK(std::isinf(ClusterLaw(SizeDistribution::fixed(1), 0.1, 2).log_h(y)));
    CHECK_THROWS_AS(ClusterLaw(SizeDistribution::fixed(1), 0.0, 2), InvariantError);
  }

  TEST_CASE("sample_cluster") {
    Rng rng = make_rng(21);
    CHECK(sample_cluster(ClusterLaw(SizeDistribution::fixed(0), 0.1, 2), rng).empty());
    const ClusterLaw law3(SizeDistribution::fixed(3), 0.1, 2);
    stats::Accumulator x;
    for (int i = 0; i < 10000; ++i) {
      const auto y = sample_cluster(law3, rng);
      REQUIRE(y.size() == 3);
      x.add(y[1][0]);
    }
    CHECK(std::abs(x.mean()) < 3 * x.se());
    const ClusterLaw lawp(SizeDistribution::poisson(2.0), 0.1, 2);
    stats::Accumulator n;
    for (int i = 0; i < 10000; ++i) n.add(static_cast<double>(sample_cluster(lawp, rng).size()));
    CHECK(std::abs(n.mean() - 2.0) < 3 * n.se());
  }

  TEST_CASE("lift and p_X") {
    const Window w = Window::unit(2);
    const ClusterLaw law(SizeDistribution::poisson(2.0), 0.05, 2);
    Rng rng = make_rng(22);
    CHECK(lift(GroundConfiguration(w), law, rng).empty());
    CHECK(project_px(MarkedConfiguration(w)).empty());
    std::vector<Point> pts;
    for (int i = 0; i < 5; ++i) pts.push_back(uniform_in(w, rng));
    const GroundConfiguration g(w, pts);
    const auto m = lift(g, law, rng);
    CHECK(m.size() == 5);
    CHECK(project_px(m).points() == g.points());
    CHECK(m[0].cluster != m[1].cluster);
  }

  TEST_CASE("project_q") {
    const Window w = Window::unit(2);
    CHECK(project_q(MarkedConfiguration(w, {MarkedPoint{Point{0.5, 0.5}, ClusterVector{}}}), 0.1).empty());
    const MarkedConfiguration m(w, {MarkedPoint{Point{0.5, 0.5}, ClusterVector({Point{0.25, 0.0}, Point{0.0, -0.75}})}});
    const auto q = project_q(m, 0.1);
    CHECK(q.same_set(GroundConfiguration(q.window(), {Point{0.75, 0.5}, Point{0.5, -0.25}})));
    CHECK(q.window().contains(Point{0.5, -0.25}));
    const MarkedConfiguration clash(
        w, {MarkedPoint{Point{0.2, 0.2}, ClusterVector({Point{0.1, 0.1}})},
            MarkedPoint{Point{0.1, 0.1}, ClusterVector({Point{0.2, 0.2}})}});
    CHECK_THROWS_AS(project_q(clash, 0.1), ProjectionCoincidenceError);
  }

  TEST_CASE("degenerate clusters project onto their centers") {
    auto p = default_run_params(PairPotential::hard_core(0.05), ReferenceMeasure(50.0, Window::unit(2)));
    p.burn_in = 20000;
    const ClusterLaw law(SizeDistribution::fixed(1), 1e-6, 2);
    Rng rng = make_rng(23);
    const auto s = sample_cluster_process(p, law, rng);
    REQUIRE(s.projected.size() == s.centers.size());
    for (const auto& x : s.centers.points()) {
      double best = 1e9;
      for (const auto& u : s.projected.points()) best = std::min(best, distance(x, u));
      CHECK(best < 1e-4);
    }
  }

  TEST_CASE("projected intensity of Poisson centers") {
    // Poisson centers on the unit square, one Gaussian offset each: the
    // projected intensity at u is z prod_i [Phi(u_i / s) - Phi((u_i - 1) / s)].
    const double z = 50.0, s = 0.1;
    const Window w = Window::unit(2);
    const ClusterLaw law(SizeDistribution::fixed(1), s, 2);
    const Window edge(Point{-0.2, 0.0}, Point{0.2, 1.0});
    Rng rng = make_rng(24);
    stats::Accumulator acc;
    for (int i = 0; i < 4000; ++i) {
      const auto q = project_q(lift(sample_poisson(ReferenceMeasure(z, w), rng), law, rng), law);
      acc.add(static_cast<double>(count_in(q, edge)));
    }
    const double expected = z * smeared_mass(-0.2, 0.2, s) * smeared_mass(0.0, 1.0, s);
    CHECK(std::abs(acc.mean() - expected) < 4 * acc.se());
  }

  TEST_CASE("total cluster mass factorizes") {
    // E sum_x N_x = E|gamma| E N for independent sizes.
    auto p = default_run_params(PairPotential::hard_core(0.05), ReferenceMeasure(50.0, Window::unit(2)));
    p.n_samples = 2000;
    p.burn_in = 20000;
    p.thinning = 20;
    const auto ens = sample_gibbs(p);
    const ClusterLaw law(SizeDistribution::poisson(2.0), 0.05, 2);
    const auto marked = lift_ensemble(ens.samples, law, 25);
    stats::Accumulator diff;
    for (const auto& m : marked) diff.add(static_cast<double>(m.total_offsets()) - 2.0 * static_cast<double>(m.size()));
    CHECK(std::abs(diff.mean()) < 4 * diff.se());
  }

  TEST_CASE("droplet measure, exact cases") {
    const Window b = Window::unit(2);
    CHECK(droplet_theta_measure(b, ClusterVector({Point{0.3, -0.2}}), 2.0).value == doctest::Approx(2.0));
    CHECK(droplet_theta_measure(b, ClusterVector({Point{0.0, 0.0}, Point{5.0, 0.0}}), 1.0).value ==
          doctest::Approx(2.0));
    const auto d = droplet_theta_measure(Window::unit(1), ClusterVector({Point{0.0}, Point{0.5}}), 1.0);
    CHECK(d.exact);
    CHECK(d.value == doctest::Approx(1.5));
    CHECK(droplet_theta_measure(b, ClusterVector{}, 1.0).value == 0.0);
  }

  TEST_CASE("droplet measure against interval unions") {
    Rng rng = make_rng(26);
    const Window b(Point{0.0}, Point{0.7});
    for (std::size_t n : {2u, 3u, 4u, 6u, 9u}) {
      std::vector<Point> y;
      std::vector<std::pair<double, double>> iv;
      for (std::size_t i = 0; i < n; ++i) {
        y.push_back(gaussian_point(1, 0.5, rng));
        iv.emplace_back(0.0 - y.back()[0], 0.7 - y.back()[0]);
      }
      const auto d = droplet_theta_measure(b, ClusterVector(y), 3.0);
      const double exact = 3.0 * union_length(iv);
      if (d.exact) {
        CHECK(d.value == doctest::Approx(exact).epsilon(1e-12));
      } else {
        CHECK(std::abs(d.value - exact) < std::max(4 * d.error, 1e-3 * exact));
      }
    }
  }

  TEST_CASE("droplet QMC agrees with inclusion-exclusion in 2D") {
    // Five offsets with two repeats has the same union as three offsets.
    const Window b = Window::unit(2);
    const Point p1{0.1, 0.2}, p2{-0.3, 0.4}, p3{0.5, -0.1};
    const auto exact = droplet_theta_measure(b, ClusterVector({p1, p2, p3}), 1.0);
    const auto qmc = droplet_theta_measure(b, ClusterVector({p1, p2, p3, p1, p2}), 1.0);
    REQUIRE(exact.exact);
    REQUIRE_FALSE(qmc.exact);
    CHECK(std::abs(qmc.value - exact.value) < std::max(4 * qmc.error, 1e-3));
  }

  TEST_CASE("diagnose") {
    Rng rng = make_rng(27);
    const Window b = Window::unit(2);
    const auto one = diagnose(ClusterLaw(SizeDistribution::fixed(1), 0.1, 2), 1.0, b, 2000, rng);
    CHECK(one.sigma_zb == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(one.b_i == ConditionStatus::not_applicable);
    const auto none = diagnose(ClusterLaw(SizeDistribution::fixed(0), 0.1, 2), 1.0, b, 2000, rng);
    CHECK(none.sigma_zb == 0.0);
    const auto pois = diagnose(ClusterLaw(SizeDistribution::poisson(3.0), 0.2, 2), 1.0, b, 4000, rng);
    CHECK(pois.sigma_zb <= pois.sigma_zb_union_bound + 4 * pois.sigma_zb_se);
    CHECK(pois.sigma_zb_union_bound == doctest::Approx(3.0));
    CHECK(std::abs(pois.empirical_mean_size - 3.0) < 0.2);
    CHECK_THROWS(diagnose(ClusterLaw(SizeDistribution::fixed(1), 0.1, 2), 1.0, b, 10, rng));
  }

  TEST_CASE("droplet overlap vanishes as clusters spread") {
    // sigma(Z_B) for fixed(2) rises towards 2 vol(B) with s.
    Rng rng = make_rng(28);
    const Window b = Window::unit(2);
    std::vector<double> trend;
    for (double s : {0.05, 0.2, 0.5, 1.0, 3.0, 10.0, 30.0})
      trend.push_back(diagnose(ClusterLaw(SizeDistribution::fixed(2), s, 2), 1.0, b, 2000, rng).sigma_zb);
    CHECK(stats::mann_kendall_p(trend) < 0.01);
    CHECK(std::is_sorted(trend.begin(), trend.end()));
    CHECK(trend.back() == doctest::Approx(2.0).epsilon(0.01));
  }
}
