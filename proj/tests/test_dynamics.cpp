#include <doctest.h>

#include <cmath>

#include "gcl/dynamics.hpp"

using namespace gcl;

namespace {

MarkedConfiguration grid_config(std::size_t side, const ClusterVector& y) {
  std::vector<MarkedPoint> mp;
  for (std::size_t i = 0; i < side; ++i)
    for (std::size_t j = 0; j < side; ++j)
      mp.push_back({Point{(i + 0.5) / side, (j + 0.5) / side}, y});
  return MarkedConfiguration(Window::unit(2), mp);
}

DynamicsParams ou_params(double s, double dt, double t_end) {
  DynamicsParams p;
  p.law = ClusterLaw(SizeDistribution::fixed(1), s, 2);
  p.dt = dt;
  p.t_end = t_end;
  p.seed = 51;
  return p;
}

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("parameter validation") {
    auto p = ou_params(0.1, 1e-5, 1.0);
    CHECK_NOTHROW(p.validate());
    p.dt = 2e-5;
    CHECK_THROWS_AS(p.validate(), InvariantError);
    p.allow_coarse_dt = true;
    CHECK_NOTHROW(p.validate());
    p.mode = DynamicsMode::offsets_and_centers;
    p.potential = PairPotential::hard_core(0.05);
    CHECK_THROWS_AS(p.validate(), InvariantError);
    p.potential = PairPotential::soft_repulsive(1.0, 0.1);
    CHECK_NOTHROW(p.validate());
    CHECK(ou_params(0.1, 1e-5, 1e-4).n_steps() == 10);
    CHECK(ou_params(0.1, 1e-5, 1.05e-4).n_steps() == 11);
  }

  TEST_CASE("single step moments") {
    // y -> y (1 - dt / s^2) + sqrt(2 dt) xi.
    const double s = 0.1, dt = 1e-5;
    const Point y0{0.05, -0.02};
    const auto m = grid_config(60, ClusterVector({y0}));
    Rng rng = make_rng(52);
    const auto next = langevin_step(m, ou_params(s, dt, 1.0), rng);
    stats::Accumulator acc;
    for (const auto& z : next.marked_points()) acc.add(z.cluster[0][0]);
    const double mean = y0[0] * (1 - dt / (s * s));
    CHECK(std::abs(acc.mean() - mean) < 3 * std::sqrt(2 * dt / 3600.0));
    const double var_se = 2 * dt * std::sqrt(2.0 / 3600.0);
    CHECK(std::abs(acc.variance() - 2 * dt) < 3 * var_se);
    for (std::size_t i = 0; i < m.size(); ++i) CHECK(next[i].center == m[i].center);
  }

  TEST_CASE("coarse steps settle at the discrete stationary variance") {
    const double s = 0.1, dt = 0.5 * s * s;
    auto p = ou_params(s, dt, 40 * s * s);
    p.allow_coarse_dt = true;
    Rng rng = make_rng(53);
    const auto start = lift(project_px(grid_config(30, ClusterVector({Point{0.0, 0.0}}))), p.law, rng);
    const auto tr = run_dynamics(start, p, {});
    stats::Accumulator sq;
    for (const auto& z : tr.final_config.marked_points())
      for (int k = 0; k < 2; ++k) sq.add(z.cluster[0][k] * z.cluster[0][k]);
    const double discrete = s * s / (1 - dt / (2 * s * s));
    CHECK(std::abs(sq.mean() - discrete) < 4 * sq.se());
    CHECK(std::abs(sq.mean() - s * s) > 4 * sq.se());
  }

  TEST_CASE("zero duration is a no-op") {
    const auto m = grid_config(4, ClusterVector({Point{0.01, 0.0}}));
    const auto tr = run_dynamics(m, ou_params(0.1, 1e-5, 0.0), {Bump{Point{0.5, 0.5}, 0.3, 1.0}});
    CHECK(tr.steps == 0);
    CHECK(tr.times.size() == 1);
    for (std::size_t i = 0; i < m.size(); ++i) CHECK(tr.final_config[i] == m[i]);
  }

  TEST_CASE("empty clusters keep the trajectory constant") {
    auto p = ou_params(0.1, 1e-5, 1e-3);
    p.law = ClusterLaw(SizeDistribution::fixed(0), 0.1, 2);
    p.record_every = 10;
    const auto tr = run_dynamics(grid_config(5, ClusterVector{}), p, {Bump{Point{0.5, 0.5}, 0.3, 1.0}});
    REQUIRE(tr.stats.size() > 2);
    for (const auto& row : tr.stats) CHECK(row[0] == 0.0);
  }

  TEST_CASE("reproducible in the seed") {
    const auto m = grid_config(5, ClusterVector({Point{0.01, 0.0}}));
    const auto p = ou_params(0.1, 1e-5, 1e-3);
    const auto a = run_dynamics(m, p, {Bump{Point{0.5, 0.5}, 0.3, 1.0}});
    const auto b = run_dynamics(m, p, {Bump{Point{0.5, 0.5}, 0.3, 1.0}});
    CHECK(a.stats == b.stats);
  }

  TEST_CASE("blow-up aborts") {
    auto p = ou_params(0.05, 2.5e-6, 1e-4);
    p.mode = DynamicsMode::offsets_and_centers;
    p.potential = PairPotential::soft_repulsive(1e15, 0.1);
    const MarkedConfiguration m(Window::unit(2), {MarkedPoint{Point{0.5, 0.5}, ClusterVector({Point{0.0, 0.0}})},
                                                  MarkedPoint{Point{0.501, 0.5}, ClusterVector({Point{0.0, 0.0}})}});
    CHECK_THROWS_AS(run_dynamics(m, p, {}), DynamicsAbort);
  }

  TEST_CASE("invariance checks") {
    const double s = 0.05;
    auto gibbs = default_run_params(PairPotential::soft_repulsive(2.0, 0.1), ReferenceMeasure(50.0, Window::unit(2)));
    gibbs.burn_in = 20000;
    gibbs.thinning = 50;
    gibbs.n_samples = 300;
    gibbs.seed = 54;
    const ClusterLaw law(SizeDistribution::fixed(2), s, 2);
    const auto direct = lift_ensemble(sample_gibbs(gibbs).samples, law, 55);
    const Bump f{Point{0.5, 0.5}, 0.3, 1.0};

    DynamicsParams p;
    p.law = law;
    p.potential = gibbs.potential;
    p.seed = 56;
    p.record_every = 50;

    SUBCASE("coarse dt is flagged") {
      p.allow_coarse_dt = true;
      p.dt = s * s;
      p.t_end = 10 * s * s;
      const auto rep = check_invariance(p, gibbs, 20, f, direct);
      CHECK(rep.discretization_bias);
      CHECK_FALSE(rep.pass);
      CHECK(rep.offset_variance > 1.5 * s * s);
    }
    SUBCASE("offsets only keeps centers fixed") {
      p.dt = 1e-3 * s * s;
      p.t_end = 2 * s * s;
      const auto rep = check_invariance(p, gibbs, 20, f, direct);
      CHECK(rep.centers_unchanged);
      CHECK_FALSE(rep.discretization_bias);
      CHECK(rep.pass);
    }
    SUBCASE("center mode moves centers") {
      p.mode = DynamicsMode::offsets_and_centers;
      p.dt = 1e-3 * s * s;
      p.t_end = 2 * s * s;
      const auto rep = check_invariance(p, gibbs, 20, f, direct);
      CHECK_FALSE(rep.centers_unchanged);
      CHECK(rep.energy_trend_p > 0.01);
    }
  }
}
