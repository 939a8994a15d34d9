#include <doctest.h>

#include "gcl/core.hpp"

using namespace gcl;

TEST_SUITE("core") {
  TEST_CASE("window validates its corners") {
    CHECK_THROWS_AS(Window(Point{0.0, 0.0}, Point{1.0, 0.0}), InvariantError);
    CHECK_THROWS_AS(Window(Point{0.0}, Point{1.0, 1.0}), InvariantError);
    const Window w = Window::unit(2);
    CHECK(w.volume() == doctest::Approx(1.0));
    CHECK(w.contains(Point{1.0, 0.0}));
    CHECK_FALSE(w.contains(Point{1.0 + 1e-12, 0.5}));
    CHECK(w.overlap_volume(Window(Point{0.5, 0.5}, Point{2.0, 2.0})) == doctest::Approx(0.25));
    CHECK(w.overlap_volume(Window(Point{2.0, 2.0}, Point{3.0, 3.0})) == 0.0);
  }

  TEST_CASE("configurations reject points outside the window") {
    const Window w = Window::unit(2);
    CHECK_THROWS_AS(GroundConfiguration(w, {Point{0.5, 1.5}}), InvariantError);
    CHECK_THROWS_AS(GroundConfiguration(w, {Point{0.5}}), InvariantError);
    CHECK_THROWS_AS(GroundConfiguration(w, {Point{0.5, std::nan("")}}), InvariantError);
  }

  TEST_CASE("simplicity and set equality") {
    const Window w = Window::unit(2);
    GroundConfiguration a(w, {Point{0.1, 0.2}, Point{0.3, 0.4}});
    GroundConfiguration b(w, {Point{0.3, 0.4}, Point{0.1, 0.2}});
    GroundConfiguration c(w, {Point{0.1, 0.2}, Point{0.1, 0.2}});
    CHECK(a.is_simple());
    CHECK_FALSE(c.is_simple());
    CHECK(a.same_set(b));
    CHECK_FALSE(a.same_set(c));
  }

  TEST_CASE("count_in") {
    const Window w = Window::unit(2);
    const Window half(Point{0.0, 0.0}, Point{0.5, 0.5});
    CHECK(count_in(GroundConfiguration(w), half) == 0);
    CHECK(count_in(GroundConfiguration(w, {Point{0.1, 0.1}, Point{0.2, 0.2}, Point{0.3, 0.1}}), half) == 3);
    const GroundConfiguration g(w, {Point{0.1, 0.1}, Point{0.9, 0.9}});
    CHECK(count_in(g, half) == 1);
    CHECK(count_in(g, Ball{Point{0.9, 0.9}, 0.01}) == 1);
  }

  TEST_CASE("sum_over") {
    const Window w = Window::unit(2);
    CHECK(sum_over(GroundConfiguration(w), [](const Point&) { return 1.0; }) == 0.0);
    std::vector<Point> pts;
    for (int i = 0; i < 5; ++i) pts.push_back(Point{0.1 * (i + 1), 0.15 * (i + 1)});
    const GroundConfiguration g(w, pts);
    CHECK(sum_over(g, [](const Point&) { return 1.0; }) == 5.0);
    const Window b(Point{0.0, 0.0}, Point{0.35, 0.5});
    CHECK(sum_over(g, indicator(b)) == static_cast<double>(count_in(g, b)));
  }

  TEST_CASE("restrict") {
    const Window w = Window::unit(2);
    const GroundConfiguration g(w, {Point{0.1, 0.1}, Point{0.2, 0.3}, Point{0.8, 0.8}});
    CHECK(restrict(g, w).same_set(g));
    CHECK(restrict(g, Ball{Point{0.5, 0.5}, 0.0}).empty());
    const auto r = restrict(g, Window(Point{0.0, 0.0}, Point{0.5, 0.5}));
    CHECK(r.same_set(GroundConfiguration(w, {Point{0.1, 0.1}, Point{0.2, 0.3}})));
  }

  TEST_CASE("marked configurations need distinct centers") {
    const Window w = Window::unit(1);
    MarkedPoint z{Point{0.5}, ClusterVector({Point{0.1}})};
    CHECK_THROWS_AS(MarkedConfiguration(w, {z, z}), InvariantError);
    MarkedConfiguration m(w, {z, MarkedPoint{Point{0.2}, ClusterVector({Point{0.0}, Point{1.0}})}});
    CHECK(m.total_offsets() == 3);
    CHECK_THROWS_AS(ClusterVector({Point{0.1}, Point{0.1, 0.2}}), InvariantError);
  }
}
