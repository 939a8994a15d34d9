#include <doctest.h>

#include <sstream>

#include "gcl/config.hpp"
#include "gcl/io.hpp"

using namespace gcl;

TEST_SUITE("io") {
  TEST_CASE("doubles round trip") {
    Rng rng = make_rng(61);
    std::normal_distribution<double> n(0.0, 1e3);
    for (int i = 0; i < 1000; ++i) {
      const double v = n(rng);
      CHECK(std::stod(io::format_double(v)) == v);
    }
    CHECK(io::format_double(0.5) == "0.5");
  }

  TEST_CASE("point pattern round trip") {
    const Window w = Window::unit(3);
    Rng rng = make_rng(62);
    std::vector<Point> pts;
    for (int i = 0; i < 20; ++i) pts.push_back(uniform_in(w, rng));
    std::stringstream ss;
    io::write_points(ss, GroundConfiguration(w, pts));
    CHECK(ss.str().rfind("x1,x2,x3\n", 0) == 0);
    CHECK(io::read_points(ss, 3) == pts);
  }

  TEST_CASE("marked pattern round trip keeps empty clusters") {
    const Window w = Window::unit(2);
    const MarkedConfiguration m(w, {MarkedPoint{Point{0.1, 0.2}, ClusterVector({Point{0.01, -0.3}, Point{0.0, 1.0}})},
                                    MarkedPoint{Point{0.4, 0.4}, ClusterVector{}},
                                    MarkedPoint{Point{0.9, 0.3}, ClusterVector({Point{1e-17, 2.5}})}});
    std::stringstream ss;
    io::write_marked(ss, m);
    const auto back = io::read_marked(ss, w);
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(back[i] == m[i]);
  }

  TEST_CASE("ensemble round trips") {
    const Window w = Window::unit(2);
    auto p = default_run_params(PairPotential::zero(), ReferenceMeasure(3.0, w));
    p.n_samples = 50;
    p.burn_in = 100;
    p.thinning = 5;
    const auto ens = sample_gibbs(p).samples;
    const auto marked = lift_ensemble(ens, ClusterLaw(SizeDistribution::poisson(1.0), 0.1, 2), 1);
    std::stringstream a, b;
    io::write_ground_ensemble(a, ens, 2);
    io::write_marked_ensemble(b, marked, 2);
    const auto ens2 = io::read_ground_ensemble(a, w, ens.size());
    const auto marked2 = io::read_marked_ensemble(b, w, marked.size());
    REQUIRE(ens2.size() == ens.size());
    for (std::size_t i = 0; i < ens.size(); ++i) CHECK(ens2[i].points() == ens[i].points());
    for (std::size_t i = 0; i < marked.size(); ++i)
      CHECK(marked2[i].marked_points() == marked[i].marked_points());
  }

  TEST_CASE("malformed csv is rejected") {
    std::stringstream ss("x1,x2\n0.1,abc\n");
    CHECK_THROWS_AS(io::read_points(ss, 2), io::FormatError);
    std::stringstream wrong("y1,y2\n0.1,0.2\n");
    CHECK_THROWS_AS(io::read_points(wrong, 2), io::FormatError);
  }

  TEST_CASE("report json") {
    IdentityReport r;
    r.identity = "gnz";
    r.z = std::numeric_limits<double>::infinity();
    r.pass = false;
    const auto j = io::to_json(r);
    for (const char* k : {"identity", "lhs", "rhs", "lhs_se", "rhs_se", "z", "n", "verdict", "params_digest"})
      CHECK(j.contains(k));
    CHECK(j["verdict"] == "fail");
  }
}

TEST_SUITE("config") {
  TEST_CASE("defaults are materialized") {
    const auto cfg = parse_config("{}");
    CHECK(cfg.dim == 2);
    CHECK(cfg.tasks.empty());
    CHECK(cfg.materialized["sampler"]["seed"] == 1);
    CHECK(cfg.materialized["potential"]["kind"] == "zero");
    CHECK(cfg.materialized["cluster_law"]["size"]["kind"] == "fixed");
    CHECK(cfg.materialized["theta"]["intensity"] == 50.0);
    CHECK(cfg.materialized["output_dir"] == "out");
    // Re-parsing the materialized document reproduces it.
    const auto again = parse_config(cfg.materialized.dump());
    CHECK(again.materialized == cfg.materialized);
    CHECK(again.sampling_digest == cfg.sampling_digest);
  }

  TEST_CASE("errors carry the line of the offending value") {
    const std::string text =
        "{\n"
        "  \"dimension\": 2,\n"
        "  \"potential\": {\n"
        "    \"kind\": \"hard_core\",\n"
        "    \"r0\": -0.1\n"
        "  }\n"
        "}\n";
    try {
      parse_config(text, "c.json");
      FAIL("expected a configuration error");
    } catch (const ConfigError& e) {
      CHECK(e.line() == 3);
      CHECK(std::string(e.what()).find("c.json:3") == 0);
    }
    const std::string unknown = "{\n  \"sampler\": {\n    \"n_sample\": 5\n  }\n}";
    try {
      parse_config(unknown);
      FAIL("expected a configuration error");
    } catch (const ConfigError& e) {
      CHECK(e.line() == 3);
      CHECK(std::string(e.what()).find("n_sample") != std::string::npos);
    }
    const std::string bad_type = "{\n\"theta\": {\"intensity\": \"lots\"}\n}";
    try {
      parse_config(bad_type);
      FAIL("expected a configuration error");
    } catch (const ConfigError& e) {
      CHECK(e.line() == 2);
    }
    try {
      parse_config("{\n  \"dimension\": 2,\n  oops\n}");
      FAIL("expected a configuration error");
    } catch (const ConfigError& e) {
      CHECK(e.line() == 3);
    }
  }

  TEST_CASE("module invariants are enforced at load") {
    CHECK_THROWS_AS(parse_config(R"({"window":{"lower":[0,0],"upper":[1,0]}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"verify":{"tasks":[{"identity":"quasi_invariance",
        "diffeomorphism":{"amplitude":[0.5,0],"center":[0.5,0.5],"radius":0.1},
        "cylinder":{"inner":[{"center":[0.5,0.5],"radius":0.2}]}}]}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"verify":{"tasks":[{"identity":"correlation",
        "B1":{"lower":[0,0],"upper":[0.6,0.6]},"B2":{"lower":[0.5,0.5],"upper":[1,1]}}]}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"potential":{"kind":"hard_core","r0":0.05},"dynamics":{"mode":"offsets_and_centers"}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"cluster_law":{"size":{"kind":"fixed","n":2},"offset_std":0.1},"dynamics":{"dt":1}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"verify":{"tasks":[{"identity":"nope"}]}})"), ConfigError);
  }

  TEST_CASE("tasks and digests") {
    const std::string text = R"({
      "potential": {"kind": "soft_repulsive", "A": 2, "r": 0.1},
      "verify": {"tasks": [
        {"identity": "gnz", "spatial": {"bump": {"center": [0.5, 0.5], "radius": 0.2}},
         "functional": {"outer": "tanh", "inner": [{"center": [0.5, 0.5], "radius": 0.3}]}},
        {"identity": "ibp", "vector_field": {"amplitude": [0.1, 0], "center": [0.5, 0.5], "radius": 0.2},
         "cylinder": {"outer": "product", "coeffs": [2], "inner": [{"center": [0.4, 0.5], "radius": 0.3}]}}
      ]}})";
    auto cfg = parse_config(text);
    REQUIRE(cfg.tasks.size() == 2);
    CHECK(cfg.tasks[0].name == "gnz");
    CHECK(std::holds_alternative<GnzTask>(cfg.tasks[0].check));
    CHECK(std::holds_alternative<IbpTask>(cfg.tasks[1].check));
    CHECK(cfg.tasks[0].digest != cfg.tasks[1].digest);
    const auto before = cfg.sampling_digest;
    const auto task_before = cfg.tasks[0].digest;
    override_seed(cfg, 99);
    CHECK(cfg.sampler.seed == 99);
    CHECK(cfg.sampling_digest != before);
    CHECK(cfg.tasks[0].digest != task_before);
  }

  TEST_CASE("shipped configurations load") {
    for (const char* name : {"desk.json", "negative_control.json"}) {
      const auto cfg = load_config(std::string(GCL_SOURCE_DIR) + "/configs/" + name);
      CHECK_FALSE(cfg.tasks.empty());
      CHECK(cfg.sampler.n_samples == 10000);
    }
  }

  TEST_CASE("value locator") {
    const auto loc = locate_values("{\n \"a\": [1,\n 2],\n \"b/c\": {\"d\": true}\n}");
    std::map<std::string, std::size_t> m(loc.begin(), loc.end());
    CHECK(m.at("/a/0") == 2);
    CHECK(m.at("/a/1") == 3);
    CHECK(m.at("/b~1c/d") == 4);
  }
}
