#include "gcl/config.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "gcl/io.hpp"

namespace gcl {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

ConfigError::ConfigError(const std::string& source, std::size_t line, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

namespace {

std::string escape_pointer_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out.push_back(c);
  }
  return out;
}

// Minimal scanner over an already-validated JSON text.
class Locator {
 public:
  explicit Locator(const std::string& text) : t_(text) {}

  std::vector<std::pair<std::string, std::size_t>> run() {
    ws();
    value("");
    return std::move(out_);
  }

 private:
  void ws() {
    while (i_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[i_]))) {
      if (t_[i_] == '\n') ++line_;
      ++i_;
    }
  }

  std::string str() {
    std::string s;
    ++i_;  // opening quote
    while (i_ < t_.size() && t_[i_] != '"') {
      if (t_[i_] == '\\') {
        ++i_;
        if (i_ < t_.size()) {
          const char e = t_[i_];
          s.push_back(e == 'n' ? '\n' : e == 't' ? '\t' : e);
        }
      } else {
        s.push_back(t_[i_]);
      }
      ++i_;
    }
    ++i_;  // closing quote
    return s;
  }

  void value(const std::string& path) {
    out_.emplace_back(path, line_);
    if (i_ >= t_.size()) return;
    const char c = t_[i_];
    if (c == '{') {
      ++i_;
      ws();
      if (i_ < t_.size() && t_[i_] == '}') {
        ++i_;
        return;
      }
      while (i_ < t_.size()) {
        ws();
        const std::string key = str();
        ws();
        ++i_;  // ':'
        ws();
        value(path + "/" + escape_pointer_token(key));
        ws();
        if (i_ < t_.size() && t_[i_] == ',') {
          ++i_;
          continue;
        }
        ++i_;  // '}'
        return;
      }
    } else if (c == '[') {
      ++i_;
      ws();
      if (i_ < t_.size() && t_[i_] == ']') {
        ++i_;
        return;
      }
      std::size_t idx = 0;
      while (i_ < t_.size()) {
        ws();
        value(path + "/" + std::to_string(idx++));
        ws();
        if (i_ < t_.size() && t_[i_] == ',') {
          ++i_;
          continue;
        }
        ++i_;  // ']'
        return;
      }
    } else if (c == '"') {
      str();
    } else {
      while (i_ < t_.size() && t_[i_] != ',' && t_[i_] != '}' && t_[i_] != ']' &&
             !std::isspace(static_cast<unsigned char>(t_[i_])))
        ++i_;
    }
  }

  const std::string& t_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;
  std::vector<std::pair<std::string, std::size_t>> out_;
};

struct Context {
  std::string source;
  std::map<std::string, std::size_t> lines;

  std::size_t line_of(std::string ptr) const {
    while (true) {
      if (auto it = lines.find(ptr); it != lines.end()) return it->second;
      if (ptr.empty()) return 1;
      ptr = ptr.substr(0, ptr.rfind('/'));
    }
  }
};

// A JSON object or value being read, mirrored into the materialized output.
class Node {
 public:
  Node(const json& in, ojson& out, std::string ptr, const Context& ctx)
      : in_(in), out_(out), ptr_(std::move(ptr)), ctx_(ctx) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(ctx_.source, ctx_.line_of(ptr_), (ptr_.empty() ? "/" : ptr_) + ": " + msg);
  }

  [[noreturn]] void fail_at(const std::string& key, const std::string& msg) const {
    const std::string p = ptr_ + "/" + key;
    throw ConfigError(ctx_.source, ctx_.line_of(p), p + ": " + msg);
  }

  const std::string& ptr() const { return ptr_; }
  const json& raw() const { return in_; }

  void expect_object() const {
    if (!in_.is_object()) fail("expected an object");
  }

  void allow_only(std::initializer_list<const char*> keys) const {
    expect_object();
    std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = in_.begin(); it != in_.end(); ++it)
      if (!ok.count(it.key())) child_node(it.key()).fail("unknown key '" + it.key() + "'");
  }

  bool has(const std::string& key) const { return in_.is_object() && in_.contains(key); }

  Node child(const std::string& key) const {
    if (!has(key)) fail("missing required key '" + key + "'");
    return child_node(key);
  }

  /// Child object, created empty when absent.
  Node child_or_empty(const std::string& key) const {
    if (!has(key)) {
      out_[key] = ojson::object();
      return {empty_object(), out_[key], ptr_ + "/" + escape_pointer_token(key), ctx_};
    }
    return child_node(key);
  }

  double number(const std::string& key, std::optional<double> def = std::nullopt) const {
    if (!has(key)) {
      if (!def) fail("missing required key '" + key + "'");
      out_[key] = *def;
      return *def;
    }
    const json& v = in_.at(key);
    if (!v.is_number()) child_node(key).fail("expected a number");
    const double d = v.get<double>();
    out_[key] = d;
    return d;
  }

  std::uint64_t integer(const std::string& key, std::optional<std::uint64_t> def = std::nullopt) const {
    if (!has(key)) {
      if (!def) fail("missing required key '" + key + "'");
      out_[key] = *def;
      return *def;
    }
    const json& v = in_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      child_node(key).fail("expected a nonnegative integer");
    const auto u = v.get<std::uint64_t>();
    out_[key] = u;
    return u;
  }

  std::string string(const std::string& key, std::optional<std::string> def = std::nullopt) const {
    if (!has(key)) {
      if (!def) fail("missing required key '" + key + "'");
      out_[key] = *def;
      return *def;
    }
    const json& v = in_.at(key);
    if (!v.is_string()) child_node(key).fail("expected a string");
    out_[key] = v.get<std::string>();
    return v.get<std::string>();
  }

  bool boolean(const std::string& key, bool def) const {
    if (!has(key)) {
      out_[key] = def;
      return def;
    }
    const json& v = in_.at(key);
    if (!v.is_boolean()) child_node(key).fail("expected true or false");
    out_[key] = v.get<bool>();
    return v.get<bool>();
  }

  Point point(const std::string& key, int dim, std::optional<Point> def = std::nullopt) const {
    if (!has(key)) {
      if (!def) fail("missing required key '" + key + "'");
      out_[key] = std::vector<double>(def->coords().begin(), def->coords().end());
      return *def;
    }
    const json& v = in_.at(key);
    const Node c = child_node(key);
    if (!v.is_array() || v.size() != static_cast<std::size_t>(dim))
      c.fail("expected an array of " + std::to_string(dim) + " numbers");
    Point p(dim);
    for (int i = 0; i < dim; ++i) {
      if (!v[static_cast<std::size_t>(i)].is_number()) c.fail("expected numbers");
      p[i] = v[static_cast<std::size_t>(i)].get<double>();
    }
    if (!p.is_finite()) c.fail("non-finite coordinate");
    out_[key] = std::vector<double>(p.coords().begin(), p.coords().end());
    return p;
  }

  std::vector<Node> array(const std::string& key) const {
    std::vector<Node> items;
    if (!has(key)) {
      out_[key] = ojson::array();
      return items;
    }
    const json& v = in_.at(key);
    if (!v.is_array()) child_node(key).fail("expected an array");
    out_[key] = ojson::array();
    for (std::size_t i = 0; i < v.size(); ++i) out_[key].push_back(ojson::object());
    for (std::size_t i = 0; i < v.size(); ++i)
      items.emplace_back(v[i], out_[key][i], ptr_ + "/" + escape_pointer_token(key) + "/" + std::to_string(i), ctx_);
    return items;
  }

  /// Runs a constructor, converting invariant violations to located errors.
  template <class F>
  auto build(F&& f) const -> decltype(f()) {
    try {
      return f();
    } catch (const InvariantError& e) {
      fail(e.what());
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }

 private:
  static const json& empty_object() {
    static const json e = json::object();
    return e;
  }

  Node child_node(const std::string& key) const {
    if (!out_.contains(key)) out_[key] = ojson::object();
    return {in_.at(key), out_[key], ptr_ + "/" + escape_pointer_token(key), ctx_};
  }

  const json& in_;
  ojson& out_;
  std::string ptr_;
  const Context& ctx_;
};

Window read_box(const Node& n, int dim) {
  n.allow_only({"lower", "upper"});
  const Point lo = n.point("lower", dim), hi = n.point("upper", dim);
  return n.build([&] { return Window(lo, hi); });
}

Window read_box_or_default(const Node& parent, const std::string& key, int dim, const Window& def) {
  if (!parent.has(key)) {
    Node n = parent.child_or_empty(key);
    n.point("lower", dim, def.lower());
    n.point("upper", dim, def.upper());
    return def;
  }
  return read_box(parent.child(key), dim);
}

PairPotential read_potential(const Node& n, int dim) {
  const std::string kind = n.string("kind");
  if (kind == "zero") {
    n.allow_only({"kind"});
    return PairPotential::zero();
  }
  if (kind == "hard_core") {
    n.allow_only({"kind", "r0"});
    const double r0 = n.number("r0");
    return n.build([&] { return PairPotential::hard_core(r0); });
  }
  if (kind == "soft_repulsive") {
    n.allow_only({"kind", "A", "r"});
    const double a = n.number("A"), r = n.number("r");
    return n.build([&] { return PairPotential::soft_repulsive(a, r); });
  }
  if (kind == "lennard_jones_type") {
    n.allow_only({"kind", "c", "r1", "r2", "alpha"});
    const double c = n.number("c"), r1 = n.number("r1"), r2 = n.number("r2"), alpha = n.number("alpha");
    return n.build([&] { return PairPotential::lennard_jones_type(c, r1, r2, alpha, dim); });
  }
  if (kind == "lj_6_12") {
    n.allow_only({"kind", "c", "cutoff"});
    const double c = n.number("c"), cutoff = n.number("cutoff", 2.5);
    return n.build([&] { return PairPotential::lj_6_12(c, cutoff); });
  }
  n.child("kind").fail("unknown potential kind '" + kind + "'");
}

ClusterLaw read_law(const Node& n, int dim) {
  n.allow_only({"size", "offset_std"});
  const Node size = n.child("size");
  const std::string kind = size.string("kind");
  SizeDistribution dist = SizeDistribution::fixed(0);
  if (kind == "fixed") {
    size.allow_only({"kind", "n"});
    dist = SizeDistribution::fixed(size.integer("n"));
  } else if (kind == "poisson") {
    size.allow_only({"kind", "mean"});
    const double m = size.number("mean");
    dist = size.build([&] { return SizeDistribution::poisson(m); });
  } else {
    size.child("kind").fail("unknown cluster size kind '" + kind + "'");
  }
  const double s = n.number("offset_std");
  return n.build([&] { return ClusterLaw(dist, s, dim); });
}

Bump read_bump(const Node& n, int dim) {
  n.allow_only({"center", "radius", "amplitude"});
  Bump b{n.point("center", dim), n.number("radius"), n.number("amplitude", 1.0)};
  if (!(b.radius > 0)) n.fail_at("radius", "must be positive");
  return b;
}

CylinderFunction read_cylinder(const Node& n, int dim) {
  n.allow_only({"outer", "coeffs", "offset", "inner"});
  const std::string outer = n.string("outer", "tanh");
  CylinderFunction::Outer kind{};
  if (outer == "constant") kind = CylinderFunction::Outer::constant;
  else if (outer == "linear") kind = CylinderFunction::Outer::linear;
  else if (outer == "tanh") kind = CylinderFunction::Outer::tanh;
  else if (outer == "product") kind = CylinderFunction::Outer::product;
  else n.child("outer").fail("unknown outer function '" + outer + "'");
  std::vector<Bump> inner;
  for (const auto& b : n.array("inner")) inner.push_back(read_bump(b, dim));
  std::vector<double> coeffs;
  if (n.has("coeffs")) {
    const Node c = n.child("coeffs");
    if (!c.raw().is_array()) c.fail("expected an array of numbers");
    for (const auto& v : c.raw()) {
      if (!v.is_number()) c.fail("expected numbers");
      coeffs.push_back(v.get<double>());
    }
  } else {
    coeffs.assign(inner.size(), 1.0);
  }
  const double offset = n.number("offset", 0.0);
  return n.build([&] { return CylinderFunction(kind, coeffs, offset, inner); });
}

Diffeomorphism read_diffeo(const Node& n, int dim) {
  n.allow_only({"amplitude", "center", "radius"});
  const Point a = n.point("amplitude", dim), c = n.point("center", dim);
  const double r = n.number("radius");
  return n.build([&] { return Diffeomorphism(a, c, r); });
}

VectorField read_field(const Node& n, int dim) {
  n.allow_only({"amplitude", "center", "radius"});
  const Point a = n.point("amplitude", dim), c = n.point("center", dim);
  const double r = n.number("radius");
  return n.build([&] { return VectorField(a, c, r); });
}

MarkEvent read_event(const Node& n) {
  const std::string kind = n.string("kind", "any");
  MarkEvent e;
  if (kind == "any") {
    n.allow_only({"kind"});
  } else if (kind == "size_equals") {
    n.allow_only({"kind", "n"});
    e.kind = MarkEvent::Kind::size_equals;
    e.size = n.integer("n");
  } else if (kind == "first_offset_within") {
    n.allow_only({"kind", "radius"});
    e.kind = MarkEvent::Kind::first_offset_within;
    e.radius = n.number("radius");
    if (!(e.radius >= 0)) n.fail_at("radius", "must be >= 0");
  } else {
    n.child("kind").fail("unknown event kind '" + kind + "'");
  }
  return e;
}

std::optional<double> read_corruption(const Node& n) {
  if (!n.has("corrupt_offset_std")) return std::nullopt;
  const double s = n.number("corrupt_offset_std");
  if (!(s > 0)) n.fail_at("corrupt_offset_std", "must be positive");
  return s;
}

VerifyTask read_task(const Node& n, int dim, double tol_default) {
  const std::string identity = n.string("identity");
  const std::string name = n.string("name", identity);
  const double tol = n.number("tol_sigma", tol_default);
  if (!(tol > 0)) n.fail_at("tol_sigma", "must be positive");
  auto task = [&](auto check) { return VerifyTask{name, std::move(check), tol, ""}; };
  if (identity == "gnz") {
    n.allow_only({"identity", "name", "tol_sigma", "spatial", "functional", "n_inner"});
    const Node sp = n.child("spatial");
    GnzTask t{.h = {.spatial = Window::unit(dim), .functional = std::nullopt}};
    if (sp.has("box")) {
      sp.allow_only({"box"});
      t.h.spatial = read_box(sp.child("box"), dim);
    } else if (sp.has("bump")) {
      sp.allow_only({"bump"});
      t.h.spatial = read_bump(sp.child("bump"), dim);
    } else {
      sp.fail("expected 'box' or 'bump'");
    }
    if (n.has("functional")) {
      t.h.functional = read_cylinder(n.child("functional"), dim);
      if (!t.h.functional->bounded()) n.child("functional").fail("verification needs a bounded cylinder function");
    }
    t.n_inner = n.integer("n_inner", 4);
    if (t.n_inner < 1) n.fail_at("n_inner", "must be >= 1");
    return task(std::move(t));
  } else if (identity == "laplace") {
    n.allow_only({"identity", "name", "tol_sigma", "f", "n_inner"});
    LaplaceTask t{.f = read_bump(n.child("f"), dim)};
    if (!(t.f.amplitude >= 0)) n.child("f").fail("f must be nonnegative");
    t.n_inner = n.integer("n_inner", 16);
    if (t.n_inner < 1) n.fail_at("n_inner", "must be >= 1");
    return task(std::move(t));
  } else if (identity == "correlation") {
    n.allow_only({"identity", "name", "tol_sigma", "B1", "B2", "A1", "A2"});
    CorrelationTask t{read_box(n.child("B1"), dim), read_box(n.child("B2"), dim), read_event(n.child_or_empty("A1")),
                      read_event(n.child_or_empty("A2"))};
    if (t.b1.overlap_volume(t.b2) > 0) n.fail("B1 and B2 must be disjoint");
    return task(std::move(t));
  } else if (identity == "quasi_invariance") {
    n.allow_only({"identity", "name", "tol_sigma", "diffeomorphism", "cylinder", "corrupt_offset_std"});
    QuasiInvarianceTask t{read_diffeo(n.child("diffeomorphism"), dim), read_cylinder(n.child("cylinder"), dim),
                          read_corruption(n)};
    if (!t.f.bounded()) n.child("cylinder").fail("verification needs a bounded cylinder function");
    return task(std::move(t));
  } else if (identity == "rnd_normalization") {
    n.allow_only({"identity", "name", "tol_sigma", "diffeomorphism", "corrupt_offset_std"});
    return task(RndNormalizationTask{read_diffeo(n.child("diffeomorphism"), dim), read_corruption(n)});
  } else if (identity == "ibp") {
    n.allow_only({"identity", "name", "tol_sigma", "vector_field", "cylinder"});
    IbpTask t{read_field(n.child("vector_field"), dim), read_cylinder(n.child("cylinder"), dim)};
    if (!t.f.bounded()) n.child("cylinder").fail("verification needs a bounded cylinder function");
    return task(std::move(t));
  } else {
    n.child("identity").fail("unknown identity '" + identity +
                             "' (expected gnz, laplace, correlation, quasi_invariance, rnd_normalization, ibp)");
  }
}

}  // namespace

std::vector<std::pair<std::string, std::size_t>> locate_values(const std::string& text) { return Locator(text).run(); }

RunConfig parse_config(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min(e.byte, text.size()); ++i)
      if (text[i] == '\n') ++line;
    throw ConfigError(source, line, std::string("malformed JSON: ") + e.what());
  }
  Context ctx{source, {}};
  for (auto& [ptr, line] : locate_values(text)) ctx.lines.emplace(ptr, line);

  RunConfig cfg;
  ojson out = ojson::object();
  const Node root(doc, out, "", ctx);
  root.allow_only({"dimension", "window", "potential", "theta", "cluster_law", "sampler", "verify", "dynamics",
                   "diagnostics", "output_dir"});

  const auto dim = root.integer("dimension", 2);
  if (dim < 1 || dim > static_cast<std::uint64_t>(kMaxDim)) root.fail_at("dimension", "must be 1, 2 or 3");
  cfg.dim = static_cast<int>(dim);
  cfg.window = read_box_or_default(root, "window", cfg.dim, Window::unit(cfg.dim));

  PairPotential pot = PairPotential::zero();
  if (root.has("potential")) {
    pot = read_potential(root.child("potential"), cfg.dim);
  } else {
    root.child_or_empty("potential").string("kind", "zero");
  }

  const Node theta_node = root.child_or_empty("theta");
  theta_node.allow_only({"intensity"});
  const double intensity = theta_node.number("intensity", 50.0);
  ReferenceMeasure theta = theta_node.build([&] { return ReferenceMeasure(intensity, cfg.window); });

  if (root.has("cluster_law")) {
    cfg.law = read_law(root.child("cluster_law"), cfg.dim);
  } else {
    Node l = root.child_or_empty("cluster_law");
    Node s = l.child_or_empty("size");
    s.string("kind", "fixed");
    s.integer("n", 2);
    l.number("offset_std", 0.05);
    cfg.law = ClusterLaw(SizeDistribution::fixed(2), 0.05, cfg.dim);
  }

  const Node sn = root.child_or_empty("sampler");
  sn.allow_only({"n_samples", "burn_in", "thinning", "move_mix", "move_scale", "seed"});
  GibbsRunParams sp = default_run_params(pot, theta);
  sp.n_samples = sn.integer("n_samples", 10000);
  sp.burn_in = sn.integer("burn_in", 100000);
  sp.thinning = sn.integer("thinning", 100);
  const Node mix = sn.child_or_empty("move_mix");
  mix.allow_only({"birth", "death", "move"});
  sp.move_mix = {mix.number("birth", 0.35), mix.number("death", 0.35), mix.number("move", 0.30)};
  sp.move_scale = sn.number("move_scale", sp.move_scale);
  sp.seed = sn.integer("seed", 1);
  sn.build([&] {
    sp.validate();
    return 0;
  });
  cfg.sampler = sp;

  const Node vn = root.child_or_empty("verify");
  vn.allow_only({"tol_sigma", "tasks"});
  cfg.tol_sigma = vn.number("tol_sigma", kDefaultTolSigma);
  if (!(cfg.tol_sigma > 0)) vn.fail_at("tol_sigma", "must be positive");

  // Sampling digest: everything an ensemble depends on.
  ojson sampling = {{"dimension", out["dimension"]}, {"window", out["window"]},         {"potential", out["potential"]},
                    {"theta", out["theta"]},         {"cluster_law", out["cluster_law"]}, {"sampler", out["sampler"]}};
  cfg.sampling_digest = io::digest(sampling.dump());

  for (const auto& t : vn.array("tasks")) cfg.tasks.push_back(read_task(t, cfg.dim, cfg.tol_sigma));
  // Digests must be computed on the fully materialized task blocks.
  for (std::size_t i = 0; i < cfg.tasks.size(); ++i)
    cfg.tasks[i].digest = io::digest(cfg.sampling_digest + out["verify"]["tasks"][i].dump());

  if (root.has("dynamics")) {
    const Node dn = root.child("dynamics");
    dn.allow_only({"dt", "t_end", "mode", "seed", "record_every", "n_replicas", "n_direct", "test_function",
                   "allow_coarse_dt"});
    DynamicsConfig dc;
    DynamicsParams& p = dc.params;
    p.law = cfg.law;
    p.potential = pot;
    const double s2 = cfg.law.offset_std() * cfg.law.offset_std();
    p.dt = dn.number("dt", 1e-4 * s2);
    p.t_end = dn.number("t_end", 10.0 * s2);
    const std::string mode = dn.string("mode", "offsets_only");
    if (mode == "offsets_only") p.mode = DynamicsMode::offsets_only;
    else if (mode == "offsets_and_centers") p.mode = DynamicsMode::offsets_and_centers;
    else dn.child("mode").fail("unknown mode '" + mode + "' (expected offsets_only or offsets_and_centers)");
    p.seed = dn.integer("seed", derive_seed(sp.seed, 0xd1));
    p.record_every = dn.integer("record_every", 100);
    p.allow_coarse_dt = dn.boolean("allow_coarse_dt", false);
    dc.n_replicas = dn.integer("n_replicas", 32);
    if (dc.n_replicas < 2) dn.fail_at("n_replicas", "must be >= 2");
    dc.n_direct = dn.integer("n_direct", 2000);
    if (dc.n_direct < 2) dn.fail_at("n_direct", "must be >= 2");
    if (dn.has("test_function")) {
      dc.test_function = read_bump(dn.child("test_function"), cfg.dim);
    } else {
      Point c(cfg.dim);
      for (int i = 0; i < cfg.dim; ++i) c[i] = 0.5 * (cfg.window.lower()[i] + cfg.window.upper()[i]);
      dc.test_function = Bump{c, 0.2 * cfg.window.side(0), 1.0};
      Node tf = dn.child_or_empty("test_function");
      tf.point("center", cfg.dim, c);
      tf.number("radius", dc.test_function.radius);
      tf.number("amplitude", 1.0);
    }
    dn.build([&] {
      p.validate();
      return 0;
    });
    cfg.dynamics = dc;
  }

  const Node gn = root.child_or_empty("diagnostics");
  gn.allow_only({"region", "n_mc"});
  cfg.diagnose.region = read_box_or_default(gn, "region", cfg.dim, cfg.window);
  cfg.diagnose.n_mc = gn.integer("n_mc", 10000);
  if (cfg.diagnose.n_mc < 1000) gn.fail_at("n_mc", "must be at least 1000");

  cfg.output_dir = root.string("output_dir", "out");
  cfg.materialized = std::move(out);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(path, 0, "cannot open configuration file");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

void override_seed(RunConfig& config, std::uint64_t seed) {
  config.sampler.seed = seed;
  config.materialized["sampler"]["seed"] = seed;
  if (config.dynamics) {
    config.dynamics->params.seed = derive_seed(seed, 0xd1);
    config.materialized["dynamics"]["seed"] = config.dynamics->params.seed;
  }
  ojson sampling = {{"dimension", config.materialized["dimension"]}, {"window", config.materialized["window"]},
                    {"potential", config.materialized["potential"]}, {"theta", config.materialized["theta"]},
                    {"cluster_law", config.materialized["cluster_law"]}, {"sampler", config.materialized["sampler"]}};
  config.sampling_digest = io::digest(sampling.dump());
  for (std::size_t i = 0; i < config.tasks.size(); ++i)
    config.tasks[i].digest = io::digest(config.sampling_digest + config.materialized["verify"]["tasks"][i].dump());
}

}  // namespace gcl
