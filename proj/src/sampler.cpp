#include "gcl/sampler.hpp"

#include <cmath>

namespace gcl {

ReferenceMeasure::ReferenceMeasure(double intensity, Window window) : intensity_(intensity), window_(std::move(window)) {
  if (!(intensity > 0) || !std::isfinite(intensity)) throw InvariantError("ReferenceMeasure: intensity must be positive");
}

void GibbsRunParams::validate() const {
  const auto& m = move_mix;
  for (double p : {m.birth, m.death, m.move})
    if (!(p >= 0.0 && p <= 1.0)) throw InvariantError("move_mix: probabilities must lie in [0, 1]");
  if (std::abs(m.birth + m.death + m.move - 1.0) > 1e-9) throw InvariantError("move_mix: probabilities must sum to 1");
  if ((m.birth > 0) != (m.death > 0)) throw InvariantError("move_mix: birth and death must both be enabled or both off");
  if (n_samples < 1) throw InvariantError("n_samples must be >= 1");
  if (thinning < 1) throw InvariantError("thinning must be >= 1");
  if (!(move_scale > 0)) throw InvariantError("move_scale must be positive");
  if (potential.kind() == PotentialKind::lennard_jones_type && !(potential.alpha() > theta.window().dim()))
    throw InvariantError("lennard_jones_type: requires alpha > d");
}

GibbsRunParams default_run_params(PairPotential potential, ReferenceMeasure theta) {
  double side = theta.window().side(0);
  for (int i = 1; i < theta.window().dim(); ++i) side = std::min(side, theta.window().side(i));
  GibbsRunParams p{.potential = std::move(potential), .theta = std::move(theta)};
  p.move_scale = 0.1 * side;
  return p;
}

double AcceptanceStats::rate(MoveKind k) const {
  const auto i = static_cast<std::size_t>(k);
  return proposed[i] == 0 ? 0.0 : static_cast<double>(accepted[i]) / static_cast<double>(proposed[i]);
}

GibbsChain::GibbsChain(GibbsRunParams params) : GibbsChain(params, ChainState{.rng = make_rng(params.seed)}) {}

GibbsChain::GibbsChain(GibbsRunParams params, ChainState state) : params_(std::move(params)), state_(std::move(state)) {
  params_.validate();
  rebuild_grid();
}

void GibbsChain::rebuild_grid() {
  const double range = params_.potential.range();
  if (range > 0 && std::isfinite(range)) {
    grid_.emplace(params_.theta.window(), range);
    for (std::size_t i = 0; i < state_.points.size(); ++i) grid_->insert(i, state_.points[i]);
  }
}

void GibbsChain::add_point(const Point& p) {
  state_.points.push_back(p);
  if (grid_) grid_->insert(state_.points.size() - 1, p);
}

void GibbsChain::remove_point(std::size_t i) {
  auto& pts = state_.points;
  const std::size_t last = pts.size() - 1;
  if (grid_) {
    grid_->remove(i, pts[i]);
    if (i != last) grid_->relabel(last, i, pts[last]);
  }
  pts[i] = pts[last];
  pts.pop_back();
}

Point GibbsChain::reflect(Point p) const {
  const Window& w = params_.theta.window();
  for (int k = 0; k < p.dim(); ++k) {
    const double len = w.side(k);
    double t = std::fmod(p[k] - w.lower()[k], 2.0 * len);
    if (t < 0) t += 2.0 * len;
    if (t > len) t = 2.0 * len - t;
    p[k] = w.lower()[k] + t;
  }
  return p;
}

MoveKind GibbsChain::step() {
  auto& rng = state_.rng;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const MoveMix& mix = params_.move_mix;
  const double u = unif(rng);
  const MoveKind kind = u < mix.birth ? MoveKind::birth : (u < mix.birth + mix.death ? MoveKind::death : MoveKind::move);
  const auto k = static_cast<std::size_t>(kind);
  ++state_.step_counter;
  ++state_.stats.proposed[k];
  const auto n = state_.points.size();
  const NeighborGrid* grid = grid_ ? &*grid_ : nullptr;
  const PairPotential& pot = params_.potential;

  switch (kind) {
    case MoveKind::birth: {
      const Point x = uniform_in(params_.theta.window(), rng);
      const ExtendedReal de = local_energy_indexed(pot, x, state_.points, static_cast<std::size_t>(-1), grid);
      const double ratio =
          de.boltzmann() * params_.theta.mass() / static_cast<double>(n + 1) * (mix.death / mix.birth);
      if (unif(rng) < ratio) {
        add_point(x);
        state_.cached_energy += de;
        ++state_.stats.accepted[k];
      }
      break;
    }
    case MoveKind::death: {
      if (n == 0) break;
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      const std::size_t i = pick(rng);
      const ExtendedReal de = local_energy_indexed(pot, state_.points[i], state_.points, i, grid);
      // de is finite: the current state has finite energy.
      const double ratio = std::exp(de.value()) * static_cast<double>(n) / params_.theta.mass() * (mix.birth / mix.death);
      if (unif(rng) < ratio) {
        remove_point(i);
        state_.cached_energy = ExtendedReal(state_.cached_energy.value() - de.value());
        ++state_.stats.accepted[k];
      }
      break;
    }
    case MoveKind::move: {
      if (n == 0) break;
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      const std::size_t i = pick(rng);
      Point x = state_.points[i];
      std::normal_distribution<double> step(0.0, params_.move_scale);
      for (int c = 0; c < x.dim(); ++c) x[c] += step(rng);
      x = reflect(x);
      const ExtendedReal e_new = local_energy_indexed(pot, x, state_.points, i, grid);
      if (e_new.is_infinite()) break;
      const ExtendedReal e_old = local_energy_indexed(pot, state_.points[i], state_.points, i, grid);
      const double de = e_new.value() - e_old.value();
      if (unif(rng) < std::exp(-de)) {
        if (grid_) grid_->remove(i, state_.points[i]);
        state_.points[i] = x;
        if (grid_) grid_->insert(i, x);
        state_.cached_energy = ExtendedReal(state_.cached_energy.value() + de);
        ++state_.stats.accepted[k];
      }
      break;
    }
  }
  return kind;
}

void GibbsChain::run(std::size_t n_steps) {
  for (std::size_t s = 0; s < n_steps; ++s) step();
}

GroundConfiguration GibbsChain::snapshot() const { return {params_.theta.window(), state_.points}; }

GroundConfiguration sample_poisson(const ReferenceMeasure& theta, Rng& rng) {
  std::poisson_distribution<std::size_t> count(theta.mass());
  const std::size_t n = count(rng);
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pts.push_back(uniform_in(theta.window(), rng));
  return {theta.window(), std::move(pts)};
}

ChainState bdm_step(ChainState state, const GibbsRunParams& params) {
  GibbsChain chain(params, std::move(state));
  chain.step();
  return chain.state();
}

GibbsEnsemble sample_gibbs(const GibbsRunParams& params) {
  GibbsChain chain(params);
  chain.run(params.burn_in);
  GibbsEnsemble out;
  out.samples.reserve(params.n_samples);
  out.count_trace.reserve(params.n_samples);
  for (std::size_t s = 0; s < params.n_samples; ++s) {
    chain.run(params.thinning);
    out.samples.push_back(chain.snapshot());
    out.count_trace.push_back(chain.size());
  }
  out.acceptance = chain.state().stats;
  return out;
}

std::vector<stats::MeanSe> estimate_kappa1(const std::vector<GroundConfiguration>& ensemble,
                                           const std::vector<Window>& bins, const ReferenceMeasure& theta) {
  if (ensemble.empty()) throw std::invalid_argument("estimate_kappa1: empty ensemble");
  std::vector<stats::MeanSe> out;
  out.reserve(bins.size());
  for (const auto& b : bins) {
    const double tb = theta.measure(b);
    if (!(tb > 0)) throw std::invalid_argument("estimate_kappa1: bin with theta(B) = 0");
    stats::Accumulator acc;
    for (const auto& g : ensemble) acc.add(static_cast<double>(count_in(g, b)) / tb);
    out.push_back({acc.mean(), acc.se()});
  }
  return out;
}

stats::MeanSe estimate_kappa2(const std::vector<GroundConfiguration>& ensemble, const Window& b1, const Window& b2,
                              const ReferenceMeasure& theta) {
  if (ensemble.empty()) throw std::invalid_argument("estimate_kappa2: empty ensemble");
  if (b1.overlap_volume(b2) > 0) throw std::invalid_argument("estimate_kappa2: regions overlap");
  const double t1 = theta.measure(b1), t2 = theta.measure(b2);
  if (!(t1 > 0 && t2 > 0)) throw std::invalid_argument("estimate_kappa2: region with theta(B) = 0");
  stats::Accumulator acc;
  for (const auto& g : ensemble)
    acc.add(2.0 * static_cast<double>(count_in(g, b1)) * static_cast<double>(count_in(g, b2)) / (t1 * t2));
  return {acc.mean(), acc.se()};
}

}  // namespace gcl
