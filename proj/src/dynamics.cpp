#include "gcl/dynamics.hpp"

#include <cmath>

#include "gcl/parallel.hpp"

namespace gcl {

void DynamicsParams::validate() const {
  if (!(dt > 0) || !std::isfinite(dt)) throw InvariantError("dynamics: dt must be positive");
  if (!(t_end >= 0) || !std::isfinite(t_end)) throw InvariantError("dynamics: t_end must be >= 0");
  if (record_every < 1) throw InvariantError("dynamics: record_every must be >= 1");
  const double s2 = law.offset_std() * law.offset_std();
  if (!allow_coarse_dt && dt > 1e-3 * s2 * (1.0 + 1e-9))
    throw InvariantError("dynamics: dt must not exceed 1e-3 * offset_std^2 (set allow_coarse_dt to override)");
  if (mode == DynamicsMode::offsets_and_centers && !potential.is_smooth())
    throw InvariantError("dynamics: center mode requires a C^1 bounded potential (not hard_core or lj_6_12)");
}

std::size_t DynamicsParams::n_steps() const {
  const double q = t_end / dt;
  const double r = std::round(q);
  if (std::abs(q - r) <= 1e-9 * std::max(1.0, q)) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::ceil(q));
}

double Trajectory::time_average(std::size_t j) const {
  if (stats.empty()) return 0.0;
  double s = 0.0;
  for (const auto& row : stats) s += row[j];
  return s / static_cast<double>(stats.size());
}

namespace {

/// Mutable working copy of a marked configuration.
struct WorkState {
  Window window;
  std::vector<Point> centers;
  std::vector<std::vector<Point>> offsets;

  explicit WorkState(const MarkedConfiguration& m) : window(m.window()) {
    centers.reserve(m.size());
    offsets.reserve(m.size());
    for (const auto& z : m.marked_points()) {
      centers.push_back(z.center);
      offsets.push_back(z.cluster.offsets());
    }
  }

  MarkedConfiguration to_config() const {
    std::vector<MarkedPoint> mp;
    mp.reserve(centers.size());
    for (std::size_t i = 0; i < centers.size(); ++i) mp.push_back({centers[i], ClusterVector(offsets[i])});
    return {window, std::move(mp)};
  }
};

double fold(double v, double lo, double len) {
  double t = std::fmod(v - lo, 2.0 * len);
  if (t < 0) t += 2.0 * len;
  if (t > len) t = 2.0 * len - t;
  return lo + t;
}

void guard(const Point& p) {
  for (int k = 0; k < p.dim(); ++k)
    if (!(std::abs(p[k]) <= kBlowUpGuard))
      throw DynamicsAbort("dynamics: coordinate magnitude exceeded 1e6 (blow-up)");
}

void step_in_place(WorkState& st, const DynamicsParams& params, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double s2 = params.law.offset_std() * params.law.offset_std();
  const double contract = 1.0 - params.dt / s2;
  const double noise = std::sqrt(2.0 * params.dt);
  for (auto& cluster : st.offsets)
    for (auto& y : cluster) {
      for (int k = 0; k < y.dim(); ++k) y[k] = y[k] * contract + noise * normal(rng);
      guard(y);
    }
  if (params.mode == DynamicsMode::offsets_and_centers && !st.centers.empty()) {
    std::vector<Point> grads;
    grads.reserve(st.centers.size());
    for (std::size_t i = 0; i < st.centers.size(); ++i)
      grads.push_back(local_energy_gradient(params.potential, st.centers[i], st.centers, i));
    for (std::size_t i = 0; i < st.centers.size(); ++i) {
      Point& x = st.centers[i];
      for (int k = 0; k < x.dim(); ++k) {
        const double v = x[k] - grads[i][k] * params.dt + noise * normal(rng);
        if (!(std::abs(v) <= kBlowUpGuard)) throw DynamicsAbort("dynamics: coordinate magnitude exceeded 1e6 (blow-up)");
        x[k] = fold(v, st.window.lower()[k], st.window.side(k));
      }
    }
  }
}

double test_statistic(const WorkState& st, const Bump& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < st.centers.size(); ++i)
    for (const auto& y : st.offsets[i]) {
      const Point u = st.centers[i] + y;
      if (f.in_support(u)) s += f.value(u);
    }
  return s;
}

void record(Trajectory& tr, const WorkState& st, const DynamicsParams& params, const std::vector<Bump>& fs,
            double t) {
  tr.times.push_back(t);
  std::vector<double> row;
  row.reserve(fs.size());
  for (const auto& f : fs) row.push_back(test_statistic(st, f));
  tr.stats.push_back(std::move(row));
  if (params.mode == DynamicsMode::offsets_and_centers) tr.energy.push_back(energy(params.potential, st.centers).value());
}

Trajectory run_with_rng(const MarkedConfiguration& initial, const DynamicsParams& params,
                        const std::vector<Bump>& test_functions, Rng& rng) {
  params.validate();
  WorkState st(initial);
  Trajectory tr{.final_config = initial};
  const std::size_t n = params.n_steps();
  record(tr, st, params, test_functions, 0.0);
  for (std::size_t s = 1; s <= n; ++s) {
    step_in_place(st, params, rng);
    if (s % params.record_every == 0 || s == n)
      record(tr, st, params, test_functions, std::min(params.t_end, static_cast<double>(s) * params.dt));
  }
  tr.steps = n;
  if (n > 0) tr.final_config = st.to_config();
  return tr;
}

}  // namespace

MarkedConfiguration langevin_step(const MarkedConfiguration& marked, const DynamicsParams& params, Rng& rng) {
  params.validate();
  WorkState st(marked);
  step_in_place(st, params, rng);
  return st.to_config();
}

Trajectory run_dynamics(const MarkedConfiguration& initial, const DynamicsParams& params,
                        const std::vector<Bump>& test_functions) {
  Rng rng = make_rng(params.seed);
  return run_with_rng(initial, params, test_functions, rng);
}

InvarianceReport check_invariance(const DynamicsParams& params, const GibbsRunParams& gibbs, std::size_t n_replicas,
                                  const Bump& f, const std::vector<MarkedConfiguration>& direct, unsigned jobs,
                                  double tol_sigma) {
  if (n_replicas < 2) throw std::invalid_argument("check_invariance: needs at least two replicas");
  if (direct.size() < 2) throw std::invalid_argument("check_invariance: direct ensemble too small");
  params.validate();
  GibbsRunParams g = gibbs;
  g.n_samples = n_replicas;
  g.seed = derive_seed(params.seed, 0x5eed);
  const auto starts = lift_ensemble(sample_gibbs(g).samples, params.law, derive_seed(params.seed, 0x11f7));

  std::vector<Trajectory> runs(n_replicas);
  parallel_for(n_replicas, jobs, [&](std::size_t i) {
    Rng rng = make_rng(params.seed, i + 1);
    runs[i] = run_with_rng(starts[i], params, {f}, rng);
  });

  InvarianceReport rep;
  rep.n_replicas = n_replicas;
  std::vector<double> s0, s1, tavg, offsets;
  for (std::size_t i = 0; i < n_replicas; ++i) {
    const auto& tr = runs[i];
    s0.push_back(tr.stats.front()[0]);
    s1.push_back(tr.stats.back()[0]);
    tavg.push_back(tr.time_average(0));
    for (const auto& z : tr.final_config.marked_points())
      for (const auto& y : z.cluster.offsets())
        for (int k = 0; k < y.dim(); ++k) offsets.push_back(y[k]);
    const auto& c0 = starts[i].marked_points();
    const auto& c1 = tr.final_config.marked_points();
    for (std::size_t j = 0; j < c0.size(); ++j)
      if (!(c0[j].center == c1[j].center)) rep.centers_unchanged = false;
  }
  rep.mean_shift = paired_report("dynamics_mean_shift", s1, s0, tol_sigma);
  rep.ks_statistic = stats::ks_two_sample(s0, s1);

  const double s = params.law.offset_std();
  rep.continuous_variance = s * s;
  rep.discrete_variance = s * s / (1.0 - params.dt / (2.0 * s * s));
  if (!offsets.empty()) {
    stats::Accumulator acc;
    for (double v : offsets) acc.add(v * v);
    rep.offset_variance = acc.mean();
    rep.offset_variance_se = acc.se();
    rep.ks_offsets = stats::ks_normal(offsets, 0.0, s);
    const bool var_off = std::abs(rep.offset_variance - rep.continuous_variance) > tol_sigma * rep.offset_variance_se;
    rep.discretization_bias = var_off || rep.ks_offsets.p_value < 0.01;
  } else {
    rep.ks_offsets = {0.0, 1.0};
  }

  std::vector<double> direct_stats;
  direct_stats.reserve(direct.size());
  for (const auto& m : direct) {
    double v = 0.0;
    for (const auto& u : projected_points(m))
      if (f.in_support(u)) v += f.value(u);
    direct_stats.push_back(v);
  }
  rep.time_average = independent_report("dynamics_time_average", stats::mean_se(tavg), stats::mean_se(direct_stats),
                                        n_replicas, tol_sigma);

  if (params.mode == DynamicsMode::offsets_and_centers) {
    std::vector<double> mean_energy(runs.front().energy.size(), 0.0);
    for (const auto& tr : runs)
      for (std::size_t k = 0; k < mean_energy.size(); ++k) mean_energy[k] += tr.energy[k] / static_cast<double>(n_replicas);
    rep.energy_trend_p = stats::mann_kendall_p_corrected(mean_energy);
  }

  rep.pass = rep.mean_shift.pass && rep.ks_statistic.p_value > 0.01 && !rep.discretization_bias &&
             rep.time_average.pass && rep.energy_trend_p > 0.01;
  return rep;
}

}  // namespace gcl
