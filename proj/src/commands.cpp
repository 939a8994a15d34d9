#include "gcl/commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "gcl/io.hpp"
#include "gcl/parallel.hpp"

namespace gcl::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kLiftStream = 0x6c696674;
constexpr std::uint64_t kTaskStream = 0x7a5c;
constexpr std::uint64_t kDiagnoseStream = 0xd1a9;
constexpr std::uint64_t kDirectStream = 0xd12ec7;
constexpr std::uint64_t kTraceStream = 0x7ace;

RunConfig load(const CommandOptions& opts) {
  RunConfig cfg = load_config(opts.config_path);
  if (opts.seed) override_seed(cfg, *opts.seed);
  if (opts.out_dir) {
    cfg.output_dir = *opts.out_dir;
    cfg.materialized["output_dir"] = *opts.out_dir;
  }
  return cfg;
}

// Shared error handling: configuration problems exit 2, anything else 3.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kConfigurationError;
  } catch (const InvariantError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kConfigurationError;
  } catch (const DynamicsAbort& e) {
    err << "aborted: " << e.what() << "\n";
    return kRuntimeAbort;
  } catch (const std::exception& e) {
    err << "aborted: " << e.what() << "\n";
    return kRuntimeAbort;
  }
}

std::string to_text(const auto& writer) {
  std::ostringstream ss;
  writer(ss);
  return ss.str();
}

std::string fixed(double v, int precision = 6) {
  std::ostringstream ss;
  ss << std::setprecision(precision) << v;
  return ss.str();
}

}  // namespace

unsigned jobs_from_env() {
  const char* v = std::getenv("GCL_JOBS");
  if (!v || !*v) return 1;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  return (*end == '\0' && n > 0) ? static_cast<unsigned>(n) : 1;
}

int cmd_sample(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load(opts);
    const GibbsEnsemble ens = sample_gibbs(cfg.sampler);
    const auto marked = lift_ensemble(ens.samples, cfg.law, derive_seed(cfg.sampler.seed, kLiftStream));
    const fs::path dir = cfg.output_dir;

    io::write_text_file(dir / "centers.csv",
                        to_text([&](std::ostream& s) { io::write_ground_ensemble(s, ens.samples, cfg.dim); }));
    io::write_text_file(dir / "marked.csv",
                        to_text([&](std::ostream& s) { io::write_marked_ensemble(s, marked, cfg.dim); }));
    io::write_text_file(dir / "count_trace.csv", to_text([&](std::ostream& s) {
                          s << "sample_index,count\n";
                          for (std::size_t i = 0; i < ens.count_trace.size(); ++i)
                            s << i << "," << ens.count_trace[i] << "\n";
                        }));

    ojson meta;
    meta["n_samples"] = ens.samples.size();
    meta["sampling_digest"] = cfg.sampling_digest;
    ojson acc;
    const char* names[] = {"birth", "death", "move"};
    for (int k = 0; k < 3; ++k) {
      const auto kind = static_cast<MoveKind>(k);
      acc[names[k]] = {{"proposed", ens.acceptance.proposed[k]},
                       {"accepted", ens.acceptance.accepted[k]},
                       {"rate", ens.acceptance.rate(kind)}};
    }
    meta["acceptance"] = acc;
    const PairPotential& pot = cfg.sampler.potential;
    if (pot.truncated())
      meta["truncation"] = "lj_6_12 set to 0 beyond r = " + io::format_double(pot.cutoff()) + " (not shifted)";
    else
      meta["truncation"] = nullptr;
    meta["config"] = cfg.materialized;
    io::write_text_file(dir / "metadata.json", meta.dump(2) + "\n");

    out << "sampled " << ens.samples.size() << " configurations into " << dir.string() << "\n";
    return int{kPass};
  });
}

IdentityReport run_task(const VerifyTask& task, const RunConfig& cfg, const std::vector<GroundConfiguration>& centers,
                        const std::vector<MarkedConfiguration>& marked, Rng& rng) {
  const double tol = task.tol_sigma;
  IdentityReport r = std::visit(
      [&](const auto& t) -> IdentityReport {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, GnzTask>) {
          return check_gnz(centers, cfg.sampler.potential, cfg.sampler.theta, t.h, rng, t.n_inner, tol);
        } else if constexpr (std::is_same_v<T, LaplaceTask>) {
          return check_laplace_projection(marked, cfg.law, t.f, t.n_inner, rng, tol);
        } else if constexpr (std::is_same_v<T, CorrelationTask>) {
          return check_correlation_projection(marked, t.b1, t.b2, t.a1, t.a2, cfg.law, tol);
        } else if constexpr (std::is_same_v<T, QuasiInvarianceTask>) {
          const ClusterLaw law = t.corrupt_offset_std ? cfg.law.with_offset_std(*t.corrupt_offset_std) : cfg.law;
          return check_quasi_invariance(marked, t.phi, t.f, law, tol);
        } else if constexpr (std::is_same_v<T, RndNormalizationTask>) {
          const ClusterLaw law = t.corrupt_offset_std ? cfg.law.with_offset_std(*t.corrupt_offset_std) : cfg.law;
          return check_rnd_normalization(marked, t.phi, law, tol);
        } else {
          return check_ibp(marked, t.v, t.f, cfg.law, tol);
        }
      },
      task.check);
  r.identity = task.name;
  r.params_digest = task.digest;
  return r;
}

int cmd_verify(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load(opts);
    const fs::path dir = cfg.output_dir;
    std::vector<IdentityReport> reports(cfg.tasks.size());

    if (!cfg.tasks.empty()) {
      const fs::path meta_path = dir / "metadata.json";
      if (!fs::exists(meta_path) || !fs::exists(dir / "centers.csv") || !fs::exists(dir / "marked.csv")) {
        err << "error: no ensemble found in " << dir.string() << "; run `gcl sample --config " << opts.config_path
            << "` first\n";
        return int{kConfigurationError};
      }
      const auto meta = nlohmann::json::parse(io::read_text_file(meta_path));
      if (meta.value("sampling_digest", std::string{}) != cfg.sampling_digest)
        throw ConfigError(opts.config_path, 1,
                          "ensemble in " + dir.string() +
                              " was sampled with different parameters; rerun `gcl sample` with this configuration");
      const auto n = meta.at("n_samples").get<std::size_t>();
      std::ifstream cin(dir / "centers.csv"), min(dir / "marked.csv");
      const auto centers = io::read_ground_ensemble(cin, cfg.window, n);
      const auto marked = io::read_marked_ensemble(min, cfg.window, n);

      parallel_for(cfg.tasks.size(), opts.jobs, [&](std::size_t i) {
        Rng rng = make_rng(cfg.sampler.seed, kTaskStream + i);
        reports[i] = run_task(cfg.tasks[i], cfg, centers, marked, rng);
      });
    }

    ojson arr = ojson::array();
    bool all_pass = true;
    for (const auto& r : reports) {
      arr.push_back(io::to_json(r));
      all_pass = all_pass && r.pass;
    }
    io::write_text_file(dir / "report.json", arr.dump(2) + "\n");

    out << std::left << std::setw(28) << "identity" << std::setw(14) << "lhs" << std::setw(14) << "rhs"
        << std::setw(12) << "z" << std::setw(8) << "n"
        << "verdict\n";
    for (const auto& r : reports)
      out << std::left << std::setw(28) << r.identity << std::setw(14) << fixed(r.lhs) << std::setw(14)
          << fixed(r.rhs) << std::setw(12) << fixed(r.z, 4) << std::setw(8) << r.n << (r.pass ? "pass" : "FAIL")
          << "\n";
    return int{all_pass ? kPass : kVerificationFailure};
  });
}

int cmd_dynamics(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load(opts);
    if (!cfg.dynamics) throw ConfigError(opts.config_path, 1, "no \"dynamics\" block in configuration");
    const DynamicsConfig& dc = *cfg.dynamics;
    const fs::path dir = cfg.output_dir;

    // Example trajectory from one draw of the cluster pipeline.
    Rng trace_rng = make_rng(dc.params.seed, kTraceStream);
    const ClusterProcessSample start = sample_cluster_process(cfg.sampler, cfg.law, trace_rng);
    const Trajectory tr = run_dynamics(start.marked, dc.params, {dc.test_function});
    io::write_text_file(dir / "trajectory.csv",
                        to_text([&](std::ostream& s) { io::write_trajectory(s, tr, {"f_q"}); }));
    io::write_text_file(dir / "final.csv",
                        to_text([&](std::ostream& s) { io::write_marked(s, tr.final_config); }));

    GibbsRunParams direct_params = cfg.sampler;
    direct_params.n_samples = dc.n_direct;
    direct_params.seed = derive_seed(dc.params.seed, kDirectStream);
    const auto direct_centers = sample_gibbs(direct_params).samples;
    const auto direct = lift_ensemble(direct_centers, cfg.law, derive_seed(dc.params.seed, kLiftStream));

    const InvarianceReport rep =
        check_invariance(dc.params, cfg.sampler, dc.n_replicas, dc.test_function, direct, opts.jobs, cfg.tol_sigma);
    ojson j = io::to_json(rep);
    j["config"] = cfg.materialized;
    io::write_text_file(dir / "dynamics_report.json", j.dump(2) + "\n");

    out << "steps per replica: " << dc.params.n_steps() << ", replicas: " << rep.n_replicas << "\n"
        << "mean shift z = " << fixed(rep.mean_shift.z, 4) << ", KS(f,q) p = " << fixed(rep.ks_statistic.p_value, 4)
        << ", KS(offsets) p = " << fixed(rep.ks_offsets.p_value, 4) << "\n"
        << "offset variance " << fixed(rep.offset_variance) << " (s^2 = " << fixed(rep.continuous_variance)
        << ", discrete " << fixed(rep.discrete_variance) << ")" << (rep.discretization_bias ? "  DISCRETIZATION BIAS" : "")
        << "\n"
        << "time average z = " << fixed(rep.time_average.z, 4) << "\n"
        << "verdict: " << (rep.pass ? "pass" : "FAIL") << "\n";
    return int{rep.pass ? kPass : kVerificationFailure};
  });
}

int cmd_diagnose(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load(opts);
    Rng rng = make_rng(cfg.sampler.seed, kDiagnoseStream);
    const DiagnosticsReport rep =
        diagnose(cfg.law, cfg.sampler.theta.intensity(), cfg.diagnose.region, cfg.diagnose.n_mc, rng);
    ojson j = io::to_json(rep);
    io::write_text_file(fs::path(cfg.output_dir) / "diagnostics.json", j.dump(2) + "\n");
    out << j.dump(2) << "\n";
    return int{kPass};
  });
}

}  // namespace gcl::cli
