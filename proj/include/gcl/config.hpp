#pragma once

// Run configuration: a single JSON document, validated on load. Errors carry
// the line of the offending value.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "gcl/calculus.hpp"
#include "gcl/cluster.hpp"
#include "gcl/dynamics.hpp"
#include "gcl/potential.hpp"
#include "gcl/sampler.hpp"
#include "gcl/verify.hpp"

namespace gcl {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct GnzTask {
  GnzTestFunction h;
  std::size_t n_inner = 4;
};
struct LaplaceTask {
  Bump f;
  std::size_t n_inner = 16;
};
struct CorrelationTask {
  Window b1, b2;
  MarkEvent a1, a2;
};
struct QuasiInvarianceTask {
  Diffeomorphism phi;
  CylinderFunction f;
  /// Negative control: evaluate R with this offset standard deviation.
  std::optional<double> corrupt_offset_std;
};
struct RndNormalizationTask {
  Diffeomorphism phi;
  std::optional<double> corrupt_offset_std;
};
struct IbpTask {
  VectorField v;
  CylinderFunction f;
};

struct VerifyTask {
  std::string name;
  std::variant<GnzTask, LaplaceTask, CorrelationTask, QuasiInvarianceTask, RndNormalizationTask, IbpTask> check;
  double tol_sigma = kDefaultTolSigma;
  /// Digest of the task block and the sampling parameters it depends on.
  std::string digest;
};

struct DynamicsConfig {
  DynamicsParams params;
  std::size_t n_replicas = 32;
  std::size_t n_direct = 2000;
  Bump test_function{Point{0.5, 0.5}, 0.2, 1.0};
};

struct DiagnoseConfig {
  Window region = Window::unit(2);
  std::size_t n_mc = 10000;
};

struct RunConfig {
  int dim = 2;
  Window window = Window::unit(2);
  ClusterLaw law{SizeDistribution::fixed(1), 0.05, 2};
  GibbsRunParams sampler = default_run_params(PairPotential::zero(), ReferenceMeasure(50.0, Window::unit(2)));
  std::vector<VerifyTask> tasks;
  double tol_sigma = kDefaultTolSigma;
  std::optional<DynamicsConfig> dynamics;
  DiagnoseConfig diagnose;
  std::string output_dir = "out";
  /// Parsed document with every default filled in.
  nlohmann::ordered_json materialized;
  /// Digest of the sampling-relevant part (potential, theta, law, sampler).
  std::string sampling_digest;
};

/// Parses and validates a configuration. `source` names the document in
/// error messages.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Replaces the master seed (sampler seed; other streams derive from it).
void override_seed(RunConfig& config, std::uint64_t seed);

/// Maps JSON pointers ("/sampler/seed") to the 1-based line of the value.
std::vector<std::pair<std::string, std::size_t>> locate_values(const std::string& text);

}  // namespace gcl
