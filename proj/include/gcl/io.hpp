#pragma once

// CSV persistence of point patterns, marked patterns and ensembles, plus the
// JSON shapes of reports.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcl/cluster.hpp"
#include "gcl/core.hpp"
#include "gcl/dynamics.hpp"
#include "gcl/verify.hpp"

namespace gcl::io {

/// Shortest decimal representation that round-trips.
std::string format_double(double v);

/// Thrown on malformed input files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Point pattern: header x1,...,xd; one point per row.
void write_points(std::ostream& out, const GroundConfiguration& config);
std::vector<Point> read_points(std::istream& in, int dim);

// Marked pattern: center_1..center_d,cluster_index,offset_1..offset_d; one
// row per offset, a single row with empty offset fields for an empty cluster.
void write_marked(std::ostream& out, const MarkedConfiguration& marked);
MarkedConfiguration read_marked(std::istream& in, const Window& window);

// Ensembles: the same layouts with a leading sample_index column. Samples
// without rows are empty configurations, so readers take the sample count.
void write_ground_ensemble(std::ostream& out, const std::vector<GroundConfiguration>& ensemble, int dim);
std::vector<GroundConfiguration> read_ground_ensemble(std::istream& in, const Window& window, std::size_t n_samples);
void write_marked_ensemble(std::ostream& out, const std::vector<MarkedConfiguration>& ensemble, int dim);
std::vector<MarkedConfiguration> read_marked_ensemble(std::istream& in, const Window& window, std::size_t n_samples);

nlohmann::ordered_json to_json(const IdentityReport& r);
nlohmann::ordered_json to_json(const DiagnosticsReport& r);
nlohmann::ordered_json to_json(const InvarianceReport& r);

/// Trajectory summary: time column plus one column per test statistic.
void write_trajectory(std::ostream& out, const Trajectory& tr, const std::vector<std::string>& names);

/// 16-hex-digit FNV-1a digest of a string.
std::string digest(const std::string& text);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace gcl::io
