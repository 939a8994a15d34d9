#include "gcl/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace gcl::io {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw FormatError("line " + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

std::size_t parse_index(const std::string& s, std::size_t line) {
  std::size_t v = 0;
  const char* end = s.data() + s.size();
  auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw FormatError("line " + std::to_string(line) + ": bad index '" + s + "'");
  return v;
}

std::string header_of(const std::string& prefix, int dim) {
  std::string h;
  for (int i = 1; i <= dim; ++i) {
    if (i > 1) h += ",";
    h += prefix + std::to_string(i);
  }
  return h;
}

std::string marked_header(int dim) {
  return header_of("center_", dim) + ",cluster_index," + header_of("offset_", dim);
}

void expect_header(std::istream& in, const std::string& expected) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("missing header, expected '" + expected + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected) throw FormatError("unexpected header '" + line + "', expected '" + expected + "'");
}

void write_point_fields(std::ostream& out, const Point& p) {
  for (int i = 0; i < p.dim(); ++i) {
    if (i > 0) out << ',';
    out << format_double(p[i]);
  }
}

Point parse_point(const std::vector<std::string>& f, std::size_t first, int dim, std::size_t line) {
  Point p(dim);
  for (int i = 0; i < dim; ++i) p[i] = parse_double(f[first + static_cast<std::size_t>(i)], line);
  if (!p.is_finite()) throw FormatError("line " + std::to_string(line) + ": non-finite coordinate");
  return p;
}

// Rows of the marked layout grouped by (sample, cluster_index).
struct MarkedRows {
  std::map<std::pair<std::size_t, std::size_t>, MarkedPoint> clusters;
};

void write_marked_rows(std::ostream& out, const MarkedConfiguration& m, const std::string& prefix) {
  const int d = m.dim();
  for (std::size_t c = 0; c < m.size(); ++c) {
    const auto& z = m[c];
    if (z.cluster.empty()) {
      out << prefix;
      write_point_fields(out, z.center);
      out << ',' << c;
      for (int i = 0; i < d; ++i) out << ',';
      out << '\n';
      continue;
    }
    for (const auto& y : z.cluster.offsets()) {
      out << prefix;
      write_point_fields(out, z.center);
      out << ',' << c << ',';
      write_point_fields(out, y);
      out << '\n';
    }
  }
}

std::vector<MarkedConfiguration> read_marked_rows(std::istream& in, const Window& window, std::size_t n_samples,
                                                  bool with_sample) {
  const int d = window.dim();
  const std::string base = marked_header(d);
  expect_header(in, with_sample ? "sample_index," + base : base);
  const std::size_t shift = with_sample ? 1 : 0;
  const std::size_t ncols = shift + 2 * static_cast<std::size_t>(d) + 1;
  std::map<std::pair<std::size_t, std::size_t>, MarkedPoint> groups;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split(line);
    if (f.size() != ncols) throw FormatError("line " + std::to_string(lineno) + ": expected " + std::to_string(ncols) + " fields");
    const std::size_t sample = with_sample ? parse_index(f[0], lineno) : 0;
    if (sample >= n_samples) throw FormatError("line " + std::to_string(lineno) + ": sample_index out of range");
    const Point center = parse_point(f, shift, d, lineno);
    const std::size_t cidx = parse_index(f[shift + static_cast<std::size_t>(d)], lineno);
    const std::size_t off_first = shift + static_cast<std::size_t>(d) + 1;
    bool empty_offset = true;
    for (int i = 0; i < d; ++i) empty_offset = empty_offset && f[off_first + static_cast<std::size_t>(i)].empty();
    auto [it, inserted] = groups.try_emplace({sample, cidx}, MarkedPoint{center, {}});
    if (!inserted && !(it->second.center == center))
      throw FormatError("line " + std::to_string(lineno) + ": cluster_index reused with a different center");
    if (!empty_offset) {
      std::vector<Point> offs = it->second.cluster.offsets();
      offs.push_back(parse_point(f, off_first, d, lineno));
      it->second.cluster = ClusterVector(std::move(offs));
    }
  }
  std::vector<std::vector<MarkedPoint>> per_sample(n_samples);
  for (auto& [key, mp] : groups) per_sample[key.first].push_back(std::move(mp));
  std::vector<MarkedConfiguration> out;
  out.reserve(n_samples);
  for (auto& v : per_sample) out.emplace_back(window, std::move(v));
  return out;
}

}  // namespace

void write_points(std::ostream& out, const GroundConfiguration& config) {
  out << header_of("x", config.dim()) << '\n';
  for (const auto& p : config.points()) {
    write_point_fields(out, p);
    out << '\n';
  }
}

std::vector<Point> read_points(std::istream& in, int dim) {
  expect_header(in, header_of("x", dim));
  std::vector<Point> pts;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split(line);
    if (f.size() != static_cast<std::size_t>(dim))
      throw FormatError("line " + std::to_string(lineno) + ": expected " + std::to_string(dim) + " fields");
    pts.push_back(parse_point(f, 0, dim, lineno));
  }
  return pts;
}

void write_marked(std::ostream& out, const MarkedConfiguration& marked) {
  out << marked_header(marked.dim()) << '\n';
  write_marked_rows(out, marked, "");
}

MarkedConfiguration read_marked(std::istream& in, const Window& window) {
  return std::move(read_marked_rows(in, window, 1, false).front());
}

void write_ground_ensemble(std::ostream& out, const std::vector<GroundConfiguration>& ensemble, int dim) {
  out << "sample_index," << header_of("x", dim) << '\n';
  for (std::size_t s = 0; s < ensemble.size(); ++s)
    for (const auto& p : ensemble[s].points()) {
      out << s << ',';
      write_point_fields(out, p);
      out << '\n';
    }
}

std::vector<GroundConfiguration> read_ground_ensemble(std::istream& in, const Window& window, std::size_t n_samples) {
  const int d = window.dim();
  expect_header(in, "sample_index," + header_of("x", d));
  std::vector<std::vector<Point>> per(n_samples);
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split(line);
    if (f.size() != static_cast<std::size_t>(d) + 1)
      throw FormatError("line " + std::to_string(lineno) + ": expected " + std::to_string(d + 1) + " fields");
    const std::size_t s = parse_index(f[0], lineno);
    if (s >= n_samples) throw FormatError("line " + std::to_string(lineno) + ": sample_index out of range");
    per[s].push_back(parse_point(f, 1, d, lineno));
  }
  std::vector<GroundConfiguration> out;
  out.reserve(n_samples);
  for (auto& pts : per) out.emplace_back(window, std::move(pts));
  return out;
}

void write_marked_ensemble(std::ostream& out, const std::vector<MarkedConfiguration>& ensemble, int dim) {
  out << "sample_index," << marked_header(dim) << '\n';
  for (std::size_t s = 0; s < ensemble.size(); ++s) write_marked_rows(out, ensemble[s], std::to_string(s) + ",");
}

std::vector<MarkedConfiguration> read_marked_ensemble(std::istream& in, const Window& window, std::size_t n_samples) {
  return read_marked_rows(in, window, n_samples, true);
}

nlohmann::ordered_json to_json(const IdentityReport& r) {
  nlohmann::ordered_json j;
  j["identity"] = r.identity;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["lhs_se"] = r.lhs_se;
  j["rhs_se"] = r.rhs_se;
  j["diff_se"] = r.diff_se;
  j["z"] = std::isfinite(r.z) ? nlohmann::ordered_json(r.z) : nlohmann::ordered_json(r.z > 0 ? "inf" : "-inf");
  j["n"] = r.n;
  j["tol_sigma"] = r.tol_sigma;
  j["verdict"] = r.pass ? "pass" : "fail";
  j["params_digest"] = r.params_digest;
  return j;
}

nlohmann::ordered_json to_json(const DiagnosticsReport& r) {
  nlohmann::ordered_json j;
  j["mean_cluster_size"] = r.mean_cluster_size;
  j["second_moment"] = r.second_moment;
  j["empirical_mean_size"] = r.empirical_mean_size;
  j["sigma_ZB_estimate"] = r.sigma_zb;
  j["sigma_ZB_se"] = r.sigma_zb_se;
  j["sigma_ZB_union_bound"] = r.sigma_zb_union_bound;
  j["n_mc"] = r.n_mc;
  j["conditions"] = {{"a_i", to_string(r.a_i)},
                     {"a_ii", to_string(r.a_ii)},
                     {"b_i", to_string(r.b_i)},
                     {"b_ii", to_string(r.b_ii)}};
  return j;
}

nlohmann::ordered_json to_json(const InvarianceReport& r) {
  nlohmann::ordered_json j;
  j["n_replicas"] = r.n_replicas;
  j["mean_shift"] = to_json(r.mean_shift);
  j["ks_statistic"] = {{"D", r.ks_statistic.statistic}, {"p", r.ks_statistic.p_value}};
  j["ks_offsets"] = {{"D", r.ks_offsets.statistic}, {"p", r.ks_offsets.p_value}};
  j["offset_variance"] = r.offset_variance;
  j["offset_variance_se"] = r.offset_variance_se;
  j["continuous_variance"] = r.continuous_variance;
  j["discrete_variance"] = r.discrete_variance;
  j["discretization_bias"] = r.discretization_bias;
  j["time_average"] = to_json(r.time_average);
  j["energy_trend_p"] = r.energy_trend_p;
  j["centers_unchanged"] = r.centers_unchanged;
  j["verdict"] = r.pass ? "pass" : "fail";
  return j;
}

void write_trajectory(std::ostream& out, const Trajectory& tr, const std::vector<std::string>& names) {
  out << "time";
  for (const auto& n : names) out << ',' << n;
  if (!tr.energy.empty()) out << ",energy";
  out << '\n';
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    out << format_double(tr.times[k]);
    for (double v : tr.stats[k]) out << ',' << format_double(v);
    if (!tr.energy.empty()) out << ',' << format_double(tr.energy[k]);
    out << '\n';
  }
}

std::string digest(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace gcl::io
