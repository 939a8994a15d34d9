#pragma once

// Geometric primitives and finite configurations in a bounded window of R^d.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace gcl {

inline constexpr int kMaxDim = 3;

/// Thrown when a value violates a type invariant at construction.
class InvariantError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A location in R^d, 1 <= d <= 3.
class Point {
 public:
  Point() = default;
  explicit Point(int dim);
  Point(std::initializer_list<double> coords);
  explicit Point(std::span<const double> coords);

  int dim() const { return dim_; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  std::span<const double> coords() const { return {c_.data(), static_cast<std::size_t>(dim_)}; }

  bool is_finite() const;
  double norm2() const;
  double norm() const { return std::sqrt(norm2()); }

  Point& operator+=(const Point& o);
  Point& operator-=(const Point& o);
  Point& operator*=(double s);

  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(Point a, double s) { return a *= s; }
  friend Point operator*(double s, Point a) { return a *= s; }
  friend bool operator==(const Point& a, const Point& b);

 private:
  std::array<double, kMaxDim> c_{};
  int dim_ = 0;
};

double dot(const Point& a, const Point& b);
double distance2(const Point& a, const Point& b);
inline double distance(const Point& a, const Point& b) { return std::sqrt(distance2(a, b)); }
bool lex_less(const Point& a, const Point& b);

/// Axis-aligned box [lower, upper]. Used both as the simulation window and as a
/// counting region.
class Window {
 public:
  Window(Point lower, Point upper);
  static Window unit(int dim);

  int dim() const { return lower_.dim(); }
  const Point& lower() const { return lower_; }
  const Point& upper() const { return upper_; }
  double side(int i) const { return upper_[i] - lower_[i]; }
  double volume() const;
  bool contains(const Point& p) const;
  /// Box grown by `margin` on every side.
  Window expanded(double margin) const;
  bool intersects(const Window& o) const;
  /// Volume of the intersection with `o` (0 when disjoint).
  double overlap_volume(const Window& o) const;
  Window translated(const Point& shift) const;

  friend bool operator==(const Window&, const Window&) = default;

 private:
  Point lower_, upper_;
};

struct Ball {
  Point center;
  double radius = 0.0;
  bool contains(const Point& p) const { return distance2(p, center) <= radius * radius; }
};

/// Region over which points are counted.
using Region = std::variant<Window, Ball>;

bool region_contains(const Region& region, const Point& p);
int region_dim(const Region& region);

/// Finite configuration in a window. Ordered storage, set semantics.
class GroundConfiguration {
 public:
  explicit GroundConfiguration(Window window) : window_(std::move(window)) {}
  GroundConfiguration(Window window, std::vector<Point> points);

  const Window& window() const { return window_; }
  const std::vector<Point>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  int dim() const { return window_.dim(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }

  /// True when no two points coincide. O(n log n).
  bool is_simple() const;
  /// Order-insensitive equality of the point sets (windows must match).
  bool same_set(const GroundConfiguration& other) const;

 private:
  Window window_;
  std::vector<Point> points_;
};

/// Tuple of in-cluster offsets (y_1, ..., y_n).
class ClusterVector {
 public:
  ClusterVector() = default;
  explicit ClusterVector(std::vector<Point> offsets);

  std::size_t size() const { return offsets_.size(); }
  bool empty() const { return offsets_.empty(); }
  const std::vector<Point>& offsets() const { return offsets_; }
  const Point& operator[](std::size_t i) const { return offsets_[i]; }

  friend bool operator==(const ClusterVector&, const ClusterVector&) = default;

 private:
  std::vector<Point> offsets_;
};

struct MarkedPoint {
  Point center;
  ClusterVector cluster;
  friend bool operator==(const MarkedPoint&, const MarkedPoint&) = default;
};

/// Finite configuration of (center, cluster) pairs.
class MarkedConfiguration {
 public:
  explicit MarkedConfiguration(Window window) : window_(std::move(window)) {}
  MarkedConfiguration(Window window, std::vector<MarkedPoint> marked);

  const Window& window() const { return window_; }
  const std::vector<MarkedPoint>& marked_points() const { return marked_; }
  std::size_t size() const { return marked_.size(); }
  bool empty() const { return marked_.empty(); }
  int dim() const { return window_.dim(); }
  const MarkedPoint& operator[](std::size_t i) const { return marked_[i]; }
  /// Total number of offsets over all clusters.
  std::size_t total_offsets() const;

 private:
  Window window_;
  std::vector<MarkedPoint> marked_;
};

std::size_t count_in(const GroundConfiguration& config, const Region& region);
double sum_over(const GroundConfiguration& config, const std::function<double(const Point&)>& f);
GroundConfiguration restrict(const GroundConfiguration& config, const Region& region);

/// Indicator of a region as a scalar field.
std::function<double(const Point&)> indicator(Region region);

}  // namespace gcl
