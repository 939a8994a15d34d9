#include "gcl/core.hpp"

#include <algorithm>

namespace gcl {

Point::Point(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) throw InvariantError("Point: dimension must be in [1, 3]");
}

Point::Point(std::initializer_list<double> coords)
    : Point(std::span<const double>(coords.begin(), coords.size())) {}

Point::Point(std::span<const double> coords) : Point(static_cast<int>(coords.size())) {
  std::copy(coords.begin(), coords.end(), c_.begin());
  if (!is_finite()) throw InvariantError("Point: non-finite coordinate");
}

bool Point::is_finite() const {
  for (int i = 0; i < dim_; ++i)
    if (!std::isfinite(c_[i])) return false;
  return true;
}

double Point::norm2() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) s += c_[i] * c_[i];
  return s;
}

Point& Point::operator+=(const Point& o) {
  for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
  return *this;
}

Point& Point::operator-=(const Point& o) {
  for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
  return *this;
}

Point& Point::operator*=(double s) {
  for (int i = 0; i < dim_; ++i) c_[i] *= s;
  return *this;
}

bool operator==(const Point& a, const Point& b) {
  if (a.dim_ != b.dim_) return false;
  for (int i = 0; i < a.dim_; ++i)
    if (a.c_[i] != b.c_[i]) return false;
  return true;
}

double dot(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double distance2(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

bool lex_less(const Point& a, const Point& b) {
  return std::lexicographical_compare(a.coords().begin(), a.coords().end(), b.coords().begin(),
                                      b.coords().end());
}

Window::Window(Point lower, Point upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.dim() != upper_.dim() || lower_.dim() == 0)
    throw InvariantError("Window: lower/upper dimension mismatch");
  for (int i = 0; i < lower_.dim(); ++i)
    if (!(lower_[i] < upper_[i])) throw InvariantError("Window: requires lower < upper in every coordinate");
}

Window Window::unit(int dim) {
  Point lo(dim), hi(dim);
  for (int i = 0; i < dim; ++i) hi[i] = 1.0;
  return {lo, hi};
}

double Window::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= side(i);
  return v;
}

bool Window::contains(const Point& p) const {
  for (int i = 0; i < dim(); ++i)
    if (p[i] < lower_[i] || p[i] > upper_[i]) return false;
  return true;
}

Window Window::expanded(double margin) const {
  Point lo = lower_, hi = upper_;
  for (int i = 0; i < dim(); ++i) {
    lo[i] -= margin;
    hi[i] += margin;
  }
  return {lo, hi};
}

bool Window::intersects(const Window& o) const {
  for (int i = 0; i < dim(); ++i)
    if (upper_[i] <= o.lower_[i] || o.upper_[i] <= lower_[i]) return false;
  return true;
}

double Window::overlap_volume(const Window& o) const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) {
    const double len = std::min(upper_[i], o.upper_[i]) - std::max(lower_[i], o.lower_[i]);
    if (len <= 0) return 0.0;
    v *= len;
  }
  return v;
}

Window Window::translated(const Point& shift) const { return {lower_ + shift, upper_ + shift}; }

bool region_contains(const Region& region, const Point& p) {
  return std::visit([&](const auto& r) { return r.contains(p); }, region);
}

int region_dim(const Region& region) {
  if (const auto* w = std::get_if<Window>(&region)) return w->dim();
  return std::get<Ball>(region).center.dim();
}

GroundConfiguration::GroundConfiguration(Window window, std::vector<Point> points)
    : window_(std::move(window)), points_(std::move(points)) {
  for (const auto& p : points_) {
    if (p.dim() != window_.dim()) throw InvariantError("GroundConfiguration: point dimension mismatch");
    if (!window_.contains(p)) throw InvariantError("GroundConfiguration: point outside window");
  }
}

bool GroundConfiguration::is_simple() const {
  std::vector<Point> sorted = points_;
  std::sort(sorted.begin(), sorted.end(), lex_less);
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

bool GroundConfiguration::same_set(const GroundConfiguration& other) const {
  if (!(window_ == other.window_) || size() != other.size()) return false;
  std::vector<Point> a = points_, b = other.points_;
  std::sort(a.begin(), a.end(), lex_less);
  std::sort(b.begin(), b.end(), lex_less);
  return a == b;
}

ClusterVector::ClusterVector(std::vector<Point> offsets) : offsets_(std::move(offsets)) {
  for (const auto& y : offsets_)
    if (!y.is_finite()) throw InvariantError("ClusterVector: non-finite offset");
  for (const auto& y : offsets_)
    if (y.dim() != offsets_.front().dim()) throw InvariantError("ClusterVector: offsets of mixed dimension");
}

MarkedConfiguration::MarkedConfiguration(Window window, std::vector<MarkedPoint> marked)
    : window_(std::move(window)), marked_(std::move(marked)) {
  std::vector<Point> centers;
  centers.reserve(marked_.size());
  for (const auto& m : marked_) {
    if (m.center.dim() != window_.dim()) throw InvariantError("MarkedConfiguration: dimension mismatch");
    if (!window_.contains(m.center)) throw InvariantError("MarkedConfiguration: center outside window");
    for (const auto& y : m.cluster.offsets())
      if (y.dim() != window_.dim()) throw InvariantError("MarkedConfiguration: offset dimension mismatch");
    centers.push_back(m.center);
  }
  std::sort(centers.begin(), centers.end(), lex_less);
  if (std::adjacent_find(centers.begin(), centers.end()) != centers.end())
    throw InvariantError("MarkedConfiguration: coincident centers");
}

std::size_t MarkedConfiguration::total_offsets() const {
  std::size_t n = 0;
  for (const auto& m : marked_) n += m.cluster.size();
  return n;
}

std::size_t count_in(const GroundConfiguration& config, const Region& region) {
  return static_cast<std::size_t>(std::count_if(config.points().begin(), config.points().end(),
                                                [&](const Point& p) { return region_contains(region, p); }));
}

double sum_over(const GroundConfiguration& config, const std::function<double(const Point&)>& f) {
  double s = 0.0;
  for (const auto& p : config.points()) s += f(p);
  return s;
}

GroundConfiguration restrict(const GroundConfiguration& config, const Region& region) {
  std::vector<Point> kept;
  for (const auto& p : config.points())
    if (region_contains(region, p)) kept.push_back(p);
  return {config.window(), std::move(kept)};
}

std::function<double(const Point&)> indicator(Region region) {
  return [r = std::move(region)](const Point& p) { return region_contains(r, p) ? 1.0 : 0.0; };
}

}  // namespace gcl
