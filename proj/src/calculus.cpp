#include "gcl/calculus.hpp"

#include <cmath>
#include <stdexcept>

namespace gcl {

double bump_profile(double t) {
  if (t >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t));
}

double bump_profile_derivative(double t) {
  if (t >= 1.0) return 0.0;
  const double u = 1.0 - t;
  return -bump_profile(t) / (u * u);
}

double Bump::value(const Point& x) const { return amplitude * bump_profile(distance2(x, center) / (radius * radius)); }

Point Bump::gradient(const Point& x) const {
  const double r2 = radius * radius;
  const double t = distance2(x, center) / r2;
  if (t >= 1.0) return Point(x.dim());
  return (x - center) * (amplitude * bump_profile_derivative(t) * 2.0 / r2);
}

Diffeomorphism::Diffeomorphism(Point amplitude, Point center, double radius)
    : a_(std::move(amplitude)), c_(std::move(center)), r_(radius) {
  if (!(radius > 0) || !std::isfinite(radius)) throw InvariantError("Diffeomorphism: radius must be positive");
  if (a_.dim() != c_.dim()) throw InvariantError("Diffeomorphism: dimension mismatch");
  if (!(a_.norm() * kBumpDerivativeSup * 2.0 / r_ < kContractionMargin))
    throw InvariantError("Diffeomorphism: |a| sup|beta'| 2/r must be below 0.9");
}

Diffeomorphism Diffeomorphism::identity(int dim) { return {Point(dim), Point(dim), 1.0}; }

Point Diffeomorphism::apply(const Point& x) const { return x + a_ * profile().value(x); }

std::vector<double> Diffeomorphism::jacobian(const Point& x) const {
  const int d = dim();
  const Point g = profile().gradient(x);
  std::vector<double> j(static_cast<std::size_t>(d * d), 0.0);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) j[static_cast<std::size_t>(r * d + c)] = (r == c ? 1.0 : 0.0) + a_[r] * g[c];
  return j;
}

double Diffeomorphism::jacobian_det(const Point& x) const {
  // I + a g^T is a rank-one update of the identity.
  return 1.0 + dot(a_, profile().gradient(x));
}

Point Diffeomorphism::invert(const Point& x) const {
  if (a_.norm2() == 0.0) return x;
  // The preimage is x - a s with s solving psi(s) = s - b(x - a s) = 0 on
  // [0, 1]; psi' = 1 + a . grad b >= 0.1 under the contraction bound.
  const Bump b = profile();
  double lo = 0.0, hi = 1.0;
  double s = b.value(x);
  const double anorm = a_.norm();
  for (int it = 0; it < 200; ++it) {
    const Point pre = x - a_ * s;
    const double psi = s - b.value(pre);
    if (anorm * std::abs(psi) < 1e-12) return pre;
    if (psi > 0) hi = s; else lo = s;
    const double dpsi = 1.0 + dot(a_, b.gradient(pre));
    double next = s - psi / dpsi;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo < 1e-16) {
      if (anorm * std::abs(psi) < 1e-12 * (1.0 + x.norm())) return pre;
      break;
    }
    s = next;
  }
  throw std::runtime_error("Diffeomorphism::invert: Newton iteration did not converge");
}

Point apply_diffeo(const Diffeomorphism& phi, const Point& x) { return phi.apply(x); }
double jacobian_det(const Diffeomorphism& phi, const Point& x) { return phi.jacobian_det(x); }
Point invert_diffeo(const Diffeomorphism& phi, const Point& x) { return phi.invert(x); }

VectorField::VectorField(Point amplitude, Point center, double radius)
    : a_(std::move(amplitude)), c_(std::move(center)), r_(radius) {
  if (!(radius > 0) || !std::isfinite(radius)) throw InvariantError("VectorField: radius must be positive");
  if (a_.dim() != c_.dim()) throw InvariantError("VectorField: dimension mismatch");
}

Point VectorField::operator()(const Point& x) const { return a_ * bump_profile(distance2(x, c_) / (r_ * r_)); }

double VectorField::divergence(const Point& x) const { return dot(a_, Bump{c_, r_, 1.0}.gradient(x)); }

CylinderFunction::CylinderFunction(Outer outer, std::vector<double> coeffs, double offset, std::vector<Bump> inner)
    : outer_(outer), coeffs_(std::move(coeffs)), offset_(offset), inner_(std::move(inner)) {
  if (inner_.empty() && outer_ != Outer::constant)
    throw InvariantError("CylinderFunction: needs at least one inner test function");
  if (outer_ != Outer::constant && coeffs_.size() != inner_.size())
    throw InvariantError("CylinderFunction: one coefficient per inner test function");
  if (outer_ == Outer::product)
    for (double c : coeffs_)
      if (!(c >= 0)) throw InvariantError("CylinderFunction: product coefficients must be >= 0");
  for (const auto& b : inner_)
    if (!(b.radius > 0)) throw InvariantError("CylinderFunction: bump radius must be positive");
}

double CylinderFunction::outer_value(std::span<const double> t) const {
  switch (outer_) {
    case Outer::constant: return offset_;
    case Outer::linear:
    case Outer::tanh: {
      double s = offset_;
      for (std::size_t j = 0; j < t.size(); ++j) s += coeffs_[j] * t[j];
      return outer_ == Outer::linear ? s : std::tanh(s);
    }
    case Outer::product: {
      double p = 1.0;
      for (std::size_t j = 0; j < t.size(); ++j) p /= 1.0 + coeffs_[j] * t[j] * t[j];
      return p;
    }
  }
  return 0.0;
}

std::vector<double> CylinderFunction::outer_gradient(std::span<const double> t) const {
  std::vector<double> g(t.size(), 0.0);
  switch (outer_) {
    case Outer::constant: break;
    case Outer::linear: g = coeffs_; break;
    case Outer::tanh: {
      double s = offset_;
      for (std::size_t j = 0; j < t.size(); ++j) s += coeffs_[j] * t[j];
      const double th = std::tanh(s);
      for (std::size_t j = 0; j < t.size(); ++j) g[j] = coeffs_[j] * (1.0 - th * th);
      break;
    }
    case Outer::product: {
      const double p = outer_value(t);
      for (std::size_t j = 0; j < t.size(); ++j) {
        const double q = 1.0 + coeffs_[j] * t[j] * t[j];
        g[j] = -p * 2.0 * coeffs_[j] * t[j] / q;
      }
      break;
    }
  }
  return g;
}

std::vector<double> CylinderFunction::inner_sums(std::span<const Point> points) const {
  std::vector<double> t(inner_.size(), 0.0);
  for (const auto& x : points)
    for (std::size_t j = 0; j < inner_.size(); ++j)
      if (inner_[j].in_support(x)) t[j] += inner_[j].value(x);
  return t;
}

double eval_cylinder(const CylinderFunction& f, std::span<const Point> points) {
  return f.outer_value(f.inner_sums(points));
}

double eval_cylinder(const CylinderFunction& f, const GroundConfiguration& gamma) {
  return eval_cylinder(f, gamma.points());
}

std::vector<std::pair<std::size_t, Point>> grad_cylinder(const CylinderFunction& f, std::span<const Point> points) {
  std::vector<std::pair<std::size_t, Point>> out;
  if (f.outer() == CylinderFunction::Outer::constant) return out;
  const auto t = f.inner_sums(points);
  const auto df = f.outer_gradient(t);
  for (std::size_t i = 0; i < points.size(); ++i) {
    Point g(points[i].dim());
    bool touched = false;
    for (std::size_t j = 0; j < f.inner().size(); ++j) {
      const Bump& b = f.inner()[j];
      if (!b.in_support(points[i])) continue;
      g += b.gradient(points[i]) * df[j];
      touched = true;
    }
    if (touched) out.emplace_back(i, g);
  }
  return out;
}

std::vector<std::pair<std::size_t, Point>> grad_cylinder(const CylinderFunction& f, const GroundConfiguration& gamma) {
  return grad_cylinder(f, gamma.points());
}

MarkedPoint hat_phi(const Diffeomorphism& phi, const MarkedPoint& z) {
  if (phi.amplitude().norm2() == 0.0) return z;
  std::vector<Point> moved;
  moved.reserve(z.cluster.size());
  for (const auto& y : z.cluster.offsets()) {
    const Point u = z.center + y;
    moved.push_back(phi.in_support(u) ? phi.apply(u) - z.center : y);
  }
  return {z.center, ClusterVector(std::move(moved))};
}

MarkedConfiguration hat_phi(const Diffeomorphism& phi, const MarkedConfiguration& marked) {
  std::vector<MarkedPoint> out;
  out.reserve(marked.size());
  for (const auto& z : marked.marked_points()) out.push_back(hat_phi(phi, z));
  return {marked.window(), std::move(out)};
}

double log_rho_phi(const Diffeomorphism& phi, const MarkedPoint& z, const ClusterLaw& law) {
  if (std::isinf(law.size().log_probability(z.cluster.size()))) return 0.0;
  if (phi.amplitude().norm2() == 0.0) return 0.0;
  // Only offsets whose projection lies in supp phi contribute; the rest of
  // h cancels factor by factor.
  double lr = 0.0;
  for (const auto& y : z.cluster.offsets()) {
    const Point u = z.center + y;
    if (!phi.in_support(u)) continue;
    const Point w = phi.invert(u);
    lr += law.log_offset_density(w - z.center) - law.log_offset_density(y) - std::log(phi.jacobian_det(w));
  }
  return lr;
}

double rho_phi(const Diffeomorphism& phi, const MarkedPoint& z, const ClusterLaw& law) {
  return std::exp(log_rho_phi(phi, z, law));
}

double log_rnd_density(const Diffeomorphism& phi, const MarkedConfiguration& marked, const ClusterLaw& law) {
  double lr = 0.0;
  for (const auto& z : marked.marked_points()) lr += log_rho_phi(phi, z, law);
  return lr;
}

double rnd_density_R(const Diffeomorphism& phi, const MarkedConfiguration& marked, const ClusterLaw& law) {
  return std::exp(log_rnd_density(phi, marked, law));
}

std::vector<Point> beta_eta(const ClusterLaw& law, const ClusterVector& y) {
  if (std::isinf(law.size().log_probability(y.size())))
    throw std::domain_error("beta_eta: cluster size has probability 0 under the law");
  const double inv_s2 = 1.0 / (law.offset_std() * law.offset_std());
  std::vector<Point> out;
  out.reserve(y.size());
  for (const auto& yi : y.offsets()) out.push_back(yi * (-inv_s2));
  return out;
}

double beta_v(const ClusterLaw& law, const VectorField& v, const Point& x, const ClusterVector& y) {
  if (std::isinf(law.size().log_probability(y.size())))
    throw std::domain_error("beta_v: cluster size has probability 0 under the law");
  const double inv_s2 = 1.0 / (law.offset_std() * law.offset_std());
  double s = 0.0;
  for (const auto& yi : y.offsets()) {
    const Point u = yi + x;
    if (!v.in_support(u)) continue;
    s += -inv_s2 * dot(yi, v(u)) + v.divergence(u);
  }
  return s;
}

}  // namespace gcl
