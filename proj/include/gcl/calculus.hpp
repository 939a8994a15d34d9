#pragma once

// Compactly supported diffeomorphisms and vector fields on R^d, their action
// on cluster offsets, Radon-Nikodym densities, logarithmic derivatives of the
// cluster law, and cylinder functions with their configuration gradients.

#include <utility>
#include <vector>

#include "gcl/cluster.hpp"
#include "gcl/core.hpp"

namespace gcl {

/// Standard bump profile e^{1 - 1/(1 - t)} on [0, 1), 0 beyond; beta(0) = 1.
double bump_profile(double t);
/// Derivative of bump_profile with respect to t.
double bump_profile_derivative(double t);
/// sup_t |bump_profile'(t)| = 4/e, attained at t = 1/2.
inline constexpr double kBumpDerivativeSup = 1.4715177646857693;

/// amplitude * bump_profile(|x - center|^2 / radius^2).
struct Bump {
  Point center;
  double radius = 1.0;
  double amplitude = 1.0;

  double value(const Point& x) const;
  Point gradient(const Point& x) const;
  bool in_support(const Point& x) const { return distance2(x, center) < radius * radius; }
};

/// x -> x + a * bump_profile(|x - c|^2 / r^2).
class Diffeomorphism {
 public:
  /// Ratio of |a| sup|grad bump| to 1 that construction accepts.
  static constexpr double kContractionMargin = 0.9;

  Diffeomorphism(Point amplitude, Point center, double radius);
  static Diffeomorphism identity(int dim);
  /// Largest admissible |a| for a bump of radius r.
  static double max_amplitude(double radius) { return kContractionMargin * radius / (2.0 * kBumpDerivativeSup); }

  const Point& amplitude() const { return a_; }
  const Point& center() const { return c_; }
  double radius() const { return r_; }
  int dim() const { return c_.dim(); }

  Point apply(const Point& x) const;
  /// Full Jacobian matrix, row-major d x d.
  std::vector<double> jacobian(const Point& x) const;
  double jacobian_det(const Point& x) const;
  /// Newton inverse, |apply(result) - x| < 1e-12. Throws std::runtime_error
  /// if the iteration fails to converge.
  Point invert(const Point& x) const;
  bool in_support(const Point& x) const { return distance2(x, c_) < r_ * r_; }

 private:
  Bump profile() const { return {c_, r_, 1.0}; }
  Point a_, c_;
  double r_;
};

Point apply_diffeo(const Diffeomorphism& phi, const Point& x);
double jacobian_det(const Diffeomorphism& phi, const Point& x);
Point invert_diffeo(const Diffeomorphism& phi, const Point& x);

/// v(x) = a * bump_profile(|x - c|^2 / r^2).
class VectorField {
 public:
  VectorField(Point amplitude, Point center, double radius);

  Point operator()(const Point& x) const;
  double divergence(const Point& x) const;
  bool in_support(const Point& x) const { return distance2(x, c_) < r_ * r_; }

  const Point& amplitude() const { return a_; }
  const Point& center() const { return c_; }
  double radius() const { return r_; }

 private:
  Point a_, c_;
  double r_;
};

/// F(gamma) = f(<phi_1, gamma>, ..., <phi_k, gamma>).
class CylinderFunction {
 public:
  enum class Outer {
    constant,  ///< f = offset
    linear,    ///< f = offset + sum c_j t_j (unbounded; for tests)
    tanh,      ///< f = tanh(offset + sum c_j t_j)
    product,   ///< f = prod_j 1 / (1 + c_j t_j^2), c_j >= 0
  };

  CylinderFunction(Outer outer, std::vector<double> coeffs, double offset, std::vector<Bump> inner);

  Outer outer() const { return outer_; }
  const std::vector<Bump>& inner() const { return inner_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double offset() const { return offset_; }
  bool bounded() const { return outer_ != Outer::linear; }

  /// f and its partial derivatives at t.
  double outer_value(std::span<const double> t) const;
  std::vector<double> outer_gradient(std::span<const double> t) const;
  /// (<phi_j, gamma>)_j.
  std::vector<double> inner_sums(std::span<const Point> points) const;

 private:
  Outer outer_;
  std::vector<double> coeffs_;
  double offset_;
  std::vector<Bump> inner_;
};

double eval_cylinder(const CylinderFunction& f, const GroundConfiguration& gamma);
double eval_cylinder(const CylinderFunction& f, std::span<const Point> points);

/// Nonzero per-point gradients (index into gamma, grad_x F(gamma)).
std::vector<std::pair<std::size_t, Point>> grad_cylinder(const CylinderFunction& f, const GroundConfiguration& gamma);
std::vector<std::pair<std::size_t, Point>> grad_cylinder(const CylinderFunction& f, std::span<const Point> points);

/// Offsets y_i -> phi(y_i + x) - x; centers fixed.
MarkedPoint hat_phi(const Diffeomorphism& phi, const MarkedPoint& z);
MarkedConfiguration hat_phi(const Diffeomorphism& phi, const MarkedConfiguration& marked);

/// log rho_phi(z): density of the image of eta under the shifted diagonal
/// map, relative to eta, at y. 0 (rho = 1) when h(y) = 0.
double log_rho_phi(const Diffeomorphism& phi, const MarkedPoint& z, const ClusterLaw& law);
double rho_phi(const Diffeomorphism& phi, const MarkedPoint& z, const ClusterLaw& law);

/// prod over marked points of rho_phi, accumulated in log space.
double log_rnd_density(const Diffeomorphism& phi, const MarkedConfiguration& marked, const ClusterLaw& law);
double rnd_density_R(const Diffeomorphism& phi, const MarkedConfiguration& marked, const ClusterLaw& law);

/// grad h / h at y: component i is -y_i / s^2. Throws std::domain_error when
/// the cluster size has probability 0.
std::vector<Point> beta_eta(const ClusterLaw& law, const ClusterVector& y);

/// <beta_eta(y), v_x(y)> + div v_x(y) with v_x(y) = (v(y_i + x))_i.
double beta_v(const ClusterLaw& law, const VectorField& v, const Point& x, const ClusterVector& y);

}  // namespace gcl
