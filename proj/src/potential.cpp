#include "gcl/potential.hpp"

#include <cmath>

namespace gcl {

ExtendedReal::ExtendedReal(double v) : v_(v) {
  if (std::isnan(v)) throw InvariantError("ExtendedReal: NaN");
  if (v == -std::numeric_limits<double>::infinity()) throw InvariantError("ExtendedReal: -infinity");
}

double ExtendedReal::boltzmann() const { return is_infinite() ? 0.0 : std::exp(-v_); }

ExtendedReal& ExtendedReal::operator+=(const ExtendedReal& o) {
  v_ = (is_infinite() || o.is_infinite()) ? std::numeric_limits<double>::infinity() : v_ + o.v_;
  return *this;
}

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::zero: return "zero";
    case PotentialKind::hard_core: return "hard_core";
    case PotentialKind::soft_repulsive: return "soft_repulsive";
    case PotentialKind::lennard_jones_type: return "lennard_jones_type";
    case PotentialKind::lj_6_12: return "lj_6_12";
  }
  return "unknown";
}

PairPotential PairPotential::zero() { return {}; }

PairPotential PairPotential::hard_core(double r0) {
  if (!(r0 > 0) || !std::isfinite(r0)) throw InvariantError("hard_core: r0 must be positive");
  PairPotential p;
  p.kind_ = PotentialKind::hard_core;
  p.r0_ = r0;
  return p;
}

PairPotential PairPotential::soft_repulsive(double amplitude, double range) {
  if (!(amplitude >= 0) || !std::isfinite(amplitude)) throw InvariantError("soft_repulsive: A must be >= 0");
  if (!(range > 0) || !std::isfinite(range)) throw InvariantError("soft_repulsive: r must be positive");
  PairPotential p;
  p.kind_ = PotentialKind::soft_repulsive;
  p.amp_ = amplitude;
  p.r0_ = range;
  return p;
}

PairPotential PairPotential::lennard_jones_type(double c, double r1, double r2, double alpha, int dim) {
  if (!(c > 0)) throw InvariantError("lennard_jones_type: c must be positive");
  if (!(r1 > 0 && r1 < r2) || !std::isfinite(r2)) throw InvariantError("lennard_jones_type: requires 0 < r1 < r2");
  if (!(alpha > dim)) throw InvariantError("lennard_jones_type: requires alpha > d");
  if (r2 - r1 > 3.0 * r1 / alpha)
    throw InvariantError("lennard_jones_type: r2 - r1 must not exceed 3 r1 / alpha (closure would turn negative)");
  PairPotential p;
  p.kind_ = PotentialKind::lennard_jones_type;
  p.amp_ = c;
  p.r1_ = r1;
  p.r2_ = r2;
  p.alpha_ = alpha;
  return p;
}

PairPotential PairPotential::lj_6_12(double c, double cutoff) {
  if (!(c > 0)) throw InvariantError("lj_6_12: c must be positive");
  if (!(cutoff > 0)) throw InvariantError("lj_6_12: cutoff must be positive");
  PairPotential p;
  p.kind_ = PotentialKind::lj_6_12;
  p.amp_ = c;
  p.cutoff_ = cutoff;
  return p;
}

double PairPotential::range() const {
  switch (kind_) {
    case PotentialKind::zero: return 0.0;
    case PotentialKind::hard_core: return r0_;
    case PotentialKind::soft_repulsive: return r0_;
    case PotentialKind::lennard_jones_type: return r2_;
    case PotentialKind::lj_6_12: return cutoff_;
  }
  return 0.0;
}

bool PairPotential::is_smooth() const {
  return kind_ == PotentialKind::zero || kind_ == PotentialKind::soft_repulsive ||
         kind_ == PotentialKind::lennard_jones_type;
}

ExtendedReal PairPotential::at_distance(double r) const {
  switch (kind_) {
    case PotentialKind::zero: return 0.0;
    case PotentialKind::hard_core: return r <= r0_ ? ExtendedReal::infinity() : ExtendedReal(0.0);
    case PotentialKind::soft_repulsive: {
      if (r >= r0_) return 0.0;
      const double u = 1.0 - r / r0_;
      return amp_ * u * u;
    }
    case PotentialKind::lennard_jones_type: {
      if (r <= r1_) return amp_ * std::pow(r, -alpha_);
      if (r > r2_) return 0.0;
      const double len = r2_ - r1_;
      const double t = (r - r1_) / len;
      const double v0 = amp_ * std::pow(r1_, -alpha_);
      const double m0 = -alpha_ * v0 / r1_;
      const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
      const double h10 = t * (1 - t) * (1 - t);
      return v0 * h00 + m0 * len * h10;
    }
    case PotentialKind::lj_6_12: {
      if (r > cutoff_) return 0.0;
      const double i6 = std::pow(r, -6.0);
      return amp_ * (i6 * i6 - i6);
    }
  }
  return 0.0;
}

double PairPotential::derivative(double r) const {
  switch (kind_) {
    case PotentialKind::zero:
    case PotentialKind::hard_core: return 0.0;
    case PotentialKind::soft_repulsive: return r >= r0_ ? 0.0 : -2.0 * amp_ * (1.0 - r / r0_) / r0_;
    case PotentialKind::lennard_jones_type: {
      if (r <= r1_) return -alpha_ * amp_ * std::pow(r, -alpha_ - 1.0);
      if (r > r2_) return 0.0;
      const double len = r2_ - r1_;
      const double t = (r - r1_) / len;
      const double v0 = amp_ * std::pow(r1_, -alpha_);
      const double m0 = -alpha_ * v0 / r1_;
      return (v0 * (6 * t * t - 6 * t) + m0 * len * (3 * t * t - 4 * t + 1)) / len;
    }
    case PotentialKind::lj_6_12: {
      if (r > cutoff_) return 0.0;
      return amp_ * (-12.0 * std::pow(r, -13.0) + 6.0 * std::pow(r, -7.0));
    }
  }
  return 0.0;
}

ExtendedReal phi_pair(const PairPotential& pot, const Point& x1, const Point& x2) {
  const double r2 = distance2(x1, x2);
  if (r2 == 0.0) throw CoincidentPointsError("phi_pair: coincident points");
  if (pot.kind() == PotentialKind::zero) return 0.0;
  return pot.at_distance(std::sqrt(r2));
}

ExtendedReal energy(const PairPotential& pot, std::span<const Point> xi) {
  ExtendedReal e = 0.0;
  for (std::size_t i = 0; i < xi.size(); ++i)
    for (std::size_t j = i + 1; j < xi.size(); ++j) {
      e += phi_pair(pot, xi[i], xi[j]);
      if (e.is_infinite()) return e;
    }
  return e;
}

ExtendedReal energy(const PairPotential& pot, const GroundConfiguration& xi) { return energy(pot, xi.points()); }

ExtendedReal local_energy(const PairPotential& pot, const Point& x, std::span<const Point> gamma) {
  ExtendedReal e = 0.0;
  for (const auto& y : gamma) {
    if (y == x) throw CoincidentPointsError("local_energy: x belongs to gamma");
    e += phi_pair(pot, x, y);
  }
  return e;
}

ExtendedReal local_energy(const PairPotential& pot, const Point& x, const GroundConfiguration& gamma) {
  return local_energy(pot, x, gamma.points());
}

ExtendedReal interaction_energy(const PairPotential& pot, const GroundConfiguration& xi,
                                const GroundConfiguration& gamma) {
  ExtendedReal e = 0.0;
  for (const auto& x : xi.points()) {
    for (const auto& y : gamma.points())
      if (x == y) throw CoincidentPointsError("interaction_energy: configurations overlap");
    e += local_energy(pot, x, gamma.points());
  }
  return e;
}

Point local_energy_gradient(const PairPotential& pot, const Point& x, std::span<const Point> gamma,
                            std::size_t skip) {
  if (!pot.is_smooth()) throw InvariantError("local_energy_gradient: potential is not C^1");
  Point g(x.dim());
  if (pot.kind() == PotentialKind::zero) return g;
  const double range2 = pot.range() * pot.range();
  for (std::size_t j = 0; j < gamma.size(); ++j) {
    if (j == skip) continue;
    const Point d = x - gamma[j];
    const double r2 = d.norm2();
    if (r2 >= range2) continue;
    if (r2 == 0.0) throw CoincidentPointsError("local_energy_gradient: coincident points");
    const double r = std::sqrt(r2);
    g += d * (pot.derivative(r) / r);
  }
  return g;
}

NeighborGrid::NeighborGrid(const Window& window, double cell_size) : window_(window), dim_(window.dim()) {
  if (!(cell_size > 0)) throw InvariantError("NeighborGrid: cell size must be positive");
  for (int i = 0; i < dim_; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double side = window.side(i);
    n_[k] = std::isfinite(cell_size) ? std::max<std::size_t>(1, static_cast<std::size_t>(side / cell_size)) : 1;
    inv_cell_[k] = static_cast<double>(n_[k]) / side;
  }
  cells_.assign(n_[0] * n_[1] * n_[2], {});
}

std::array<std::size_t, kMaxDim> NeighborGrid::coords_of(const Point& p) const {
  std::array<std::size_t, kMaxDim> c{};
  for (int i = 0; i < dim_; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double t = (p[i] - window_.lower()[i]) * inv_cell_[k];
    c[k] = t <= 0 ? 0 : std::min(n_[k] - 1, static_cast<std::size_t>(t));
  }
  return c;
}

std::size_t NeighborGrid::cell_of(const Point& p) const {
  const auto c = coords_of(p);
  return (c[0] * n_[1] + c[1]) * n_[2] + c[2];
}

void NeighborGrid::insert(std::size_t index, const Point& p) { cells_[cell_of(p)].push_back(index); }

void NeighborGrid::remove(std::size_t index, const Point& p) {
  auto& cell = cells_[cell_of(p)];
  auto it = std::find(cell.begin(), cell.end(), index);
  if (it == cell.end()) throw std::logic_error("NeighborGrid::remove: index not found");
  *it = cell.back();
  cell.pop_back();
}

void NeighborGrid::relabel(std::size_t from, std::size_t to, const Point& p) {
  auto& cell = cells_[cell_of(p)];
  auto it = std::find(cell.begin(), cell.end(), from);
  if (it == cell.end()) throw std::logic_error("NeighborGrid::relabel: index not found");
  *it = to;
}

void NeighborGrid::clear() {
  for (auto& c : cells_) c.clear();
}

ExtendedReal local_energy_indexed(const PairPotential& pot, const Point& x, std::span<const Point> points,
                                  std::size_t skip, const NeighborGrid* grid) {
  if (pot.kind() == PotentialKind::zero) return 0.0;
  ExtendedReal e = 0.0;
  auto term = [&](std::size_t j) {
    if (j == skip || e.is_infinite()) return;
    e += phi_pair(pot, x, points[j]);
  };
  if (grid != nullptr) {
    grid->for_each_near(x, term);
  } else {
    for (std::size_t j = 0; j < points.size(); ++j) term(j);
  }
  return e;
}

}  // namespace gcl
