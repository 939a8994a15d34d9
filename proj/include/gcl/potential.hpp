#pragma once

// Pair interaction potentials and the energies they induce on finite
// configurations.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gcl/core.hpp"

namespace gcl {

/// A real number or +infinity. Never NaN, never -infinity.
class ExtendedReal {
 public:
  ExtendedReal() = default;
  ExtendedReal(double v);  // NOLINT(google-explicit-constructor)
  static ExtendedReal infinity() { return {std::numeric_limits<double>::infinity()}; }

  bool is_infinite() const { return v_ == std::numeric_limits<double>::infinity(); }
  bool is_finite() const { return !is_infinite(); }
  /// Underlying value; +inf for the infinite element.
  double value() const { return v_; }
  /// exp(-value), exactly 0 for +infinity.
  double boltzmann() const;

  ExtendedReal& operator+=(const ExtendedReal& o);
  friend ExtendedReal operator+(ExtendedReal a, const ExtendedReal& b) { return a += b; }
  friend bool operator==(const ExtendedReal&, const ExtendedReal&) = default;
  friend auto operator<=>(const ExtendedReal& a, const ExtendedReal& b) { return a.v_ <=> b.v_; }

 private:
  double v_ = 0.0;
};

enum class PotentialKind { zero, hard_core, soft_repulsive, lennard_jones_type, lj_6_12 };

std::string to_string(PotentialKind kind);

/// Translation-invariant pair potential phi0(|x - y|).
class PairPotential {
 public:
  static PairPotential zero();
  /// +inf for |x| <= r0, else 0.
  static PairPotential hard_core(double r0);
  /// A (1 - |x|/r)^2 for |x| < r, else 0.
  static PairPotential soft_repulsive(double amplitude, double range);
  /// c |x|^-alpha up to r1, cubic Hermite closure to 0 on (r1, r2], 0 beyond.
  /// Requires alpha > dim and r2 - r1 <= 3 r1 / alpha so the closure stays
  /// nonnegative and monotone.
  static PairPotential lennard_jones_type(double c, double r1, double r2, double alpha, int dim);
  /// c (|x|^-12 - |x|^-6), truncated to 0 beyond `cutoff` when it is finite.
  static PairPotential lj_6_12(double c, double cutoff = std::numeric_limits<double>::infinity());

  PotentialKind kind() const { return kind_; }
  /// Distance beyond which the potential vanishes (0 for zero, +inf for
  /// untruncated 6-12).
  double range() const;
  bool truncated() const { return kind_ == PotentialKind::lj_6_12 && std::isfinite(cutoff_); }
  /// C^1 and finite everywhere, the requirement for gradient dynamics.
  bool is_smooth() const;

  ExtendedReal at_distance(double r) const;
  /// d phi0 / dr; only meaningful for smooth kinds at r > 0.
  double derivative(double r) const;

  double r0() const { return r0_; }
  double amplitude() const { return amp_; }
  double r1() const { return r1_; }
  double r2() const { return r2_; }
  double alpha() const { return alpha_; }
  double cutoff() const { return cutoff_; }

 private:
  PotentialKind kind_ = PotentialKind::zero;
  double r0_ = 0, amp_ = 0, r1_ = 0, r2_ = 0, alpha_ = 0;
  double cutoff_ = std::numeric_limits<double>::infinity();
};

/// Thrown when the pair potential is evaluated at coincident points, or a
/// point is asked to interact with a configuration containing it.
class CoincidentPointsError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

ExtendedReal phi_pair(const PairPotential& pot, const Point& x1, const Point& x2);

/// E(xi): sum of phi_pair over unordered pairs; E(empty) = 0.
ExtendedReal energy(const PairPotential& pot, const GroundConfiguration& xi);
ExtendedReal energy(const PairPotential& pot, std::span<const Point> xi);

/// E({x}, gamma).
ExtendedReal local_energy(const PairPotential& pot, const Point& x, const GroundConfiguration& gamma);
ExtendedReal local_energy(const PairPotential& pot, const Point& x, std::span<const Point> gamma);

/// E(xi, gamma) for disjoint xi, gamma.
ExtendedReal interaction_energy(const PairPotential& pot, const GroundConfiguration& xi,
                                const GroundConfiguration& gamma);

/// Gradient with respect to x of E({x}, gamma), skipping index `skip` of
/// gamma. Smooth potentials only.
Point local_energy_gradient(const PairPotential& pot, const Point& x, std::span<const Point> gamma,
                            std::size_t skip = static_cast<std::size_t>(-1));

/// Uniform cell grid over a window, cell side >= interaction range. Holds
/// point indices; the owner keeps it in sync with its point storage.
class NeighborGrid {
 public:
  NeighborGrid(const Window& window, double cell_size);

  void insert(std::size_t index, const Point& p);
  void remove(std::size_t index, const Point& p);
  /// Renames `from` to `to` for a point stored at `p` (swap-remove support).
  void relabel(std::size_t from, std::size_t to, const Point& p);
  void clear();

  /// Calls fn(index) for every stored index in the cells adjacent to p.
  template <class Fn>
  void for_each_near(const Point& p, Fn&& fn) const;

  std::size_t cells_per_axis(int i) const { return n_[static_cast<std::size_t>(i)]; }

 private:
  std::size_t cell_of(const Point& p) const;
  std::array<std::size_t, kMaxDim> coords_of(const Point& p) const;

  Window window_;
  int dim_;
  std::array<std::size_t, kMaxDim> n_{1, 1, 1};
  std::array<double, kMaxDim> inv_cell_{};
  std::vector<std::vector<std::size_t>> cells_;
};

template <class Fn>
void NeighborGrid::for_each_near(const Point& p, Fn&& fn) const {
  const auto c = coords_of(p);
  std::array<std::size_t, kMaxDim> lo{}, hi{};
  for (int i = 0; i < kMaxDim; ++i) {
    const auto k = static_cast<std::size_t>(i);
    lo[k] = c[k] == 0 ? 0 : c[k] - 1;
    hi[k] = std::min(n_[k] - 1, c[k] + 1);
  }
  for (std::size_t a = lo[0]; a <= hi[0]; ++a)
    for (std::size_t b = lo[1]; b <= hi[1]; ++b)
      for (std::size_t e = lo[2]; e <= hi[2]; ++e)
        for (std::size_t idx : cells_[(a * n_[1] + b) * n_[2] + e]) fn(idx);
}

/// Local energy of x against points[], skipping index `skip`, optionally
/// through a neighbor grid indexing points[].
ExtendedReal local_energy_indexed(const PairPotential& pot, const Point& x, std::span<const Point> points,
                                  std::size_t skip, const NeighborGrid* grid);

}  // namespace gcl
