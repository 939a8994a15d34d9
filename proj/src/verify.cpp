#include "gcl/verify.hpp"

#include <cmath>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>

namespace gcl {

namespace {

double z_score(double diff, double se) {
  if (se > 0) return diff / se;
  return diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
}

std::optional<Window> intersect(const Window& a, const Window& b) {
  Point lo(a.dim()), hi(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    lo[i] = std::max(a.lower()[i], b.lower()[i]);
    hi[i] = std::min(a.upper()[i], b.upper()[i]);
    if (!(lo[i] < hi[i])) return std::nullopt;
  }
  return Window(lo, hi);
}

}  // namespace

IdentityReport paired_report(std::string identity, std::span<const double> lhs, std::span<const double> rhs,
                             double tol_sigma) {
  if (lhs.size() != rhs.size()) throw std::invalid_argument("paired_report: size mismatch");
  stats::Accumulator l, r, d;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    l.add(lhs[i]);
    r.add(rhs[i]);
    d.add(lhs[i] - rhs[i]);
  }
  IdentityReport rep;
  rep.identity = std::move(identity);
  rep.lhs = l.mean();
  rep.rhs = r.mean();
  rep.lhs_se = l.se();
  rep.rhs_se = r.se();
  rep.diff_se = d.se();
  rep.n = lhs.size();
  rep.tol_sigma = tol_sigma;
  rep.z = z_score(d.mean(), d.se());
  rep.pass = std::abs(rep.z) <= tol_sigma;
  return rep;
}

IdentityReport independent_report(std::string identity, stats::MeanSe lhs, stats::MeanSe rhs, std::size_t n,
                                  double tol_sigma) {
  IdentityReport rep;
  rep.identity = std::move(identity);
  rep.lhs = lhs.mean;
  rep.rhs = rhs.mean;
  rep.lhs_se = lhs.se;
  rep.rhs_se = rhs.se;
  rep.diff_se = std::hypot(lhs.se, rhs.se);
  rep.n = n;
  rep.tol_sigma = tol_sigma;
  rep.z = z_score(lhs.mean - rhs.mean, rep.diff_se);
  rep.pass = std::abs(rep.z) <= tol_sigma;
  return rep;
}

IdentityReport exact_report(std::string identity, std::span<const double> lhs, double exact, double tol_sigma) {
  const auto m = stats::mean_se(lhs);
  return independent_report(std::move(identity), m, {exact, 0.0}, lhs.size(), tol_sigma);
}

std::vector<Point> projected_points(const MarkedConfiguration& marked) {
  std::vector<Point> pts;
  pts.reserve(marked.total_offsets());
  for (const auto& m : marked.marked_points())
    for (const auto& y : m.cluster.offsets()) pts.push_back(m.center + y);
  return pts;
}

IdentityReport check_gnz(const std::vector<GroundConfiguration>& ensemble, const PairPotential& pot,
                         const ReferenceMeasure& theta, const GnzTestFunction& h, Rng& rng, std::size_t n_inner,
                         double tol_sigma) {
  if (n_inner < 1) throw std::invalid_argument("check_gnz: n_inner must be >= 1");
  const Window& lambda = theta.window();
  auto spatial = [&](const Point& x) {
    if (const auto* w = std::get_if<Window>(&h.spatial)) return w->contains(x) ? 1.0 : 0.0;
    return std::get<Bump>(h.spatial).value(x);
  };
  // Part of the window where phi can be nonzero.
  std::optional<Window> support;
  if (const auto* w = std::get_if<Window>(&h.spatial)) {
    support = intersect(*w, lambda);
  } else {
    const Bump& b = std::get<Bump>(h.spatial);
    Point lo = b.center, hi = b.center;
    for (int i = 0; i < lo.dim(); ++i) {
      lo[i] -= b.radius;
      hi[i] += b.radius;
    }
    support = intersect(Window(lo, hi), lambda);
  }
  const double weight = support ? theta.measure(*support) : 0.0;

  std::vector<double> lhs, rhs;
  lhs.reserve(ensemble.size());
  rhs.reserve(ensemble.size());
  for (const auto& g : ensemble) {
    const auto& pts = g.points();
    std::vector<double> t;
    double g_val = 1.0;
    if (h.functional) {
      t = h.functional->inner_sums(pts);
      g_val = h.functional->outer_value(t);
    }
    double l = 0.0;
    for (const auto& x : pts) l += spatial(x);
    lhs.push_back(l * g_val);

    double r = 0.0;
    if (support) {
      for (std::size_t k = 0; k < n_inner; ++k) {
        const Point u = uniform_in(*support, rng);
        const double phi_u = spatial(u);
        if (phi_u == 0.0) continue;
        double gu = 1.0;
        if (h.functional) {
          std::vector<double> tu = t;
          for (std::size_t j = 0; j < tu.size(); ++j) tu[j] += h.functional->inner()[j].value(u);
          gu = h.functional->outer_value(tu);
        }
        r += phi_u * gu * local_energy(pot, u, pts).boltzmann();
      }
      r *= weight / static_cast<double>(n_inner);
    }
    rhs.push_back(r);
  }
  return paired_report("gnz", lhs, rhs, tol_sigma);
}

IdentityReport check_laplace_projection(const std::vector<MarkedConfiguration>& marked, const ClusterLaw& law,
                                        const Bump& f, std::size_t n_inner, Rng& rng, double tol_sigma) {
  if (n_inner < 1) throw std::invalid_argument("check_laplace_projection: n_inner must be >= 1");
  if (!(f.amplitude >= 0)) throw std::invalid_argument("check_laplace_projection: f must be nonnegative");
  std::vector<double> lhs, rhs;
  lhs.reserve(marked.size());
  rhs.reserve(marked.size());
  for (const auto& m : marked) {
    double s = 0.0;
    for (const auto& z : m.marked_points())
      for (const auto& y : z.cluster.offsets()) s += f.value(z.center + y);
    lhs.push_back(std::exp(-s));

    double log_prod = 0.0;
    for (const auto& z : m.marked_points()) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n_inner; ++k) {
        const ClusterVector y = sample_cluster(law, rng);
        double sk = 0.0;
        for (const auto& yi : y.offsets()) sk += f.value(z.center + yi);
        acc += std::exp(-sk);
      }
      log_prod += std::log(acc / static_cast<double>(n_inner));
    }
    rhs.push_back(std::exp(log_prod));
  }
  return paired_report("laplace", lhs, rhs, tol_sigma);
}

IdentityReport check_laplace_projection(const GibbsRunParams& params, const ClusterLaw& law, const Bump& f,
                                        std::size_t n_outer, std::size_t n_inner, Rng& rng, double tol_sigma) {
  GibbsRunParams p = params;
  p.n_samples = n_outer;
  p.seed = rng();
  const auto ens = sample_gibbs(p);
  const auto marked = lift_ensemble(ens.samples, law, rng());
  return check_laplace_projection(marked, law, f, n_inner, rng, tol_sigma);
}

bool MarkEvent::contains(const ClusterVector& y) const {
  switch (kind) {
    case Kind::any: return true;
    case Kind::size_equals: return y.size() == size;
    case Kind::first_offset_within: return !y.empty() && y[0].norm() <= radius;
  }
  return false;
}

double MarkEvent::probability(const ClusterLaw& law) const {
  switch (kind) {
    case Kind::any: return 1.0;
    case Kind::size_equals: return law.size().probability(size);
    case Kind::first_offset_within: {
      const double nonempty = 1.0 - law.size().probability(0);
      if (radius <= 0) return 0.0;
      // |Y|^2 / s^2 is chi-squared with d degrees of freedom.
      boost::math::chi_squared chi(law.dim());
      const double q = radius * radius / (law.offset_std() * law.offset_std());
      return nonempty * boost::math::cdf(chi, q);
    }
  }
  return 0.0;
}

IdentityReport check_correlation_projection(const std::vector<MarkedConfiguration>& marked, const Window& b1,
                                            const Window& b2, const MarkEvent& a1, const MarkEvent& a2,
                                            const ClusterLaw& law, double tol_sigma) {
  if (b1.overlap_volume(b2) > 0) throw std::invalid_argument("check_correlation_projection: B1 and B2 overlap");
  const double eta1 = a1.probability(law), eta2 = a2.probability(law);
  std::vector<double> lhs, rhs;
  lhs.reserve(marked.size());
  rhs.reserve(marked.size());
  for (const auto& m : marked) {
    double n1 = 0, n2 = 0, c1 = 0, c2 = 0;
    for (const auto& z : m.marked_points()) {
      if (b1.contains(z.center)) {
        c1 += 1;
        n1 += a1.contains(z.cluster);
      }
      if (b2.contains(z.center)) {
        c2 += 1;
        n2 += a2.contains(z.cluster);
      }
    }
    lhs.push_back(n1 * n2);
    rhs.push_back(eta1 * eta2 * c1 * c2);
  }
  return paired_report("correlation", lhs, rhs, tol_sigma);
}

IdentityReport check_quasi_invariance(const std::vector<MarkedConfiguration>& marked, const Diffeomorphism& phi,
                                      const CylinderFunction& f, const ClusterLaw& law, double tol_sigma) {
  std::vector<double> lhs, rhs;
  lhs.reserve(marked.size());
  rhs.reserve(marked.size());
  for (const auto& m : marked) {
    lhs.push_back(eval_cylinder(f, projected_points(hat_phi(phi, m))));
    rhs.push_back(eval_cylinder(f, projected_points(m)) * rnd_density_R(phi, m, law));
  }
  return paired_report("quasi_invariance", lhs, rhs, tol_sigma);
}

IdentityReport check_rnd_normalization(const std::vector<MarkedConfiguration>& marked, const Diffeomorphism& phi,
                                       const ClusterLaw& law, double tol_sigma) {
  std::vector<double> r;
  r.reserve(marked.size());
  for (const auto& m : marked) r.push_back(rnd_density_R(phi, m, law));
  return exact_report("rnd_normalization", r, 1.0, tol_sigma);
}

IdentityReport check_ibp(const std::vector<MarkedConfiguration>& marked, const VectorField& v,
                         const CylinderFunction& f, const ClusterLaw& law, double tol_sigma) {
  std::vector<double> lhs, rhs;
  lhs.reserve(marked.size());
  rhs.reserve(marked.size());
  for (const auto& m : marked) {
    const auto pts = projected_points(m);
    double l = 0.0;
    for (const auto& [i, g] : grad_cylinder(f, pts)) l += dot(g, v(pts[i]));
    lhs.push_back(l);
    double b = 0.0;
    for (const auto& z : m.marked_points()) b += beta_v(law, v, z.center, z.cluster);
    rhs.push_back(-eval_cylinder(f, pts) * b);
  }
  return paired_report("ibp", lhs, rhs, tol_sigma);
}

}  // namespace gcl
