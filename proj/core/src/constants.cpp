#include "atollpr/constants.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "atollpr/eigen_solvers.hpp"
#include "atollpr/error.hpp"
#include "atollpr/parallel.hpp"

namespace atollpr {

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::closed_form: return "closed-form";
    case Provenance::eigensolve: return "eigensolve";
    case Provenance::bound: return "bound";
  }
  return "bound";
}

double rho(double tau) {
  const auto& cal = calibration();
  if (cal.tau.size() < 2) fail(ErrorKind::numerical, "trace calibration table is missing");
  if (!(tau >= 0.0)) fail(ErrorKind::domain, "annulus ratio must be non-negative");
  if (tau > kMaxTau + 1e-12) {
    std::ostringstream os;
    os << "thin-annulus regime out of calibrated range (r/s = " << tau << " > " << kMaxTau << ")";
    fail(ErrorKind::domain, os.str());
  }
  const auto it = std::upper_bound(cal.tau.begin(), cal.tau.end(), tau);
  const std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - cal.tau.begin()), cal.tau.size() - 1);
  const std::size_t lo = hi == 0 ? 0 : hi - 1;
  if (cal.tau[lo] == tau) return cal.rho[lo];
  return std::max(cal.rho[lo], cal.rho[hi]);
}

// ---- Poincare -------------------------------------------------------------

namespace {

DomainMask reference_mask(const ParamDomain& d, int resolution) {
  double R = 0.0;
  cd c;
  if (const auto* disc = std::get_if<Disc>(&d)) R = disc->r, c = disc->center;
  else {
    const auto& a = std::get<Annulus>(d);
    R = a.s, c = a.center;
  }
  const double h = R / resolution;
  // Lattice symmetric about the centre.
  Lattice lat;
  lat.dx = lat.dy = h;
  lat.nx = lat.ny = 2 * (resolution + 2) + 1;
  lat.origin_x = c.real() - (resolution + 2) * h;
  lat.origin_y = c.imag() - (resolution + 2) * h;
  return rasterize(d, lat);
}

}  // namespace

double poincare_eigensolve(const DomainMask& mask, const PoincareOptions& options) {
  const EigenResult r = neumann_lambda2(mask, options.tol, options.max_iter);
  if (!(r.value > 0.0)) fail(ErrorKind::numerical, "non-positive Neumann eigenvalue");
  return 1.0 / std::sqrt(r.value);
}

double poincare_constant(const ParamDomain& domain, PoincareMethod method, const PoincareOptions& options) {
  validate(domain);
  if (method == PoincareMethod::closed_form) {
    if (const auto* disc = std::get_if<Disc>(&domain)) return 2.0 * disc->r / M_PI;
    if (const auto* a = std::get_if<Annulus>(&domain)) {
      const double c = calibration().annulus_c;
      if (!(c > 0.0)) fail(ErrorKind::numerical, "annulus Poincare calibration is missing");
      return c * a->s;
    }
    fail(ErrorKind::precondition, "closed-form Poincare constant needs a disc or annulus");
  }
  if (const auto* r = std::get_if<Raster>(&domain)) return poincare_eigensolve(r->mask, options);
  return poincare_eigensolve(reference_mask(domain, options.resolution), options);
}

double analytic_poincare_bound(double C_poinc, double area, double dist_z0, double p) {
  if (!(C_poinc > 0.0) || !(area > 0.0) || !(dist_z0 > 0.0) || !(p >= 1.0))
    fail(ErrorKind::precondition, "analytic_poincare_bound needs positive inputs and p >= 1");
  return C_poinc * (1.0 + std::pow(area / (M_PI * dist_z0 * dist_z0), 1.0 / p));
}

// ---- sampling ---------------------------------------------------------------

Z0Selection select_z0(const TFGrid& G, const DomainMask& mask, double t, double p) {
  require_same_lattice(G.lattice(), mask.lattice(), "select_z0");
  if (mask.is_empty()) fail(ErrorKind::domain, "select_z0 on an empty mask");
  if (!(t > 0.0 && t < 1.0)) fail(ErrorKind::precondition, "select_z0 needs 0 < t < 1");
  if (!(p >= 1.0) || std::isinf(p)) fail(ErrorKind::precondition, "select_z0 needs finite p >= 1");
  const TFGrid dt = distance_transform(mask);
  const double gnorm = lp_norm(G, mask, p);
  const double area_p = std::pow(mask.area(), 1.0 / p);
  const double Ct = std::pow(1.0 - t, -1.0 / p);
  const auto cells = mask.indices();

  Z0Selection out;
  auto better = [&](std::size_t a, std::size_t b) {  // is a preferred over b
    const double da = dt[a].real(), db = dt[b].real();
    if (da != db) return da > db;
    const double ga = std::abs(G[a]), gb = std::abs(G[b]);
    if (ga != gb) return ga < gb;
    return a < b;
  };
  std::size_t best = cells.front();
  bool found = false;
  if (gnorm == 0.0) {
    for (std::size_t k : cells)
      if (better(k, best)) best = k;
    found = true;
    out.candidates = cells.size();
  } else {
    for (std::size_t k : cells) {
      if (std::abs(G[k]) * area_p > Ct * gnorm) continue;
      ++out.candidates;
      if (!found || better(k, best)) best = k;
      found = true;
    }
  }
  if (!found) {
    out.fallback = true;
    for (std::size_t k : cells)
      if (std::abs(G[k]) < std::abs(G[best])) best = k;
  }
  out.cell = best;
  out.z0 = mask.lattice().z(best);
  out.dist = dt[best].real();
  out.C_samp = gnorm == 0.0 ? 0.0 : std::abs(G[best]) * area_p / gnorm;
  return out;
}

// ---- trace, boundary, normalizer -------------------------------------------

double trace_constant(const ParamDomain& domain) {
  validate(domain);
  auto scale = [](double s) { return std::sqrt(s) + 1.0 / std::sqrt(s); };
  if (const auto* disc = std::get_if<Disc>(&domain)) return rho(0.0) * scale(disc->r);
  if (const auto* a = std::get_if<Annulus>(&domain)) return rho(a->r / a->s) * scale(a->s);
  const auto& mask = std::get<Raster>(domain).mask;
  return std::sqrt(trace_rayleigh_max(mask).value);
}

Provenance trace_provenance(const ParamDomain& domain) {
  return std::holds_alternative<Raster>(domain) ? Provenance::eigensolve : Provenance::bound;
}

namespace {

cd mask_centroid(const DomainMask& m) {
  cd s{};
  const auto idx = m.indices();
  for (std::size_t k : idx) s += m.lattice().z(k);
  return s / static_cast<double>(idx.size());
}

// Radius of the disc about the centroid that contains every cell square.
double enclosing_radius(const DomainMask& m) {
  const cd c = mask_centroid(m);
  double r = 0.0;
  for (std::size_t k : m.indices()) r = std::max(r, std::abs(m.lattice().z(k) - c));
  return r + 0.5 * std::hypot(m.lattice().dx, m.lattice().dy);
}

}  // namespace

double boundary_constant(const ParamDomain& domain, double p) {
  validate(domain);
  if (!(p >= 1.0)) fail(ErrorKind::precondition, "boundary_constant needs p >= 1");
  double r = 0.0;
  if (const auto* disc = std::get_if<Disc>(&domain)) r = disc->r;
  else if (const auto* a = std::get_if<Annulus>(&domain)) r = a->s;
  else r = enclosing_radius(std::get<Raster>(domain).mask);
  return std::pow(r, 1.0 / p);
}

double var_eta(const Normalizer& eta, const ParamDomain& lagoon) {
  validate(lagoon);
  if (std::holds_alternative<NoNormalizer>(eta)) return 1.0;
  if (const auto* ras = std::get_if<Raster>(&lagoon)) {
    const DomainMask& m = ras->mask;
    Normalizer e = eta;
    if (auto* g = std::get_if<GaborNormalizer>(&e); g && !g->z0) g->z0 = mask_centroid(m);
    double bmax = 0.0, imin = std::numeric_limits<double>::infinity();
    const Lattice& lat = m.lattice();
    for (int j = 0; j < lat.ny; ++j)
      for (int i = 0; i < lat.nx; ++i) {
        if (!m(i, j)) continue;
        if (std::holds_alternative<CauchyNormalizer>(e) && !(lat.y(j) > 0.0))
          fail(ErrorKind::domain, "Cauchy lagoon touches y = 0");
        const double v = eta_modulus(e, lat.z(i, j));
        imin = std::min(imin, v);
        if (m.is_boundary(i, j)) bmax = std::max(bmax, v);
      }
    return bmax / imin;
  }
  cd c;
  double r = 0.0;
  if (const auto* disc = std::get_if<Disc>(&lagoon)) c = disc->center, r = disc->r;
  else {
    const auto& a = std::get<Annulus>(lagoon);
    c = a.center, r = a.s;
  }
  if (const auto* g = std::get_if<GaborNormalizer>(&eta)) {
    const double d = std::abs(c - g->z0.value_or(c));
    const double far = d + r, near = std::max(0.0, d - r);
    return std::exp(0.5 * M_PI * (far * far - near * near));
  }
  const auto& cy = std::get<CauchyNormalizer>(eta);
  const double y = c.imag();
  if (!(y > r)) fail(ErrorKind::domain, "Cauchy lagoon touches or crosses y = 0");
  return std::pow((y + r) / (y - r), cy.order + 0.5);
}

double hyperbolic_area(const Disc& disc) {
  const double y = disc.center.imag(), r = disc.r;
  if (!(r > 0.0)) fail(ErrorKind::domain, "disc radius must be positive");
  if (!(y > r)) fail(ErrorKind::domain, "disc must lie strictly inside the upper half-plane");
  const double q = r / y;
  return 2.0 * M_PI * (1.0 / std::sqrt(1.0 - q * q) - 1.0);
}

double hyperbolic_area_quadrature(const Disc& disc, std::size_t samples) {
  hyperbolic_area(disc);  // domain checks
  const double y = disc.center.imag(), r = disc.r;
  const auto n = static_cast<std::size_t>(std::max(16.0, std::sqrt(static_cast<double>(samples))));
  const double hr = r / static_cast<double>(n), hp = 2.0 * M_PI / static_cast<double>(n);
  std::vector<double> rows(n);
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t a = b; a < e; ++a) {
      const double rho_ = (static_cast<double>(a) + 0.5) * hr;
      double s = 0.0;
      for (std::size_t q = 0; q < n; ++q) {
        const double phi = (static_cast<double>(q) + 0.5) * hp;
        const double d = y + rho_ * std::sin(phi);
        s += rho_ / (d * d);
      }
      rows[a] = s * hr * hp;
    }
  });
  return pairwise_sum(rows);
}

// ---- certificate -------------------------------------------------------------

double certificate_total(const StabilityCertificate& c) {
  const double base = c.C_poinc_analytic + c.C_samp;
  double lag = 0.0;
  for (std::size_t i = 0; i < c.C_bound.size(); ++i) lag += c.C_bound[i] * c.var_eta[i] * c.C_trace * base;
  return c.c_uniform * (base + lag);
}

StabilityCertificate assemble_certificate(const AtollComponent& comp, const Normalizer& eta, const TFGrid& G,
                                          double p, double t, double c_uniform, const CertificateOptions& options) {
  if (p != 2.0) fail(ErrorKind::precondition, "certificates are implemented for p = 2 only");
  if (!(c_uniform > 0.0)) fail(ErrorKind::precondition, "uniform constant must be positive");
  require_same_lattice(G.lattice(), comp.D.lattice(), "assemble_certificate");
  const Lattice& lat = comp.D.lattice();

  StabilityCertificate cert;
  cert.p = p;
  cert.t = t;
  cert.c_uniform = c_uniform;
  cert.normalizer = normalizer_name(eta);
  cert.delta = comp.delta;
  cert.Delta = comp.Delta;
  cert.calibration_version = calibration().version;

  const ShapeFit& fit = comp.shape;
  cert.shape = shape_name(fit.domain);

  const Z0Selection sel = select_z0(G, comp.D_plus, t, p);
  cert.z0 = sel.z0;
  // Cell centres understate the distance to the continuous boundary by
  // about half a cell.
  cert.dist_z0 = sel.dist + 0.5 * std::min(lat.dx, lat.dy);
  cert.C_samp = sel.C_samp;
  cert.provenance["C_samp"] = Provenance::closed_form;

  const bool raster = std::holds_alternative<Raster>(fit.domain);
  const PoincareMethod method = raster ? PoincareMethod::eigensolve : options.poincare;
  cert.C_poinc_classical = poincare_constant(fit.domain, method, options.eigen);
  cert.provenance["C_poinc_classical"] =
      method == PoincareMethod::eigensolve ? Provenance::eigensolve : Provenance::closed_form;
  cert.C_poinc_analytic = analytic_poincare_bound(cert.C_poinc_classical, comp.D_plus.area(), cert.dist_z0, p);
  cert.provenance["C_poinc_analytic"] = Provenance::bound;

  if (!comp.lagoons.empty()) {
    cert.C_trace = trace_constant(fit.domain);
    cert.provenance["C_trace"] = trace_provenance(fit.domain);
    const double base = cert.C_poinc_analytic + cert.C_samp;
    for (const DomainMask& lag : comp.lagoons) {
      ParamDomain ld = Raster{lag};
      if (const auto* a = std::get_if<Annulus>(&fit.domain); a && comp.lagoons.size() == 1)
        ld = Disc{a->center, a->r};
      else
        ld = fit_disc(lag).domain;
      Normalizer e = eta;
      if (auto* g = std::get_if<GaborNormalizer>(&e); g && !g->z0) {
        if (const auto* d = std::get_if<Disc>(&ld)) g->z0 = d->center;
      }
      const double cb = boundary_constant(ld, p);
      const double v = var_eta(e, ld);
      cert.C_bound.push_back(cb);
      cert.var_eta.push_back(v);
      if (const auto* d = std::get_if<Disc>(&ld)) {
        cert.lagoon_centres.push_back(d->center);
        cert.lagoon_radii.push_back(d->r);
      } else {
        cert.lagoon_centres.push_back(cd{});
        cert.lagoon_radii.push_back(std::sqrt(lag.area() / M_PI));
      }
      cert.lagoon_terms.push_back(c_uniform * cb * v * cert.C_trace * base);
    }
    cert.provenance["C_bound"] = Provenance::bound;
    cert.provenance["var_eta"] = Provenance::closed_form;
  }
  cert.C_total = certificate_total(cert);
  cert.bound_value = cert.C_total * cert.Delta * cert.Delta / (cert.delta * cert.delta);
  return cert;
}

}  // namespace atollpr
