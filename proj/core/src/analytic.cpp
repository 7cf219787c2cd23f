#include "atollpr/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "atollpr/error.hpp"

namespace atollpr {

const char* normalizer_name(const Normalizer& eta) {
  if (std::holds_alternative<GaborNormalizer>(eta)) return "gabor";
  if (std::holds_alternative<CauchyNormalizer>(eta)) return "cauchy";
  return "none";
}

cd eta_value(const Normalizer& eta, cd z) {
  if (const auto* g = std::get_if<GaborNormalizer>(&eta)) {
    const cd z0 = g->z0.value_or(cd{});
    const double x = z.real(), y = z.imag(), x0 = z0.real(), y0 = z0.imag();
    return std::exp(cd(M_PI * 0.5 * std::norm(z - z0), -M_PI * (x + x0) * (y - y0)));
  }
  if (const auto* c = std::get_if<CauchyNormalizer>(&eta)) {
    if (z.imag() == 0.0) fail(ErrorKind::domain, "Cauchy normalizer is undefined at y = 0");
    return std::pow(1.0 / std::abs(z.imag()), c->order + 0.5);
  }
  return 1.0;
}

double eta_modulus(const Normalizer& eta, cd z) {
  if (const auto* g = std::get_if<GaborNormalizer>(&eta))
    return std::exp(M_PI * 0.5 * std::norm(z - g->z0.value_or(cd{})));
  return std::abs(eta_value(eta, z));
}

TFGrid normalize(const TFGrid& F, const Normalizer& eta) {
  const Lattice& lat = F.lattice();
  if (std::holds_alternative<NoNormalizer>(eta)) return F;
  if (const auto* c = std::get_if<CauchyNormalizer>(&eta)) {
    if (c->order < 1) fail(ErrorKind::precondition, "Cauchy order must be >= 1");
    if (!(lat.y(0) > 0.0)) fail(ErrorKind::domain, "Cauchy normalizer needs a lattice strictly above y = 0");
  }
  std::vector<cd> v(F.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = eta_value(eta, lat.z(k)) * F[k];
  return TFGrid(lat, std::move(v));
}

namespace {

struct Partials {
  double ux, uy, vx, vy;
};

Partials central(const TFGrid& G, int i, int j) {
  const Lattice& lat = G.lattice();
  const cd gx = (G(i + 1, j) - G(i - 1, j)) / (2.0 * lat.dx);
  const cd gy = (G(i, j + 1) - G(i, j - 1)) / (2.0 * lat.dy);
  return {gx.real(), gy.real(), gx.imag(), gy.imag()};
}

// Fourth-order central stencil; needs two cells of margin.
Partials central4(const TFGrid& G, int i, int j) {
  const Lattice& lat = G.lattice();
  const cd gx = (G(i - 2, j) - 8.0 * G(i - 1, j) + 8.0 * G(i + 1, j) - G(i + 2, j)) / (12.0 * lat.dx);
  const cd gy = (G(i, j - 2) - 8.0 * G(i, j - 1) + 8.0 * G(i, j + 1) - G(i, j + 2)) / (12.0 * lat.dy);
  return {gx.real(), gy.real(), gx.imag(), gy.imag()};
}

}  // namespace

double cr_residual(const TFGrid& G) {
  const Lattice& lat = G.lattice();
  if (lat.nx < 3 || lat.ny < 3) fail(ErrorKind::structural, "cr_residual needs at least 3x3 samples");
  double defect = 0.0, scale = 0.0;
  for (int j = 1; j + 1 < lat.ny; ++j)
    for (int i = 1; i + 1 < lat.nx; ++i) {
      const Partials d = central(G, i, j);
      defect = std::max(defect, std::hypot(d.ux - d.vy, d.uy + d.vx));
      scale = std::max(scale, std::sqrt(d.ux * d.ux + d.uy * d.uy + d.vx * d.vx + d.vy * d.vy));
    }
  return scale > 0.0 ? defect / scale : 0.0;
}

double verify_key_lemma(const TFGrid& G, double floor) {
  const Lattice& lat = G.lattice();
  if (lat.nx < 5 || lat.ny < 5) fail(ErrorKind::structural, "verify_key_lemma needs at least 5x5 samples");
  if (floor < 0.0) fail(ErrorKind::precondition, "floor must be non-negative");
  const double gmax = G.max_abs();
  double defect = 0.0, scale = 0.0;
  bool any = false;
  for (int j = 2; j + 2 < lat.ny; ++j)
    for (int i = 2; i + 2 < lat.nx; ++i) {
      const cd g = G(i, j);
      const double mod = std::abs(g);
      if (mod == 0.0 || mod < floor * gmax) continue;
      any = true;
      const Partials d = central4(G, i, j);
      const double lhs = std::hypot(d.ux, d.vx);
      const double ax = (g.real() * d.ux + g.imag() * d.vx) / mod;
      const double ay = (g.real() * d.uy + g.imag() * d.vy) / mod;
      defect = std::max(defect, std::abs(lhs - std::hypot(ax, ay)));
      scale = std::max(scale, lhs);
    }
  if (!any) fail(ErrorKind::domain, "no cells above the key-lemma floor");
  return scale > 0.0 ? defect / scale : 0.0;
}

}  // namespace atollpr
