#include "atollpr/alignment.hpp"

#include <cmath>

#include "atollpr/error.hpp"
#include "atollpr/parallel.hpp"

namespace atollpr {

double PhaseAlignmentReport::component_sum() const {
  double s = 0.0;
  for (const auto& c : components) s += c.residual;
  return s;
}

double wrap_phase(double a) {
  double r = std::remainder(a, 2.0 * M_PI);
  if (r <= -M_PI) r += 2.0 * M_PI;
  return r;
}

double residual_at(const TFGrid& F, const TFGrid& G, const DomainMask& mask, double alpha) {
  require_same_lattice(F.lattice(), G.lattice(), "alignment");
  require_same_lattice(F.lattice(), mask.lattice(), "alignment mask");
  const cd rot = std::polar(1.0, alpha);
  std::vector<double> t;
  for (std::size_t k = 0; k < F.size(); ++k)
    if (mask[k]) t.push_back(std::norm(F[k] - rot * G[k]));
  return std::sqrt(pairwise_sum(t) * F.lattice().cell_area());
}

ComponentAlignment align_component(const TFGrid& F, const TFGrid& G, const DomainMask& mask) {
  require_same_lattice(F.lattice(), G.lattice(), "alignment");
  require_same_lattice(F.lattice(), mask.lattice(), "alignment mask");
  std::vector<double> re, im;
  for (std::size_t k = 0; k < F.size(); ++k)
    if (mask[k]) {
      const cd v = F[k] * std::conj(G[k]);
      re.push_back(v.real());
      im.push_back(v.imag());
    }
  const cd ip(pairwise_sum(re), pairwise_sum(im));
  ComponentAlignment out;
  if (ip == cd{}) {
    out.alpha = 0.0;
    out.degenerate = true;
  } else {
    out.alpha = wrap_phase(std::arg(ip));
  }
  out.residual = residual_at(F, G, mask, out.alpha);
  return out;
}

PhaseAlignmentReport align_decomposition(const TFGrid& F, const TFGrid& G, const AtollDecomposition& dec) {
  require_same_lattice(F.lattice(), dec.lattice, "alignment decomposition");
  PhaseAlignmentReport rep;
  rep.components.resize(dec.size());
  parallel_for(dec.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t j = b; j < e; ++j) rep.components[j] = align_component(F, G, dec.owned(j));
  });
  const DomainMask all = dec.union_D();
  if (all.is_empty()) return rep;
  rep.global = align_component(F, G, all);
  const TFGrid diff(F.lattice(), [&] {
    std::vector<double> d(F.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = std::abs(F[k]) - std::abs(G[k]);
    return d;
  }());
  rep.measurement_residual = w1p_norm(diff, dec.union_D_plus(), 2.0);
  const double s = rep.component_sum();
  rep.ratio = s > 0.0 ? rep.global.residual / s : (rep.global.residual > 0.0 ? INFINITY : 1.0);
  return rep;
}

namespace {

// Quarter turns are exact so that |e^{i alpha} F| == |F| bit for bit.
cd unit_phase(double alpha) {
  const double q = alpha / (M_PI / 2.0);
  const double r = std::round(q);
  if (std::abs(q - r) < 1e-15) {
    switch (((static_cast<long>(r) % 4) + 4) % 4) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  return std::polar(1.0, alpha);
}

}  // namespace

TFGrid scramble_phases(const TFGrid& F, const AtollDecomposition& dec, const std::vector<double>& alphas) {
  require_same_lattice(F.lattice(), dec.lattice, "scramble");
  if (alphas.size() != dec.size()) fail(ErrorKind::structural, "one phase per component is required");
  std::vector<cd> u(alphas.size());
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = unit_phase(alphas[j]);
  std::vector<cd> v(F.values());
  for (std::size_t k = 0; k < v.size(); ++k)
    if (dec.owner[k] >= 0) v[k] *= u[static_cast<std::size_t>(dec.owner[k])];
  return TFGrid(F.lattice(), std::move(v));
}

}  // namespace atollpr
