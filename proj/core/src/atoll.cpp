#include "atollpr/atoll.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "atollpr/error.hpp"
#include "atollpr/parallel.hpp"

namespace atollpr {

DomainMask AtollDecomposition::owned(std::size_t j) const {
  std::vector<std::uint8_t> c(owner.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = owner[k] == static_cast<int>(j) ? 1 : 0;
  return DomainMask(lattice, std::move(c));
}

DomainMask AtollDecomposition::union_D() const {
  std::vector<std::uint8_t> c(owner.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = owner[k] >= 0 ? 1 : 0;
  return DomainMask(lattice, std::move(c));
}

DomainMask AtollDecomposition::union_D_plus() const {
  DomainMask u = DomainMask::empty(lattice);
  for (const auto& c : components) u = mask_union(u, c.D_plus);
  return u;
}

bool AtollDecomposition::has_nesting() const {
  return std::any_of(components.begin(), components.end(), [](const AtollComponent& c) { return c.parent >= 0; });
}

double default_min_area(const Lattice& lattice) { return 9.0 * lattice.cell_area(); }

double concentration(const TFGrid& F, const DomainMask& mask) {
  require_same_lattice(F.lattice(), mask.lattice(), "concentration");
  std::vector<double> t;
  for (std::size_t k = 0; k < F.size(); ++k)
    if (!mask[k]) t.push_back(std::norm(F[k]));
  return std::sqrt(pairwise_sum(t) * F.lattice().cell_area());
}

double s_t(const DomainMask& mask, double t) {
  if (mask.is_empty()) fail(ErrorKind::domain, "s_t of an empty mask");
  if (!(t > 0.0) || t > 1.0) fail(ErrorKind::precondition, "s_t needs t in (0, 1]");
  const TFGrid dt = distance_transform(mask);
  std::vector<double> v;
  for (std::size_t k = 0; k < dt.size(); ++k)
    if (mask[k]) v.push_back(dt[k].real());
  std::sort(v.begin(), v.end());
  const auto need = static_cast<std::size_t>(std::ceil(t * static_cast<double>(v.size()) - 1e-9));
  return v[std::clamp<std::size_t>(need, 1, v.size()) - 1];
}

namespace {

struct Pts {
  std::vector<double> x, y;
};

Pts boundary_points(const DomainMask& m) {
  Pts p;
  const Lattice& lat = m.lattice();
  for (int j = 0; j < lat.ny; ++j)
    for (int i = 0; i < lat.nx; ++i)
      if (m.is_boundary(i, j)) {
        p.x.push_back(lat.x(i));
        p.y.push_back(lat.y(j));
      }
  return p;
}

// Algebraic (Kasa) fit of circles sharing one centre; one radius per set.
struct CircleFit {
  cd centre;
  std::vector<double> radius, residual;
  bool ok = false;
};

CircleFit fit_circles(const std::vector<const Pts*>& sets) {
  CircleFit out;
  std::size_t total = 0;
  double mx = 0.0, my = 0.0;
  for (const Pts* s : sets) {
    if (s->x.size() < 3) return out;
    total += s->x.size();
    mx += std::accumulate(s->x.begin(), s->x.end(), 0.0);
    my += std::accumulate(s->y.begin(), s->y.end(), 0.0);
  }
  mx /= static_cast<double>(total);
  my /= static_cast<double>(total);
  const int nk = static_cast<int>(sets.size());
  Eigen::MatrixXd A(static_cast<Eigen::Index>(total), 2 + nk);
  Eigen::VectorXd b(static_cast<Eigen::Index>(total));
  A.setZero();
  Eigen::Index row = 0;
  for (int s = 0; s < nk; ++s)
    for (std::size_t k = 0; k < sets[s]->x.size(); ++k, ++row) {
      const double x = sets[s]->x[k] - mx, y = sets[s]->y[k] - my;
      A(row, 0) = 2.0 * x;
      A(row, 1) = 2.0 * y;
      A(row, 2 + s) = 1.0;
      b(row) = x * x + y * y;
    }
  const Eigen::VectorXd sol = A.colPivHouseholderQr().solve(b);
  const double a = sol(0), c = sol(1);
  out.centre = cd(a + mx, c + my);
  for (int s = 0; s < nk; ++s) {
    const double r2 = sol(2 + s) + a * a + c * c;
    if (!(r2 > 0.0)) return out;
    const double r = std::sqrt(r2);
    double res = 0.0;
    for (std::size_t k = 0; k < sets[s]->x.size(); ++k)
      res = std::max(res, std::abs(std::abs(cd(sets[s]->x[k], sets[s]->y[k]) - out.centre) - r));
    out.radius.push_back(r);
    out.residual.push_back(res);
  }
  out.ok = true;
  return out;
}

// Boundary cell centres sit about half a cell inside the rasterized edge.
double half_cell(const Lattice& lat) { return 0.25 * (lat.dx + lat.dy); }

}  // namespace

ShapeFit fit_disc(const DomainMask& mask) {
  if (mask.is_empty()) fail(ErrorKind::domain, "cannot fit an empty mask");
  const Pts p = boundary_points(mask);
  const CircleFit f = fit_circles({&p});
  if (f.ok && f.residual[0] <= 0.1 * f.radius[0])
    return {Disc{f.centre, f.radius[0] + half_cell(mask.lattice())}, f.residual[0]};
  return {Raster{mask}, f.ok ? f.residual[0] : 0.0};
}

ShapeFit fit_param_domain(const AtollComponent& c) {
  if (c.D.is_empty()) fail(ErrorKind::domain, "cannot fit an empty component");
  if (c.lagoons.empty()) {
    ShapeFit s = fit_disc(c.D);
    if (std::holds_alternative<Raster>(s.domain)) s.domain = Raster{c.D_plus};
    return s;
  }
  if (c.lagoons.size() == 1) {
    const Pts outer = boundary_points(c.D);
    const Pts inner = boundary_points(c.lagoons[0]);
    const CircleFit f = fit_circles({&outer, &inner});
    if (f.ok && f.radius[1] < f.radius[0] && f.residual[0] <= 0.1 * f.radius[0] &&
        f.residual[1] <= 0.1 * f.radius[1]) {
      const double h = half_cell(c.D.lattice());
      return {Annulus{f.centre, f.radius[1] + h, f.radius[0] + h}, std::max(f.residual[0], f.residual[1])};
    }
    return {Raster{c.D_plus}, f.ok ? std::max(f.residual[0], f.residual[1]) : 0.0};
  }
  return {Raster{c.D_plus}, 0.0};
}

AtollDecomposition segment(const TFGrid& magnitude, double delta, std::optional<double> min_area) {
  const Lattice& lat = magnitude.lattice();
  if (!(delta > 0.0)) fail(ErrorKind::precondition, "segmentation threshold must be positive");
  for (const cd& v : magnitude.values())
    if (v.imag() != 0.0 || v.real() < 0.0)
      fail(ErrorKind::precondition, "segment expects a non-negative real magnitude grid");
  const double amin = min_area.value_or(default_min_area(lat));
  const auto mag = magnitude.real_values();
  const auto grad = gradient_norm(magnitude);

  std::vector<std::uint8_t> super(lat.size());
  for (std::size_t k = 0; k < super.size(); ++k) super[k] = mag[k] >= delta ? 1 : 0;
  std::vector<int> labels;
  const int ncomp = label_components(lat, super, labels);
  std::vector<std::size_t> counts(static_cast<std::size_t>(ncomp), 0);
  for (int l : labels)
    if (l >= 0) ++counts[static_cast<std::size_t>(l)];

  AtollDecomposition dec;
  dec.lattice = lat;
  dec.threshold = delta;
  for (int c = 0; c < ncomp; ++c) {
    if (static_cast<double>(counts[c]) * lat.cell_area() < amin) continue;
    std::vector<std::uint8_t> plus(lat.size()), rest(lat.size());
    for (std::size_t k = 0; k < plus.size(); ++k) {
      plus[k] = labels[k] == c ? 1 : 0;
      rest[k] = plus[k] ? 0 : 1;
    }
    std::vector<int> hl;
    const int nh = label_components(lat, rest, hl);
    std::vector<std::uint8_t> touches(static_cast<std::size_t>(nh), 0);
    for (int j = 0; j < lat.ny; ++j)
      for (int i = 0; i < lat.nx; ++i) {
        if (i != 0 && j != 0 && i != lat.nx - 1 && j != lat.ny - 1) continue;
        const int h = hl[lat.index(i, j)];
        if (h >= 0) touches[static_cast<std::size_t>(h)] = 1;
      }
    std::vector<std::uint8_t> full(plus);
    std::vector<DomainMask> lagoons;
    for (int h = 0; h < nh; ++h) {
      if (touches[h]) continue;
      std::vector<std::uint8_t> lag(lat.size(), 0);
      for (std::size_t k = 0; k < lag.size(); ++k)
        if (hl[k] == h) lag[k] = full[k] = 1;
      lagoons.emplace_back(lat, std::move(lag));
    }
    DomainMask D(lat, std::move(full));
    DomainMask Dp(lat, std::move(plus));
    double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
    for (std::size_t k = 0; k < mag.size(); ++k) {
      if (Dp[k]) dmin = std::min(dmin, mag[k]);
      if (D[k]) dmax = std::max({dmax, mag[k], grad[k]});
    }
    AtollComponent comp{D, std::move(lagoons), Dp, dmin, dmax, concentration(magnitude, D), -1,
                        ShapeFit{Raster{Dp}, 0.0}};
    comp.shape = fit_param_domain(comp);
    dec.components.push_back(std::move(comp));
  }

  // Nesting: the smallest enclosing D is the parent; ownership goes to the
  // innermost component.
  const std::size_t n = dec.components.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dec.components[a].D.count() > dec.components[b].D.count();
  });
  dec.owner.assign(lat.size(), -1);
  for (std::size_t oi : order) {
    const auto& D = dec.components[oi].D;
    for (std::size_t k = 0; k < lat.size(); ++k)
      if (D[k]) dec.owner[k] = static_cast<int>(oi);
  }
  for (std::size_t a = 0; a < n; ++a) {
    std::size_t best = n;
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b || !dec.components[a].D_plus.subset_of(dec.components[b].D)) continue;
      if (dec.components[a].D.count() >= dec.components[b].D.count()) continue;
      if (best == n || dec.components[b].D.count() < dec.components[best].D.count()) best = b;
    }
    if (best < n) dec.components[a].parent = static_cast<int>(best);
  }
  return dec;
}

}  // namespace atollpr
