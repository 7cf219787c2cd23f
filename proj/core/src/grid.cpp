#include "atollpr/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "atollpr/error.hpp"
#include "atollpr/parallel.hpp"

namespace atollpr {

void Lattice::validate() const {
  if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy))
    fail(ErrorKind::structural, "lattice spacings must be positive and finite");
  if (nx < 2 || ny < 2) fail(ErrorKind::structural, "lattice needs nx >= 2 and ny >= 2");
  if (!std::isfinite(origin_x) || !std::isfinite(origin_y))
    fail(ErrorKind::structural, "lattice origin must be finite");
}

Lattice make_lattice(double x_min, double x_max, double y_min, double y_max, double dx, double dy) {
  if (!(x_max > x_min) || !(y_max > y_min)) fail(ErrorKind::structural, "empty lattice range");
  if (!(dx > 0.0) || !(dy > 0.0)) fail(ErrorKind::structural, "lattice spacings must be positive");
  Lattice lat;
  lat.origin_x = x_min;
  lat.origin_y = y_min;
  lat.dx = dx;
  lat.dy = dy;
  lat.nx = static_cast<int>(std::ceil((x_max - x_min) / dx - 1e-9)) + 1;
  lat.ny = static_cast<int>(std::ceil((y_max - y_min) / dy - 1e-9)) + 1;
  lat.validate();
  return lat;
}

void require_same_lattice(const Lattice& a, const Lattice& b, const char* what) {
  if (!(a == b)) fail(ErrorKind::structural, std::string("lattice mismatch: ") + what);
}

// ---- TFGrid -------------------------------------------------------------

TFGrid::TFGrid(Lattice lattice, std::vector<cd> values) : lattice_(lattice), values_(std::move(values)) {
  lattice_.validate();
  if (values_.size() != lattice_.size()) {
    std::ostringstream os;
    os << "grid has " << values_.size() << " values, lattice needs " << lattice_.size();
    fail(ErrorKind::structural, os.str());
  }
  for (const cd& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      fail(ErrorKind::domain, "grid samples must be finite");
}

TFGrid::TFGrid(Lattice lattice, const std::vector<double>& real_values)
    : TFGrid(lattice, std::vector<cd>(real_values.begin(), real_values.end())) {}

TFGrid TFGrid::zeros(const Lattice& lattice) { return TFGrid(lattice, std::vector<cd>(lattice.size())); }

bool TFGrid::is_real() const {
  return std::all_of(values_.begin(), values_.end(), [](const cd& v) { return v.imag() == 0.0; });
}

std::vector<double> TFGrid::abs_values() const {
  std::vector<double> out(values_.size());
  for (std::size_t k = 0; k < values_.size(); ++k) out[k] = std::abs(values_[k]);
  return out;
}

std::vector<double> TFGrid::real_values() const {
  std::vector<double> out(values_.size());
  for (std::size_t k = 0; k < values_.size(); ++k) out[k] = values_[k].real();
  return out;
}

double TFGrid::max_abs() const {
  double m = 0.0;
  for (const cd& v : values_) m = std::max(m, std::abs(v));
  return m;
}

TFGrid magnitude(const TFGrid& g) { return TFGrid(g.lattice(), g.abs_values()); }

TFGrid scaled(const TFGrid& g, cd c) {
  std::vector<cd> v(g.values());
  for (auto& x : v) x *= c;
  return TFGrid(g.lattice(), std::move(v));
}

TFGrid add(const TFGrid& a, const TFGrid& b) {
  require_same_lattice(a.lattice(), b.lattice(), "add");
  std::vector<cd> v(a.values());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] += b[k];
  return TFGrid(a.lattice(), std::move(v));
}

TFGrid subtract(const TFGrid& a, const TFGrid& b) {
  require_same_lattice(a.lattice(), b.lattice(), "subtract");
  std::vector<cd> v(a.values());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] -= b[k];
  return TFGrid(a.lattice(), std::move(v));
}

TFGrid flip_y(const TFGrid& g) {
  Lattice lat = g.lattice();
  lat.origin_y = -g.lattice().y_max();
  std::vector<cd> v(g.size());
  for (int j = 0; j < lat.ny; ++j)
    for (int i = 0; i < lat.nx; ++i) v[lat.index(i, j)] = g(i, lat.ny - 1 - j);
  return TFGrid(lat, std::move(v));
}

// ---- DomainMask ---------------------------------------------------------

DomainMask::DomainMask(Lattice lattice, std::vector<std::uint8_t> cells)
    : lattice_(lattice), cells_(std::move(cells)) {
  lattice_.validate();
  if (cells_.size() != lattice_.size()) fail(ErrorKind::structural, "mask size does not match lattice");
  for (auto& c : cells_) c = c ? 1 : 0;
}

DomainMask DomainMask::empty(const Lattice& lattice) {
  return DomainMask(lattice, std::vector<std::uint8_t>(lattice.size(), 0));
}

DomainMask DomainMask::full(const Lattice& lattice) {
  return DomainMask(lattice, std::vector<std::uint8_t>(lattice.size(), 1));
}

std::size_t DomainMask::count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

bool DomainMask::is_boundary(int i, int j) const {
  if (!(*this)(i, j)) return false;
  if (i == 0 || j == 0 || i == lattice_.nx - 1 || j == lattice_.ny - 1) return true;
  return !(*this)(i - 1, j) || !(*this)(i + 1, j) || !(*this)(i, j - 1) || !(*this)(i, j + 1);
}

DomainMask DomainMask::boundary() const {
  std::vector<std::uint8_t> b(cells_.size(), 0);
  for (int j = 0; j < lattice_.ny; ++j)
    for (int i = 0; i < lattice_.nx; ++i) b[lattice_.index(i, j)] = is_boundary(i, j) ? 1 : 0;
  return DomainMask(lattice_, std::move(b));
}

std::vector<std::size_t> DomainMask::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < cells_.size(); ++k)
    if (cells_[k]) out.push_back(k);
  return out;
}

bool DomainMask::subset_of(const DomainMask& other) const {
  require_same_lattice(lattice_, other.lattice_, "subset_of");
  for (std::size_t k = 0; k < cells_.size(); ++k)
    if (cells_[k] && !other.cells_[k]) return false;
  return true;
}

namespace {
template <class Op>
DomainMask combine(const DomainMask& a, const DomainMask& b, Op op, const char* what) {
  require_same_lattice(a.lattice(), b.lattice(), what);
  std::vector<std::uint8_t> c(a.cells().size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = op(a[k], b[k]) ? 1 : 0;
  return DomainMask(a.lattice(), std::move(c));
}
}  // namespace

DomainMask mask_union(const DomainMask& a, const DomainMask& b) {
  return combine(a, b, [](bool x, bool y) { return x || y; }, "union");
}
DomainMask mask_intersection(const DomainMask& a, const DomainMask& b) {
  return combine(a, b, [](bool x, bool y) { return x && y; }, "intersection");
}
DomainMask mask_minus(const DomainMask& a, const DomainMask& b) {
  return combine(a, b, [](bool x, bool y) { return x && !y; }, "minus");
}
DomainMask mask_complement(const DomainMask& a) {
  std::vector<std::uint8_t> c(a.cells().size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = a[k] ? 0 : 1;
  return DomainMask(a.lattice(), std::move(c));
}

// ---- ParamDomain --------------------------------------------------------

void validate(const ParamDomain& d) {
  if (const auto* disc = std::get_if<Disc>(&d)) {
    if (!(disc->r > 0.0)) fail(ErrorKind::domain, "disc radius must be positive");
  } else if (const auto* ann = std::get_if<Annulus>(&d)) {
    if (!(ann->r >= 0.0) || !(ann->r < ann->s)) fail(ErrorKind::domain, "annulus needs 0 <= r < s");
  } else if (std::get<Raster>(d).mask.is_empty()) {
    fail(ErrorKind::domain, "raster domain is empty");
  }
}

DomainMask rasterize(const ParamDomain& d, const Lattice& lattice) {
  validate(d);
  if (const auto* r = std::get_if<Raster>(&d)) {
    require_same_lattice(r->mask.lattice(), lattice, "rasterize");
    return r->mask;
  }
  std::vector<std::uint8_t> cells(lattice.size(), 0);
  for (int j = 0; j < lattice.ny; ++j) {
    for (int i = 0; i < lattice.nx; ++i) {
      const cd z = lattice.z(i, j);
      bool in = false;
      if (const auto* disc = std::get_if<Disc>(&d)) {
        in = std::abs(z - disc->center) <= disc->r;
      } else {
        const auto& a = std::get<Annulus>(d);
        const double rho = std::abs(z - a.center);
        in = rho >= a.r && rho <= a.s;
      }
      cells[lattice.index(i, j)] = in ? 1 : 0;
    }
  }
  return DomainMask(lattice, std::move(cells));
}

double nominal_area(const ParamDomain& d) {
  if (const auto* disc = std::get_if<Disc>(&d)) return M_PI * disc->r * disc->r;
  if (const auto* a = std::get_if<Annulus>(&d)) return M_PI * (a->s * a->s - a->r * a->r);
  return std::get<Raster>(d).mask.area();
}

const char* shape_name(const ParamDomain& d) {
  if (std::holds_alternative<Disc>(d)) return "disc";
  if (std::holds_alternative<Annulus>(d)) return "annulus";
  return "raster";
}

int label_components(const Lattice& lat, const std::vector<std::uint8_t>& cells, std::vector<int>& labels) {
  labels.assign(lat.size(), -1);
  int next = 0;
  std::deque<std::size_t> queue;
  for (std::size_t seed = 0; seed < cells.size(); ++seed) {
    if (!cells[seed] || labels[seed] >= 0) continue;
    labels[seed] = next;
    queue.push_back(seed);
    while (!queue.empty()) {
      const std::size_t k = queue.front();
      queue.pop_front();
      const int i = lat.col(k), j = lat.row(k);
      const int ni[4] = {i - 1, i + 1, i, i};
      const int nj[4] = {j, j, j - 1, j + 1};
      for (int q = 0; q < 4; ++q) {
        if (ni[q] < 0 || nj[q] < 0 || ni[q] >= lat.nx || nj[q] >= lat.ny) continue;
        const std::size_t m = lat.index(ni[q], nj[q]);
        if (cells[m] && labels[m] < 0) {
          labels[m] = next;
          queue.push_back(m);
        }
      }
    }
    ++next;
  }
  return next;
}

// ---- norms --------------------------------------------------------------

double lp_norm(const TFGrid& g, const DomainMask& mask, double p) {
  require_same_lattice(g.lattice(), mask.lattice(), "lp_norm");
  if (!(p >= 1.0)) fail(ErrorKind::precondition, "lp_norm needs p >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
      if (mask[k]) m = std::max(m, std::abs(g[k]));
    return m;
  }
  std::vector<double> terms;
  terms.reserve(mask.count());
  const double area = g.lattice().cell_area();
  for (std::size_t k = 0; k < g.size(); ++k)
    if (mask[k]) terms.push_back(std::pow(std::abs(g[k]), p) * area);
  if (terms.empty()) return 0.0;
  return std::pow(pairwise_sum(terms), 1.0 / p);
}

namespace {

// Derivative along a strided line of n samples with spacing h.
void fd_line(const cd* in, std::size_t stride, int n, double h, cd* out) {
  auto at = [&](int k) { return in[static_cast<std::size_t>(k) * stride]; };
  for (int k = 1; k + 1 < n; ++k) out[k * stride] = (at(k + 1) - at(k - 1)) / (2.0 * h);
  out[0] = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
  out[static_cast<std::size_t>(n - 1) * stride] = (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
}

void spectral_line(const cd* in, std::size_t stride, int n, double h, cd* out) {
  std::vector<cd> buf(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) buf[k] = in[static_cast<std::size_t>(k) * stride];
  fft_inplace(buf, -1);
  const double period = n * h;
  for (int k = 0; k < n; ++k) {
    int m = k <= n / 2 ? k : k - n;
    if (n % 2 == 0 && k == n / 2) m = 0;
    buf[k] *= cd(0.0, 2.0 * M_PI * m / period) / static_cast<double>(n);
  }
  fft_inplace(buf, +1);
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k) * stride] = buf[k];
}

}  // namespace

std::pair<TFGrid, TFGrid> gradient(const TFGrid& g, GradientMode mode) {
  const Lattice& lat = g.lattice();
  if (lat.nx < 3 || lat.ny < 3) fail(ErrorKind::structural, "gradient needs at least 3x3 samples");
  std::vector<cd> gx(g.size()), gy(g.size());
  const cd* v = g.values().data();
  auto line = mode == GradientMode::spectral ? spectral_line : fd_line;
  for (int j = 0; j < lat.ny; ++j) line(v + lat.index(0, j), 1, lat.nx, lat.dx, gx.data() + lat.index(0, j));
  for (int i = 0; i < lat.nx; ++i) line(v + i, lat.nx, lat.ny, lat.dy, gy.data() + i);
  return {TFGrid(lat, std::move(gx)), TFGrid(lat, std::move(gy))};
}

std::vector<double> gradient_norm(const TFGrid& g) {
  auto [gx, gy] = gradient(g);
  std::vector<double> out(g.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::sqrt(std::norm(gx[k]) + std::norm(gy[k]));
  return out;
}

double w1p_norm(const TFGrid& g, const DomainMask& mask, double p) {
  require_same_lattice(g.lattice(), mask.lattice(), "w1p_norm");
  const TFGrid grad(g.lattice(), gradient_norm(g));
  return lp_norm(g, mask, p) + lp_norm(grad, mask, p);
}

// ---- boundary geometry ----------------------------------------------------

namespace {

constexpr int kPad = 6;

struct Contour {
  int nxp, nyp;
  std::vector<double> f;  // padded field
  double at(int i, int j) const { return f[static_cast<std::size_t>(j) * nxp + i]; }
};

Contour padded_indicator(const DomainMask& mask, bool smooth) {
  const Lattice& lat = mask.lattice();
  Contour c{lat.nx + 2 * kPad, lat.ny + 2 * kPad, {}};
  c.f.assign(static_cast<std::size_t>(c.nxp) * c.nyp, 0.0);
  for (int j = 0; j < lat.ny; ++j)
    for (int i = 0; i < lat.nx; ++i)
      if (mask(i, j)) c.f[static_cast<std::size_t>(j + kPad) * c.nxp + i + kPad] = 1.0;
  if (!smooth) return c;
  // Separable Gaussian with sigma of one cell.
  constexpr int R = 4;
  double w[2 * R + 1];
  double total = 0.0;
  for (int k = -R; k <= R; ++k) total += (w[k + R] = std::exp(-0.5 * k * k));
  for (double& x : w) x /= total;
  std::vector<double> tmp(c.f.size(), 0.0);
  for (int j = 0; j < c.nyp; ++j)
    for (int i = 0; i < c.nxp; ++i) {
      double s = 0.0;
      for (int k = -R; k <= R; ++k) {
        const int ii = i + k;
        if (ii >= 0 && ii < c.nxp) s += w[k + R] * c.at(ii, j);
      }
      tmp[static_cast<std::size_t>(j) * c.nxp + i] = s;
    }
  for (int j = 0; j < c.nyp; ++j)
    for (int i = 0; i < c.nxp; ++i) {
      double s = 0.0;
      for (int k = -R; k <= R; ++k) {
        const int jj = j + k;
        if (jj >= 0 && jj < c.nyp) s += w[k + R] * tmp[static_cast<std::size_t>(jj) * c.nxp + i];
      }
      c.f[static_cast<std::size_t>(j) * c.nxp + i] = s;
    }
  return c;
}

// Marching squares at level 1/2. Each segment's length goes to the nearest
// true mask cell among the square's corners (or a small neighbourhood).
std::vector<double> march(const DomainMask& mask, const Contour& c) {
  const Lattice& lat = mask.lattice();
  std::vector<double> weights(lat.size(), 0.0);
  constexpr double level = 0.5;
  const int ci[4] = {0, 1, 1, 0};
  const int cj[4] = {0, 0, 1, 1};
  auto true_cell = [&](int pi, int pj) {
    const int i = pi - kPad, j = pj - kPad;
    return i >= 0 && j >= 0 && i < lat.nx && j < lat.ny && mask(i, j);
  };
  for (int pj = 0; pj + 1 < c.nyp; ++pj) {
    for (int pi = 0; pi + 1 < c.nxp; ++pi) {
      double v[4];
      bool in[4];
      int nin = 0;
      for (int q = 0; q < 4; ++q) {
        v[q] = c.at(pi + ci[q], pj + cj[q]);
        in[q] = v[q] >= level;
        nin += in[q];
      }
      if (nin == 0 || nin == 4) continue;
      // Edge e joins corners e and e+1 (mod 4).
      double px[4], py[4];
      bool cross[4];
      for (int e = 0; e < 4; ++e) {
        const int a = e, b = (e + 1) % 4;
        cross[e] = in[a] != in[b];
        if (!cross[e]) continue;
        const double t = (level - v[a]) / (v[b] - v[a]);
        px[e] = (ci[a] + t * (ci[b] - ci[a])) * lat.dx;
        py[e] = (cj[a] + t * (cj[b] - cj[a])) * lat.dy;
      }
      std::pair<int, int> segs[2];
      int nseg = 0;
      if (nin == 2 && in[0] == in[2]) {
        const double centre = 0.25 * (v[0] + v[1] + v[2] + v[3]);
        const bool cin = centre >= level;
        // Cut off each corner whose state differs from the centre.
        for (int q = 0; q < 4; ++q)
          if (in[q] != cin) segs[nseg++] = {(q + 3) % 4, q};
      } else {
        int first = -1;
        for (int e = 0; e < 4; ++e)
          if (cross[e]) {
            if (first < 0) first = e;
            else segs[nseg++] = {first, e};
          }
      }
      for (int s = 0; s < nseg; ++s) {
        const int e1 = segs[s].first, e2 = segs[s].second;
        const double len = std::hypot(px[e1] - px[e2], py[e1] - py[e2]);
        const double mx = 0.5 * (px[e1] + px[e2]), my = 0.5 * (py[e1] + py[e2]);
        int best_i = -1, best_j = -1;
        double best = 1e300;
        for (int q = 0; q < 4; ++q) {
          if (!true_cell(pi + ci[q], pj + cj[q])) continue;
          const double d = std::hypot(mx - ci[q] * lat.dx, my - cj[q] * lat.dy);
          if (d < best) best = d, best_i = pi + ci[q], best_j = pj + cj[q];
        }
        if (best_i < 0) {
          for (int dj = -3; dj <= 4; ++dj)
            for (int di = -3; di <= 4; ++di) {
              if (!true_cell(pi + di, pj + dj)) continue;
              const double d = std::hypot(mx - di * lat.dx, my - dj * lat.dy);
              if (d < best) best = d, best_i = pi + di, best_j = pj + dj;
            }
        }
        if (best_i >= 0) weights[lat.index(best_i - kPad, best_j - kPad)] += len;
      }
    }
  }
  return weights;
}

}  // namespace

std::vector<double> perimeter_weights(const DomainMask& mask) {
  if (mask.is_empty()) fail(ErrorKind::domain, "perimeter of an empty mask");
  auto w = march(mask, padded_indicator(mask, true));
  if (std::all_of(w.begin(), w.end(), [](double x) { return x == 0.0; }))
    w = march(mask, padded_indicator(mask, false));
  return w;
}

double perimeter(const DomainMask& mask) { return pairwise_sum(perimeter_weights(mask)); }

double boundary_norm(const TFGrid& g, const DomainMask& mask, double p) {
  require_same_lattice(g.lattice(), mask.lattice(), "boundary_norm");
  if (!(p >= 1.0)) fail(ErrorKind::precondition, "boundary_norm needs p >= 1");
  const auto w = perimeter_weights(mask);
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k)
      if (w[k] > 0.0) m = std::max(m, std::abs(g[k]));
    return m;
  }
  std::vector<double> terms;
  for (std::size_t k = 0; k < w.size(); ++k)
    if (w[k] > 0.0) terms.push_back(std::pow(std::abs(g[k]), p) * w[k]);
  return std::pow(pairwise_sum(terms), 1.0 / p);
}

namespace {

// Lower envelope of parabolas (Felzenszwalb-Huttenlocher) with spacing h.
void edt_1d(const double* f, std::size_t stride, int n, double h, double* out, std::vector<int>& v,
            std::vector<double>& z, std::vector<double>& tmp) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  tmp.resize(n);
  for (int q = 0; q < n; ++q) tmp[q] = f[static_cast<std::size_t>(q) * stride];
  v.assign(n, 0);
  z.assign(n + 1, 0.0);
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (std::isinf(tmp[q])) continue;
    const double xq = q * h;
    while (k >= 0) {
      const double xv = v[k] * h;
      const double s = ((tmp[q] + xq * xq) - (tmp[v[k]] + xv * xv)) / (2.0 * (xq - xv));
      if (s <= z[k]) {
        --k;
        continue;
      }
      break;
    }
    ++k;
    v[k] = q;
    if (k == 0) {
      z[0] = -inf;
    } else {
      const double xv = v[k - 1] * h;
      z[k] = ((tmp[q] + xq * xq) - (tmp[v[k - 1]] + xv * xv)) / (2.0 * (xq - xv));
    }
    z[k + 1] = inf;
  }
  if (k < 0) {
    for (int q = 0; q < n; ++q) out[static_cast<std::size_t>(q) * stride] = inf;
    return;
  }
  int m = 0;
  for (int q = 0; q < n; ++q) {
    const double xq = q * h;
    while (z[m + 1] < xq) ++m;
    const double d = xq - v[m] * h;
    out[static_cast<std::size_t>(q) * stride] = d * d + tmp[v[m]];
  }
}

}  // namespace

TFGrid distance_transform(const DomainMask& mask) {
  if (mask.is_empty()) fail(ErrorKind::domain, "distance transform of an empty mask");
  const Lattice& lat = mask.lattice();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> f(lat.size(), inf);
  for (int j = 0; j < lat.ny; ++j)
    for (int i = 0; i < lat.nx; ++i)
      if (mask.is_boundary(i, j)) f[lat.index(i, j)] = 0.0;
  std::vector<double> g(lat.size());
  std::vector<int> v;
  std::vector<double> z, tmp;
  for (int j = 0; j < lat.ny; ++j)
    edt_1d(f.data() + lat.index(0, j), 1, lat.nx, lat.dx, g.data() + lat.index(0, j), v, z, tmp);
  for (int i = 0; i < lat.nx; ++i) edt_1d(g.data() + i, lat.nx, lat.ny, lat.dy, f.data() + i, v, z, tmp);
  std::vector<double> out(lat.size(), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k)
    if (mask[k]) out[k] = std::sqrt(f[k]);
  return TFGrid(lat, out);
}

}  // namespace atollpr
