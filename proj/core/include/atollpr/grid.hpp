#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <utility>
#include <variant>
#include <vector>

#include "atollpr/fft.hpp"

namespace atollpr {

// Sample (i, j) sits at z = (origin_x + i dx) + i (origin_y + j dy) and is
// stored at index j * nx + i.
struct Lattice {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double dx = 1.0;
  double dy = 1.0;
  int nx = 2;
  int ny = 2;

  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  int col(std::size_t k) const { return static_cast<int>(k % nx); }
  int row(std::size_t k) const { return static_cast<int>(k / nx); }
  double x(int i) const { return origin_x + i * dx; }
  double y(int j) const { return origin_y + j * dy; }
  cd z(int i, int j) const { return {x(i), y(j)}; }
  cd z(std::size_t k) const { return z(col(k), row(k)); }
  double x_max() const { return x(nx - 1); }
  double y_max() const { return y(ny - 1); }
  double cell_area() const { return dx * dy; }

  void validate() const;
  bool operator==(const Lattice&) const = default;
};

// Smallest lattice with the given spacing whose samples cover both ranges.
Lattice make_lattice(double x_min, double x_max, double y_min, double y_max, double dx, double dy);

void require_same_lattice(const Lattice& a, const Lattice& b, const char* what);

class TFGrid {
 public:
  TFGrid(Lattice lattice, std::vector<cd> values);
  TFGrid(Lattice lattice, const std::vector<double>& real_values);

  static TFGrid zeros(const Lattice& lattice);
  template <class Fn>
  static TFGrid sample(const Lattice& lattice, Fn&& fn) {
    std::vector<cd> v(lattice.size());
    for (int j = 0; j < lattice.ny; ++j)
      for (int i = 0; i < lattice.nx; ++i) v[lattice.index(i, j)] = fn(lattice.z(i, j));
    return TFGrid(lattice, std::move(v));
  }

  const Lattice& lattice() const { return lattice_; }
  const std::vector<cd>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  cd operator[](std::size_t k) const { return values_[k]; }
  cd operator()(int i, int j) const { return values_[lattice_.index(i, j)]; }

  bool is_real() const;
  std::vector<double> abs_values() const;
  std::vector<double> real_values() const;
  double max_abs() const;

 private:
  Lattice lattice_;
  std::vector<cd> values_;
};

// |g| as a real grid.
TFGrid magnitude(const TFGrid& g);
TFGrid scaled(const TFGrid& g, cd c);
TFGrid add(const TFGrid& a, const TFGrid& b);
TFGrid subtract(const TFGrid& a, const TFGrid& b);
// F(x, y) -> F(x, -y) on the mirrored lattice.
TFGrid flip_y(const TFGrid& g);

class DomainMask {
 public:
  DomainMask(Lattice lattice, std::vector<std::uint8_t> cells);

  static DomainMask empty(const Lattice& lattice);
  static DomainMask full(const Lattice& lattice);

  const Lattice& lattice() const { return lattice_; }
  const std::vector<std::uint8_t>& cells() const { return cells_; }
  bool operator[](std::size_t k) const { return cells_[k] != 0; }
  bool operator()(int i, int j) const { return cells_[lattice_.index(i, j)] != 0; }

  std::size_t count() const;
  double area() const { return static_cast<double>(count()) * lattice_.cell_area(); }
  bool is_empty() const { return count() == 0; }
  // True cell with a false 4-neighbour, or on the lattice edge.
  bool is_boundary(int i, int j) const;
  DomainMask boundary() const;
  std::vector<std::size_t> indices() const;
  bool subset_of(const DomainMask& other) const;
  bool operator==(const DomainMask&) const = default;

 private:
  Lattice lattice_;
  std::vector<std::uint8_t> cells_;
};

DomainMask mask_union(const DomainMask& a, const DomainMask& b);
DomainMask mask_intersection(const DomainMask& a, const DomainMask& b);
DomainMask mask_minus(const DomainMask& a, const DomainMask& b);
DomainMask mask_complement(const DomainMask& a);

struct Disc {
  cd center{};
  double r = 1.0;
};
struct Annulus {
  cd center{};
  double r = 0.0;  // inner
  double s = 1.0;  // outer
};
struct Raster {
  DomainMask mask;
};
using ParamDomain = std::variant<Disc, Annulus, Raster>;

void validate(const ParamDomain& d);
// Cells whose centres lie in the closed domain.
DomainMask rasterize(const ParamDomain& d, const Lattice& lattice);
double nominal_area(const ParamDomain& d);
const char* shape_name(const ParamDomain& d);

// Labels 4-connected components of `cells`; returns the component count.
// labels[k] = -1 where cells[k] is false.
int label_components(const Lattice& lattice, const std::vector<std::uint8_t>& cells, std::vector<int>& labels);

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

double lp_norm(const TFGrid& g, const DomainMask& mask, double p);

enum class GradientMode { finite_difference, spectral };
std::pair<TFGrid, TFGrid> gradient(const TFGrid& g, GradientMode mode = GradientMode::finite_difference);
// Pointwise sqrt(|g_x|^2 + |g_y|^2).
std::vector<double> gradient_norm(const TFGrid& g);

double w1p_norm(const TFGrid& g, const DomainMask& mask, double p);

// Boundary arc length assigned to each cell, from marching squares on a
// lightly smoothed indicator of the mask.
std::vector<double> perimeter_weights(const DomainMask& mask);
double perimeter(const DomainMask& mask);
double boundary_norm(const TFGrid& g, const DomainMask& mask, double p);

// Euclidean distance from each mask cell centre to the nearest boundary cell
// centre; 0 outside the mask.
TFGrid distance_transform(const DomainMask& mask);

}  // namespace atollpr
