#pragma once

#include <optional>
#include <vector>

#include "atollpr/grid.hpp"

namespace atollpr {

struct ShapeFit {
  ParamDomain domain;
  double residual = 0.0;  // max |distance - radius| over fitted boundary points
};

struct AtollComponent {
  DomainMask D;                   // atoll with lagoons filled
  std::vector<DomainMask> lagoons;
  DomainMask D_plus;              // D minus lagoons
  double delta = 0.0;             // min |F| on D_plus
  double Delta = 0.0;             // max(|F|, |grad |F||) on D
  double epsilon = 0.0;           // L2 norm of |F| outside D
  int parent = -1;                // enclosing component for nested atolls
  ShapeFit shape;
};

struct AtollDecomposition {
  Lattice lattice;
  double threshold = 0.0;
  std::vector<AtollComponent> components;
  // Innermost component whose D contains the cell, or -1.
  std::vector<int> owner;

  std::size_t size() const { return components.size(); }
  DomainMask owned(std::size_t j) const;
  DomainMask union_D() const;
  DomainMask union_D_plus() const;
  bool has_nesting() const;
};

// Default minimum component area: nine cells.
double default_min_area(const Lattice& lattice);

AtollDecomposition segment(const TFGrid& magnitude, double delta, std::optional<double> min_area = std::nullopt);

double s_t(const DomainMask& mask, double t);

// L2 norm of F over lattice minus mask.
double concentration(const TFGrid& F, const DomainMask& mask);

// Disc for lagoon-free atolls, concentric annulus for a single lagoon, Raster
// of D_plus otherwise or when the fit residual exceeds 10% of a radius.
ShapeFit fit_param_domain(const AtollComponent& component);
// Disc fit of a simply connected mask, Raster fallback.
ShapeFit fit_disc(const DomainMask& mask);

}  // namespace atollpr
