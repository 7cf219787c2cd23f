#pragma once

#include <vector>

#include "atollpr/atoll.hpp"
#include "atollpr/grid.hpp"

namespace atollpr {

struct ComponentAlignment {
  double alpha = 0.0;     // in (-pi, pi]
  double residual = 0.0;  // ||F - e^{i alpha} G||_{L2(mask)}
  bool degenerate = false;
};

struct PhaseAlignmentReport {
  std::vector<ComponentAlignment> components;
  ComponentAlignment global;          // over the union of the D_j
  double measurement_residual = 0.0;  // || |F| - |G| ||_{W^{1,2}(union D_plus)}
  double ratio = 0.0;                 // global residual / sum of component residuals
  double component_sum() const;
};

// Wraps to (-pi, pi].
double wrap_phase(double a);

// Minimizes ||F - e^{i alpha} G|| over the mask: alpha = arg <F, G>.
ComponentAlignment align_component(const TFGrid& F, const TFGrid& G, const DomainMask& mask);
double residual_at(const TFGrid& F, const TFGrid& G, const DomainMask& mask, double alpha);

PhaseAlignmentReport align_decomposition(const TFGrid& F, const TFGrid& G, const AtollDecomposition& dec);

// Multiplies the cells owned by component j by e^{i alpha_j}.
TFGrid scramble_phases(const TFGrid& F, const AtollDecomposition& dec, const std::vector<double>& alphas);

}  // namespace atollpr
