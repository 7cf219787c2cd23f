#pragma once

#include <optional>
#include <variant>

#include "atollpr/grid.hpp"

namespace atollpr {

struct NoNormalizer {};

// eta(z) = exp(pi (|z - z0|^2 / 2 - i (x + x0)(y - y0))). Applies to the
// y-flipped Gabor grid F(z) = V f(x, -y). An unset base means "centre of the
// lagoon" inside certificates and 0 elsewhere.
struct GaborNormalizer {
  std::optional<cd> z0;
};

// eta(z) = |1/y|^(s + 1/2), y != 0.
struct CauchyNormalizer {
  int order = 1;
};

using Normalizer = std::variant<NoNormalizer, GaborNormalizer, CauchyNormalizer>;

const char* normalizer_name(const Normalizer& eta);
cd eta_value(const Normalizer& eta, cd z);
double eta_modulus(const Normalizer& eta, cd z);

TFGrid normalize(const TFGrid& F, const Normalizer& eta);

// max_interior |(u_x - v_y, u_y + v_x)| / max_interior |DG|_F, central
// differences; 0 for a constant field. Invariant under G -> e^{ia} G.
double cr_residual(const TFGrid& G);

// max | |G'| - |grad |G|| | / max |G'| over cells two or more from the edge
// with |G| >= floor * max |G|, where G' = u_x + i v_x and grad |G| follows from
// the same partials by the chain rule. Fourth-order central differences.
double verify_key_lemma(const TFGrid& G, double floor = 1e-3);

}  // namespace atollpr
