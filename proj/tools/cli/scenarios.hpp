#pragma once

#include "atollpr/transforms.hpp"

namespace atollpr::cli {

// Two Gaussian atoms at (-3, 3.5) and (3, 2.5) in the time-frequency plane,
// on a full-band lattice so the retrieval measurement is consistent.
struct TwoAtomScenario {
  Lattice lattice;
  Signal f;
};

inline TwoAtomScenario two_atom_scenario() {
  const Lattice lat = GaborSpec{-8.0, 8.0, -6.0, 5.75, 0.25, 0.25}.lattice();
  const TimeAxis ax = default_time_axis(lat);
  Signal f = Signal::sample(ax.n, ax.sample_rate, ax.t0, [](double t) {
    return window(t + 3.0) * std::exp(cd(0.0, 2.0 * M_PI * 3.5 * t)) +
           window(t - 3.0) * std::exp(cd(0.0, 2.0 * M_PI * 2.5 * t));
  });
  return {lat, std::move(f)};
}

}  // namespace atollpr::cli
