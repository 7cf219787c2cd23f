#pragma once

#include <cmath>
#include <random>

#include "atollpr/grid.hpp"
#include "atollpr/transforms.hpp"

namespace testing {

using atollpr::cd;

// Symmetric lattice of half-width `half` cells around c.
inline atollpr::Lattice centred(cd c, double h, int half) {
  atollpr::Lattice lat;
  lat.dx = lat.dy = h;
  lat.nx = lat.ny = 2 * half + 1;
  lat.origin_x = c.real() - half * h;
  lat.origin_y = c.imag() - half * h;
  return lat;
}

inline atollpr::TFGrid random_grid(const atollpr::Lattice& lat, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<cd> v(lat.size());
  for (auto& x : v) x = cd(n(rng), n(rng));
  return atollpr::TFGrid(lat, std::move(v));
}

struct Atom {
  double a, b;
  cd c;
};

inline std::vector<Atom> random_atoms(std::mt19937_64& rng, int n, double spread_a, double spread_b, double centre_b = 0.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Atom> out;
  for (int k = 0; k < n; ++k) out.push_back({spread_a * u(rng), centre_b + spread_b * u(rng), cd(u(rng), u(rng))});
  return out;
}

inline cd atoms_at(const std::vector<Atom>& atoms, double t) {
  cd s{};
  for (const auto& q : atoms) s += q.c * atollpr::window(t - q.a) * std::exp(cd(0.0, 2.0 * M_PI * q.b * t));
  return s;
}

inline atollpr::Signal atoms_signal(const std::vector<Atom>& atoms, const atollpr::TimeAxis& ax) {
  return atollpr::Signal::sample(ax.n, ax.sample_rate, ax.t0, [&](double t) { return atoms_at(atoms, t); });
}

}  // namespace testing
