#include <doctest.h>

#include <cmath>
#include <random>

#include "atollpr/alignment.hpp"
#include "atollpr/error.hpp"
#include "helpers.hpp"

using namespace atollpr;
using testing::centred;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an atollpr::Error");
  return ErrorKind::io;
}

// Two Gaussian bumps with smooth complex phases, well separated.
TFGrid two_bumps(const Lattice& lat, double w2 = 0.8) {
  return TFGrid::sample(lat, [w2](cd z) {
    const cd a = std::exp(-M_PI * std::norm(z - cd(-2.0, 0.0)) / 2.0) * std::exp(cd(0.0, 0.7 * z.real()));
    const cd b = w2 * std::exp(-M_PI * std::norm(z - cd(2.0, 0.5)) / 2.0) * std::exp(cd(0.0, -0.4 * z.imag()));
    return a + b;
  });
}

double grid_search(const TFGrid& F, const TFGrid& G, const DomainMask& m, int n) {
  double best = INFINITY;
  for (int k = 0; k < n; ++k) best = std::min(best, residual_at(F, G, m, -M_PI + 2.0 * M_PI * (k + 1) / n));
  return best;
}

}  // namespace

TEST_CASE("align_component examples") {
  std::mt19937_64 rng(61);
  const Lattice lat = centred(cd{}, 0.1, 12);
  const DomainMask all = DomainMask::full(lat);
  const TFGrid F = testing::random_grid(lat, rng);
  const ComponentAlignment same = align_component(F, F, all);
  CHECK(same.alpha == 0.0);
  CHECK(same.residual < 1e-12);

  // ||F - e^{i alpha} G|| vanishes at alpha = +pi/3 for G = e^{-i pi/3} F.
  const ComponentAlignment rot = align_component(F, scaled(F, std::polar(1.0, -M_PI / 3.0)), all);
  CHECK(rot.alpha == doctest::Approx(M_PI / 3.0).epsilon(1e-14));
  CHECK(rot.residual < 1e-12);

  const ComponentAlignment zero = align_component(F, TFGrid::zeros(lat), all);
  CHECK(zero.alpha == 0.0);
  CHECK(zero.residual == doctest::Approx(lp_norm(F, all, 2.0)).epsilon(1e-14));

  CHECK(kind_of([&] { align_component(F, TFGrid::zeros(centred(cd{}, 0.1, 11)), all); }) == ErrorKind::structural);
  CHECK(wrap_phase(M_PI) == M_PI);
  CHECK(wrap_phase(-M_PI) == M_PI);
  CHECK(wrap_phase(3.0 * M_PI / 2.0) == doctest::Approx(-M_PI / 2.0));
}

TEST_CASE("closed-form alignment matches a grid search") {
  std::mt19937_64 rng(62);
  const Lattice lat = centred(cd{}, 0.1, 6);
  const DomainMask m = rasterize(Disc{cd{}, 0.5}, lat);
  for (int trial = 0; trial < 10; ++trial) {
    const TFGrid F = testing::random_grid(lat, rng), G = testing::random_grid(lat, rng);
    const ComponentAlignment a = align_component(F, G, m);
    const double brute = grid_search(F, G, m, 100000);
    CHECK(a.residual <= brute + 1e-10);
    CHECK(brute - a.residual < 1e-8);
    CHECK(residual_at(F, G, m, a.alpha) == doctest::Approx(a.residual).epsilon(1e-10));
  }
}

TEST_CASE("alignment residual is invariant under a common global phase") {
  std::mt19937_64 rng(63);
  const Lattice lat = centred(cd{}, 0.1, 8);
  const DomainMask all = DomainMask::full(lat);
  const TFGrid F = testing::random_grid(lat, rng), G = testing::random_grid(lat, rng);
  const double r = align_component(F, G, all).residual;
  for (double g : {0.4, 2.2, -1.3}) {
    const cd u = std::polar(1.0, g);
    CHECK(align_component(scaled(F, u), scaled(G, u), all).residual == doctest::Approx(r).epsilon(1e-13));
  }
}

TEST_CASE("scramble_phases examples") {
  const Lattice lat = centred(cd{}, 0.05, 80);
  const TFGrid F = two_bumps(lat);
  const AtollDecomposition dec = segment(magnitude(F), 0.05);
  REQUIRE(dec.size() == 2);

  CHECK(scramble_phases(F, dec, {0.0, 0.0}).values() == F.values());

  const TFGrid G = scramble_phases(F, dec, {0.0, M_PI});
  for (std::size_t k = 0; k < F.size(); ++k) {
    if (dec.owner[k] >= 0) CHECK(std::abs(G[k]) == std::abs(F[k]));
    else CHECK(G[k] == F[k]);
  }
  CHECK(kind_of([&] { scramble_phases(F, dec, {0.0}); }) == ErrorKind::structural);
}

TEST_CASE("scramble then align recovers the phases") {
  const Lattice lat = centred(cd{}, 0.05, 80);
  const TFGrid F = two_bumps(lat);
  const AtollDecomposition dec = segment(magnitude(F), 0.05);
  REQUIRE(dec.size() == 2);
  std::mt19937_64 rng(64);
  std::uniform_real_distribution<double> u(-M_PI, M_PI);
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<double> alphas{u(rng), u(rng)};
    const TFGrid G = scramble_phases(F, dec, alphas);
    const PhaseAlignmentReport rep = align_decomposition(G, F, dec);
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(std::abs(wrap_phase(rep.components[j].alpha - alphas[j])) < 1e-10);
      CHECK(rep.components[j].residual < 1e-10);
    }
  }
}

TEST_CASE("two-phase mixtures are globally far but component-wise equivalent") {
  const Lattice lat = centred(cd{}, 0.05, 80);
  const TFGrid F = two_bumps(lat);
  const AtollDecomposition dec = segment(magnitude(F), 0.05);
  REQUIRE(dec.size() == 2);
  const TFGrid G = scramble_phases(F, dec, {0.0, M_PI / 2.0});
  const PhaseAlignmentReport rep = align_decomposition(F, G, dec);
  const double n1 = lp_norm(F, dec.owned(0), 2.0), n2 = lp_norm(F, dec.owned(1), 2.0);
  CHECK(rep.global.residual >= 0.7 * std::min(n1, n2));
  CHECK(rep.measurement_residual == 0.0);
  CHECK(rep.component_sum() < 1e-10);
  CHECK(rep.ratio > 1e8);
}

TEST_CASE("component residuals against the global residual") {
  // Each residual_j is at most the global residual restricted to D_j, so the
  // l2 combination is bounded by the global residual. The plain sum is not:
  // it can reach sqrt(k) times the global value.
  std::mt19937_64 rng(65);
  const Lattice lat = centred(cd{}, 0.05, 80);
  const TFGrid F = two_bumps(lat);
  const AtollDecomposition dec = segment(magnitude(F), 0.05);
  REQUIRE(dec.size() == 2);
  int sum_exceeds = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const TFGrid G = add(F, scaled(testing::random_grid(lat, rng), 0.05));
    const PhaseAlignmentReport rep = align_decomposition(F, G, dec);
    double sq = 0.0;
    for (const auto& c : rep.components) sq += c.residual * c.residual;
    CHECK(std::sqrt(sq) <= rep.global.residual + 1e-12);
    CHECK(rep.component_sum() <= std::sqrt(2.0) * rep.global.residual + 1e-12);
    if (rep.component_sum() > rep.global.residual) ++sum_exceeds;
    CHECK(rep.measurement_residual > 0.0);
  }
  CHECK(sum_exceeds > 0);
  // With all the mismatch in one component the plain sum is bounded too.
  const TFGrid G = scramble_phases(F, dec, {0.0, 0.3});
  const PhaseAlignmentReport rep = align_decomposition(F, G, dec);
  CHECK(rep.component_sum() <= rep.global.residual + 1e-12);
}

TEST_CASE("a single component reduces to global alignment") {
  const Lattice lat = centred(cd{}, 0.05, 40);
  const TFGrid F = TFGrid::sample(lat, [](cd z) { return std::exp(-M_PI * std::norm(z) / 2.0) * std::exp(cd(0.0, z.real())); });
  const AtollDecomposition dec = segment(magnitude(F), 0.05);
  REQUIRE(dec.size() == 1);
  std::mt19937_64 rng(66);
  const TFGrid G = add(scaled(F, std::polar(1.0, 0.3)), scaled(testing::random_grid(lat, rng), 0.01));
  const PhaseAlignmentReport rep = align_decomposition(F, G, dec);
  CHECK(rep.ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.global.alpha == doctest::Approx(rep.components[0].alpha).epsilon(1e-12));
}
