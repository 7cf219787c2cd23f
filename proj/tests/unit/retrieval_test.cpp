#include <doctest.h>

#include <cmath>
#include <random>

#include "atollpr/alignment.hpp"
#include "atollpr/error.hpp"
#include "atollpr/retrieval.hpp"
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

struct Problem {
  Lattice lattice;
  Signal f;
  TFGrid F;
};

// Atoms given as (time, frequency); samples live on retrieval_time_axis.
Problem atoms_problem(const GaborSpec& spec, const std::vector<std::pair<double, double>>& atoms) {
  const Lattice lat = spec.lattice();
  const TimeAxis ax = retrieval_time_axis(lat);
  Signal f = Signal::sample(ax.n, ax.sample_rate, ax.t0, [&](double t) {
    cd s{};
    for (const auto& [a, b] : atoms) s += window(t - a) * std::exp(cd(0.0, 2.0 * M_PI * b * t));
    return s;
  });
  TFGrid F = gabor_forward(f, lat);
  return {lat, std::move(f), std::move(F)};
}

double rel_diff(const std::vector<cd>& a, const std::vector<cd>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    num += std::norm(a[k] - b[k]);
    den += std::norm(b[k]);
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("zero magnitude gives a zero signal") {
  const Lattice lat = GaborSpec{-2.0, 2.0, -2.0, 1.75, 0.25, 0.25}.lattice();
  const RetrievalResult r = retrieve(magnitude(TFGrid::zeros(lat)), 50, 1);
  CHECK(r.measurement_residual_rel == 0.0);
  CHECK(r.iterations == 0);
  for (std::size_t k = 0; k < r.f_rec.size(); ++k) CHECK(r.f_rec[k] == cd{});
  for (std::size_t k = 0; k < r.F_rec.size(); ++k) CHECK(r.F_rec[k] == cd{});
}

TEST_CASE("a single atom is recovered up to a global phase") {
  const Problem p = atoms_problem(GaborSpec{-4.0, 4.0, -4.0, 3.75, 0.25, 0.25}, {{0.3, 0.5}});
  const RetrievalResult r = retrieve(magnitude(p.F), 500, 7, GroundTruth{p.f});
  CHECK(r.measurement_residual_rel < 1e-3);
  REQUIRE(r.time_residual_rel);
  CHECK(*r.time_residual_rel < 5e-2);
  const ComponentAlignment a = align_component(p.F, r.F_rec, DomainMask::full(p.lattice));
  CHECK(a.residual / lp_norm(p.F, DomainMask::full(p.lattice), 2.0) < 5e-2);

  REQUIRE(r.phase_map);
  CHECK(r.phase_map->lattice().nx == p.lattice.nx);
  CHECK(r.residual_log.size() == static_cast<std::size_t>(r.iterations));
  for (std::size_t k = 1; k < r.residual_log.size(); ++k) CHECK(r.residual_log[k] <= r.residual_log[k - 1] * (1.0 + 1e-12));
}

TEST_CASE("retrieval is deterministic for a fixed seed") {
  const Problem p = atoms_problem(GaborSpec{-4.0, 4.0, -4.0, 3.75, 0.25, 0.25}, {{-1.0, 1.0}, {1.0, -1.0}});
  const RetrievalResult a = retrieve(magnitude(p.F), 40, 11), b = retrieve(magnitude(p.F), 40, 11);
  CHECK(a.F_rec.values() == b.F_rec.values());
  CHECK(a.residual_log == b.residual_log);
}

TEST_CASE("projection onto the Gabor range is idempotent") {
  // A retrieval iterate (measured magnitude, random phase), then white noise.
  const Problem p = atoms_problem(GaborSpec{-4.0, 4.0, -4.0, 3.75, 0.25, 0.25}, {{-1.0, 1.0}, {1.0, -1.0}});
  const Lattice lat = full_band_lattice(p.lattice);
  const GaborFrame frame(lat, retrieval_time_axis(p.lattice));
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(-M_PI, M_PI);
  std::vector<cd> X(lat.size());
  for (int j = 0; j < p.lattice.ny; ++j)
    for (int i = 0; i < p.lattice.nx; ++i) X[lat.index(i, j)] = std::polar(std::abs(p.F(i, j)), u(rng));
  const std::vector<cd> P1 = frame.analysis(frame.pseudo_inverse(X));
  const std::vector<cd> P2 = frame.analysis(frame.pseudo_inverse(P1));
  CHECK(rel_diff(P2, P1) < 1e-10);

  const TFGrid R = testing::random_grid(lat, rng);
  const std::vector<cd> Q1 = frame.analysis(frame.pseudo_inverse(R.values()));
  const std::vector<cd> Q2 = frame.analysis(frame.pseudo_inverse(Q1));
  CHECK(rel_diff(Q2, Q1) < 1e-10);
}

TEST_CASE("diagnose_phases examples") {
  const Problem p = atoms_problem(GaborSpec{-8.0, 8.0, -4.0, 3.75, 0.25, 0.25}, {{-3.0, 2.5}, {3.0, 1.5}});
  const AtollDecomposition dec = segment(magnitude(p.F), 0.05 * p.F.max_abs());
  REQUIRE(dec.size() == 2);

  for (const PhaseDiagnosis& d : diagnose_phases(p.F, p.F, dec)) {
    CHECK(std::abs(d.mean_phase) < 1e-15);
    CHECK(d.circular_std < 1e-10);
    CHECK(d.cells > 0);
  }

  // arg(F_true / F_rec) is the inverse of the applied rotation.
  const std::vector<double> alphas{0.9, -2.1};
  const auto diag = diagnose_phases(p.F, scramble_phases(p.F, dec, alphas), dec);
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(std::abs(wrap_phase(diag[j].mean_phase + alphas[j])) < 1e-10);
    CHECK(diag[j].circular_std < 1e-10);
    CHECK_FALSE(diag[j].degenerate);
  }

  // A floor above every cell leaves no qualifying cells.
  for (const PhaseDiagnosis& d : diagnose_phases(p.F, p.F, dec, 2.0)) CHECK(d.degenerate);
  CHECK(kind_of([&] { diagnose_phases(p.F, p.F, dec, 0.0); }) == ErrorKind::precondition);
}

TEST_CASE("two separated components are recovered component-wise") {
  const Problem p = atoms_problem(GaborSpec{-8.0, 8.0, -4.0, 3.75, 0.25, 0.25}, {{-3.0, 2.5}, {3.0, 1.5}});
  const AtollDecomposition dec = segment(magnitude(p.F), 0.05 * p.F.max_abs());
  REQUIRE(dec.size() == 2);
  int split = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const RetrievalResult r = retrieve(magnitude(p.F), 500, seed, GroundTruth{p.f});
    CHECK(r.measurement_residual_rel < 1e-3);
    const PhaseAlignmentReport rep = align_decomposition(p.F, r.F_rec, dec);
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(rep.components[j].residual / lp_norm(p.F, dec.owned(j), 2.0) < 5e-2);
    for (const PhaseDiagnosis& d : diagnose_phases(p.F, r.F_rec, dec)) CHECK(d.circular_std < 0.1);
    if (*r.time_residual_rel > 0.1) ++split;
  }
  CHECK(split > 0);
}

TEST_CASE("retrieve preconditions") {
  const Lattice sparse = GaborSpec{-2.0, 2.0, -2.0, 1.0, 1.0, 2.0}.lattice();
  CHECK(kind_of([&] { retrieve(magnitude(TFGrid::zeros(sparse)), 10, 1); }) == ErrorKind::domain);
  const Lattice lat = GaborSpec{-2.0, 2.0, -2.0, 1.75, 0.25, 0.25}.lattice();
  std::vector<cd> v(lat.size());
  v[3] = cd(-1.0);
  CHECK(kind_of([&] { retrieve(TFGrid(lat, v), 10, 1); }) == ErrorKind::precondition);
  v[3] = cd(0.0, 1.0);
  CHECK(kind_of([&] { retrieve(TFGrid(lat, v), 10, 1); }) == ErrorKind::precondition);
  CHECK(kind_of([&] { retrieve(TFGrid::zeros(lat), -1, 1); }) == ErrorKind::precondition);
  const Problem p = atoms_problem(GaborSpec{-2.0, 2.0, -2.0, 1.75, 0.25, 0.25}, {{0.0, 0.0}});
  const Signal wrong(std::vector<cd>(p.f.size() + 1), p.f.sample_rate(), p.f.t0());
  CHECK(kind_of([&] { retrieve(magnitude(p.F), 5, 1, GroundTruth{wrong}); }) == ErrorKind::structural);
}
