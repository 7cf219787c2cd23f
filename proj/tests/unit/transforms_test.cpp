#include <doctest.h>

#include <cmath>
#include <random>

#include "atollpr/error.hpp"
#include "atollpr/transforms.hpp"
#include "helpers.hpp"

using namespace atollpr;

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

double max_rel_error(const TFGrid& a, const TFGrid& b) {
  double e = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) e = std::max(e, std::abs(a[k] - b[k]));
  return e / b.max_abs();
}

double rel_l2(const Signal& a, const Signal& b) {
  double d = 0.0, n = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    d += std::norm(a[k] - b[k]);
    n += std::norm(b[k]);
  }
  return std::sqrt(d / n);
}

Signal on_axis(const Lattice& lat, auto&& fn) {
  const TimeAxis ax = default_time_axis(lat);
  return Signal::sample(ax.n, ax.sample_rate, ax.t0, fn);
}

// 16 samples per unit: shifts by multiples of 1/16 stay on the sample grid and
// atoms up to |b| ~ 5 are resolved.
Signal on_fine_axis(const Lattice& lat, auto&& fn) {
  const double t0 = lat.origin_x - kWindowRadius;
  const auto n = static_cast<std::size_t>(std::ceil((lat.x_max() + kWindowRadius - t0) * 16.0)) + 1;
  return Signal::sample(n, 16.0, t0, fn);
}

}  // namespace

TEST_CASE("Gabor transform of the window has the Gaussian closed form") {
  const GaborSpec spec{-2.0, 2.0, -2.0, 2.0, 0.05, 0.05};
  const Lattice lat = spec.lattice();
  const Signal f = on_fine_axis(lat, [](double t) { return cd(window(t)); });
  const TFGrid V = gabor_forward(f, spec);
  const TFGrid ref = TFGrid::sample(lat, [](cd z) {
    const double x = z.real(), y = z.imag();
    return std::exp(cd(-M_PI * (x * x + y * y) / 2.0, -M_PI * x * y)) / std::sqrt(2.0);
  });
  CHECK(max_rel_error(V, ref) < 1e-6);
}

TEST_CASE("Gabor transform of a modulated atom matches direct quadrature") {
  // Independent oracle: brute-force Riemann sum at a few cells.
  const GaborSpec spec{-1.0, 1.0, 0.0, 3.0, 0.25, 0.25};
  const Lattice lat = spec.lattice();
  auto f_at = [](double t) { return window(t - 0.3) * std::exp(cd(0.0, 2.0 * M_PI * 1.7 * t)) * cd(0.6, -0.8); };
  const Signal f = on_axis(lat, f_at);
  const TFGrid V = gabor_forward(f, spec);
  for (std::size_t k : {std::size_t{0}, lat.size() / 3, lat.size() / 2, lat.size() - 1}) {
    const double x = lat.z(k).real(), y = lat.z(k).imag();
    cd acc{};
    for (std::size_t n = 0; n < f.size(); ++n) {
      const double t = f.time(n);
      acc += f[n] * window(t - x) * std::exp(cd(0.0, -2.0 * M_PI * t * y));
    }
    acc /= f.sample_rate();
    CHECK(std::abs(V[k] - acc) < 1e-12);
  }
}

TEST_CASE("zero signals and zero grids") {
  const Lattice lat = make_lattice(-1.0, 1.0, -1.0, 1.0, 0.25, 0.25);
  const Signal zero = on_axis(lat, [](double) { return cd{}; });
  CHECK(gabor_forward(zero, lat).max_abs() == 0.0);
  const Signal back = gabor_inverse(TFGrid::zeros(lat));
  for (const cd& v : back.samples()) CHECK(v == cd{});
}

TEST_CASE("gabor_forward preconditions") {
  const Lattice lat = make_lattice(-1.0, 1.0, -1.0, 1.0, 0.25, 0.25);
  const Signal short_sig = Signal::sample(64, 16.0, -1.0, [](double t) { return cd(window(t)); });
  CHECK(kind_of([&] { gabor_forward(short_sig, lat); }) == ErrorKind::domain);
  CHECK_NOTHROW(gabor_forward(short_sig, lat, GaborOptions{true}));
  const Lattice wide = make_lattice(-1.0, 1.0, -20.0, 20.0, 0.25, 0.25);
  const Signal f = on_axis(lat, [](double t) { return cd(window(t)); });
  CHECK(kind_of([&] { gabor_forward(f, wide); }) == ErrorKind::domain);
  const Lattice sparse = make_lattice(-1.0, 1.0, -1.0, 1.0, 1.0, 1.5);
  CHECK(kind_of([&] { gabor_inverse(TFGrid::zeros(sparse)); }) == ErrorKind::domain);
}

TEST_CASE("time-shift covariance") {
  std::mt19937_64 rng(21);
  const double a = 0.75;  // three cells
  const Lattice lat = make_lattice(-4.0, 4.0, -3.0, 3.0, 0.25, 0.25);
  for (int trial = 0; trial < 5; ++trial) {
    const auto atoms = testing::random_atoms(rng, 3, 1.5, 1.5);
    const Signal f = on_fine_axis(lat, [&](double t) { return testing::atoms_at(atoms, t); });
    const Signal g = on_fine_axis(lat, [&](double t) { return testing::atoms_at(atoms, t - a); });
    const TFGrid Vf = gabor_forward(f, lat), Vg = gabor_forward(g, lat);
    const int s = 3;
    double err = 0.0;
    for (int j = 0; j < lat.ny; ++j)
      for (int i = s; i < lat.nx; ++i) {
        const cd expect = std::exp(cd(0.0, -2.0 * M_PI * a * lat.y(j))) * Vf(i - s, j);
        err = std::max(err, std::abs(Vg(i, j) - expect));
      }
    CHECK(err < 1e-8);
  }
}

TEST_CASE("modulation covariance") {
  std::mt19937_64 rng(22);
  const double b = 0.5;  // two rows
  const Lattice lat = make_lattice(-4.0, 4.0, -3.0, 3.0, 0.25, 0.25);
  const auto atoms = testing::random_atoms(rng, 3, 1.5, 1.0);
  const Signal f = on_fine_axis(lat, [&](double t) { return testing::atoms_at(atoms, t); });
  const Signal g = on_fine_axis(lat, [&](double t) { return std::exp(cd(0.0, 2.0 * M_PI * b * t)) * testing::atoms_at(atoms, t); });
  const TFGrid Vf = gabor_forward(f, lat), Vg = gabor_forward(g, lat);
  double err = 0.0;
  for (int j = 2; j < lat.ny; ++j)
    for (int i = 0; i < lat.nx; ++i) err = std::max(err, std::abs(Vg(i, j) - Vf(i, j - 2)));
  CHECK(err < 1e-8);
}

TEST_CASE("linearity") {
  std::mt19937_64 rng(23);
  const Lattice lat = make_lattice(-3.0, 3.0, -2.0, 2.0, 0.25, 0.25);
  const auto A = testing::random_atoms(rng, 2, 1.0, 1.0), B = testing::random_atoms(rng, 2, 1.0, 1.0);
  const cd a(0.3, 1.1), b(-2.0, 0.4);
  const Signal f = on_axis(lat, [&](double t) { return testing::atoms_at(A, t); });
  const Signal g = on_axis(lat, [&](double t) { return testing::atoms_at(B, t); });
  const Signal h = on_axis(lat, [&](double t) { return a * testing::atoms_at(A, t) + b * testing::atoms_at(B, t); });
  const TFGrid lhs = gabor_forward(h, lat);
  const TFGrid rhs = add(scaled(gabor_forward(f, lat), a), scaled(gabor_forward(g, lat), b));
  CHECK(max_rel_error(lhs, rhs) < 1e-12);
}

TEST_CASE("round trip and discrete isometry") {
  std::mt19937_64 rng(24);
  for (double h : {0.25, 0.125}) {
    const Lattice lat = make_lattice(-5.0, 5.0, -4.0, 4.0, h, h);
    const auto atoms = testing::random_atoms(rng, 4, 2.5, 2.0);
    const Signal f = on_axis(lat, [&](double t) { return testing::atoms_at(atoms, t); });
    const TFGrid V = gabor_forward(f, lat);
    const Signal back = gabor_inverse(V, default_time_axis(lat));
    CHECK(rel_l2(back, f) < 1e-6);
    CHECK(back.norm() / f.norm() == doctest::Approx(1.0).epsilon(1e-6));
    // phi is not unit-normalised: ||V f|| = ||phi|| ||f|| = 2^(-1/4) ||f||.
    const double grid_norm = lp_norm(V, DomainMask::full(lat), 2.0);
    CHECK(grid_norm / f.norm() / std::pow(2.0, -0.25) == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("frame pseudo-inverse is a left inverse on the full band") {
  std::mt19937_64 rng(25);
  const Lattice lat = full_band_lattice(make_lattice(-3.0, 3.0, -2.0, 2.0, 0.25, 0.25));
  const TimeAxis ax = default_time_axis(lat);
  const GaborFrame frame(lat, ax);
  CHECK(ax.sample_rate == doctest::Approx(lat.ny * lat.dy));
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<cd> f(ax.n);
  // Random samples away from the axis ends, where the window energy is floored.
  for (std::size_t k = 0; k < ax.n; ++k) {
    const double t = ax.t0 + static_cast<double>(k) / ax.sample_rate;
    if (std::abs(t) < 3.0) f[k] = cd(n(rng), n(rng));
  }
  const auto back = frame.pseudo_inverse(frame.analysis(f));
  double err = 0.0, nrm = 0.0, tail = 0.0;
  for (std::size_t k = 0; k < ax.n; ++k) {
    const double t = ax.t0 + static_cast<double>(k) / ax.sample_rate;
    // Beyond the columns w(t) is tiny and division amplifies window aliasing.
    if (std::abs(t) <= 3.0) err += std::norm(back[k] - f[k]);
    else tail += std::norm(back[k] - f[k]);
    nrm += std::norm(f[k]);
  }
  CHECK(std::sqrt(err / nrm) < 1e-9);
  CHECK(std::sqrt(tail / nrm) < 1e-5);
}

TEST_CASE("Cauchy transform of the exponential spectrum has a closed form") {
  const double fs = 16.0;
  // The Riemann sum in frequency is second order for s = 1.
  const std::size_t n = std::size_t{1} << 18;
  const double T = static_cast<double>(n) / fs;
  std::vector<cd> S(n, cd{});
  for (std::size_t m = 1; 2 * m < n; ++m) S[m] = std::exp(-2.0 * M_PI * static_cast<double>(m) / T);
  const Signal f = from_spectrum(S, fs, -T / 2.0);
  for (int s : {1, 2, 3}) {
    const CauchySpec spec{s, -2.0, 2.0, 0.25, 2.0, 0.0625, 0.125};
    const TFGrid W = cauchy_forward(f, spec);
    const TFGrid ref = TFGrid::sample(spec.lattice(), [s](cd z) {
      const double x = z.real(), y = z.imag();
      return std::pow(y, s + 0.5) * std::tgamma(s + 1.0) / std::pow(2.0 * M_PI * cd(1.0 + y, -x), s + 1);
    });
    CHECK(max_rel_error(W, ref) < 1e-6);
  }
}

TEST_CASE("Cauchy transform scaling covariance") {
  std::mt19937_64 rng(26);
  std::vector<testing::Atom> atoms = testing::random_atoms(rng, 3, 2.0, 0.5, 5.0);
  const double lambda = 2.0, fs = 32.0;
  const std::size_t n = 4096;
  const double t0 = -64.0;
  const Signal f = Signal::sample(n, fs, t0, [&](double t) { return testing::atoms_at(atoms, t); });
  const Signal g = Signal::sample(n, fs, t0, [&](double t) { return testing::atoms_at(atoms, t / lambda); });
  const Signal fa = analytic_part(f), ga = analytic_part(g);
  const CauchySpec big{2, -4.0, 4.0, 0.5, 2.0, 0.25, 0.25};
  const CauchySpec small{2, -2.0, 2.0, 0.25, 1.0, 0.125, 0.125};
  const TFGrid Wg = cauchy_forward(ga, big), Wf = cauchy_forward(fa, small);
  double err = 0.0;
  for (std::size_t k = 0; k < Wg.size(); ++k) err = std::max(err, std::abs(Wg[k] - std::sqrt(lambda) * Wf[k]));
  CHECK(err / Wg.max_abs() < 1e-7);
}

TEST_CASE("Cauchy preconditions") {
  const Signal real = Signal::sample(256, 16.0, -8.0, [](double t) { return cd(std::cos(2.0 * M_PI * t) * window(t / 3.0)); });
  CHECK(kind_of([&] { cauchy_forward(real, CauchySpec{1, -1.0, 1.0, 0.5, 1.0, 0.25, 0.25}); }) == ErrorKind::precondition);
  const Signal an = analytic_part(real);
  CHECK(kind_of([&] { cauchy_forward(an, CauchySpec{1, -1.0, 1.0, 0.0, 1.0, 0.25, 0.25}); }) == ErrorKind::domain);
  CHECK(kind_of([&] { cauchy_forward(an, CauchySpec{0, -1.0, 1.0, 0.5, 1.0, 0.25, 0.25}); }) == ErrorKind::precondition);
  CHECK(cauchy_forward(Signal(std::vector<cd>(256), 16.0, -8.0), CauchySpec{1, -1.0, 1.0, 0.5, 1.0, 0.25, 0.25}).max_abs() == 0.0);
}

TEST_CASE("analytic part examples") {
  const Signal c = Signal::sample(400, 20.0, 0.0, [](double t) { return cd(std::cos(2.0 * M_PI * t)); });
  const Signal ca = analytic_part(c);
  double err = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) err = std::max(err, std::abs(ca[k] - 0.5 * std::exp(cd(0.0, 2.0 * M_PI * c.time(k)))));
  CHECK(err < 1e-10);

  std::mt19937_64 rng(27);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<double> r(257);
  for (auto& v : r) v = nd(rng);
  const Signal rs(r, 8.0);
  const Signal ra = analytic_part(rs);
  double mean = 0.0;
  for (double v : r) mean += v;
  mean /= static_cast<double>(r.size());
  // DC is halved, so 2 Re(f_a) keeps the mean as well.
  err = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) err = std::max(err, std::abs(2.0 * ra[k].real() - r[k]));
  CHECK(err < 1e-10);
  CHECK(std::abs(mean) > 1e-3);

  const Signal twice = analytic_part(ca);
  err = 0.0;
  for (std::size_t k = 0; k < ca.size(); ++k) err = std::max(err, std::abs(twice[k] - ca[k]));
  CHECK(err < 1e-12);
  CHECK(negative_frequency_fraction(ca) < 1e-20);
  CHECK(negative_frequency_fraction(c) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("spectrum round trip") {
  std::mt19937_64 rng(28);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<cd> v(97);
  for (auto& x : v) x = cd(nd(rng), nd(rng));
  const Signal f(v, 3.0, -1.5);
  const Signal back = from_spectrum(spectrum(f), 3.0, -1.5);
  CHECK(rel_l2(back, f) < 1e-13);
  CHECK(kind_of([] { Signal(std::vector<cd>(1), 1.0); }) == ErrorKind::structural);
  CHECK(kind_of([] { Signal(std::vector<cd>(4), 0.0); }) == ErrorKind::structural);
  CHECK(kind_of([] { Signal(std::vector<cd>{cd(NAN), cd()}, 1.0); }) == ErrorKind::domain);
}
