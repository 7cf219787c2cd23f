#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "atollpr/grid.hpp"

namespace atollpr {

class Signal {
 public:
  Signal(std::vector<cd> samples, double sample_rate, double t0 = 0.0);
  Signal(const std::vector<double>& samples, double sample_rate, double t0 = 0.0);

  template <class Fn>
  static Signal sample(std::size_t n, double sample_rate, double t0, Fn&& fn) {
    std::vector<cd> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = fn(t0 + static_cast<double>(k) / sample_rate);
    return Signal(std::move(v), sample_rate, t0);
  }

  const std::vector<cd>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  double sample_rate() const { return fs_; }
  double t0() const { return t0_; }
  double time(std::size_t k) const { return t0_ + static_cast<double>(k) / fs_; }
  double t_last() const { return time(samples_.size() - 1); }
  double duration() const { return static_cast<double>(samples_.size()) / fs_; }
  cd operator[](std::size_t k) const { return samples_[k]; }
  // sqrt(sum |f_k|^2 / fs)
  double norm() const;

 private:
  std::vector<cd> samples_;
  double fs_;
  double t0_;
};

// L2 distance with the sample-spacing quadrature weight; same axis required.
double signal_distance(const Signal& a, const Signal& b);

// phi(t) = exp(-pi t^2). Not configurable.
inline double window(double t) { return std::exp(-M_PI * t * t); }
// |phi| < 2e-14 beyond this radius; sums are truncated there.
inline constexpr double kWindowRadius = 3.2;
// ||phi||_2^2
inline const double kWindowEnergy = 1.0 / std::sqrt(2.0);

struct GaborSpec {
  double x_min, x_max, y_min, y_max, dx, dy;
  Lattice lattice() const { return make_lattice(x_min, x_max, y_min, y_max, dx, dy); }
};

struct CauchySpec {
  int order;
  double x_min, x_max, y_min, y_max, dx, dy;
  Lattice lattice() const { return make_lattice(x_min, x_max, y_min, y_max, dx, dy); }
};

struct GaborOptions {
  // Treat samples outside the signal as zero instead of requiring the
  // signal to cover the lattice plus the window radius.
  bool zero_extend = false;
};

struct TimeAxis {
  double t0;
  double sample_rate;
  std::size_t n;
};

// Lattice with the same columns and N >= ny rows, N*dy = sample rate of the
// default synthesis axis, so that the rows tile one full period in frequency.
Lattice full_band_lattice(const Lattice& lattice);
// t0 = x_min - R, sample rate N*dy, covering x_max + R.
TimeAxis default_time_axis(const Lattice& lattice);

// Analysis/synthesis pair on a fixed lattice and time axis. Uses FFTs when
// sample_rate/dy is an integer and direct sums otherwise.
class GaborFrame {
 public:
  GaborFrame(Lattice lattice, TimeAxis axis);

  const Lattice& lattice() const { return lattice_; }
  const TimeAxis& axis() const { return axis_; }

  // V f on the lattice for samples on the axis (zero outside).
  std::vector<cd> analysis(const std::vector<cd>& samples) const;
  // V* F on the axis.
  std::vector<cd> synthesis(const std::vector<cd>& values) const;
  // Least-squares inverse on the samples with w >= floor * ||phi||^2 (zero
  // elsewhere): V* F / w followed by kRefineSweeps Jacobi corrections.
  std::vector<cd> pseudo_inverse(const std::vector<cd>& values) const;
  // w(t) = dx * sum_i phi(t - x_i)^2
  const std::vector<double>& window_energy() const { return w_; }

  static constexpr double kFloor = 1e-6;
  static constexpr int kRefineSweeps = 2;

 private:
  bool fft_mode() const { return period_ > 0; }
  Lattice lattice_;
  TimeAxis axis_;
  int period_ = 0;  // N when sample_rate/dy is an integer
  std::vector<double> w_;
};

TFGrid gabor_forward(const Signal& f, const Lattice& lattice, GaborOptions options = {});
TFGrid gabor_forward(const Signal& f, const GaborSpec& spec, GaborOptions options = {});
Signal gabor_inverse(const TFGrid& F);
Signal gabor_inverse(const TFGrid& F, const TimeAxis& axis);

TFGrid cauchy_forward(const Signal& f, const CauchySpec& spec);

// Spectrum S_m = (1/fs) sum_k f_k exp(-2 pi i t_k m / T), T = n/fs, in FFT
// bin order.
std::vector<cd> spectrum(const Signal& f);
Signal from_spectrum(const std::vector<cd>& S, double sample_rate, double t0);
// Share of spectral energy in negative-frequency bins (Nyquist included).
double negative_frequency_fraction(const Signal& f);

// Zeroes negative bins and halves DC and Nyquist, so 2 Re(f_a) = f for real f.
Signal analytic_part(const Signal& f);

}  // namespace atollpr
