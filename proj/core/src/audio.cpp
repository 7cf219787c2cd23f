#include "atollpr/audio.hpp"

#include <cmath>
#include <sstream>

#include "atollpr/alignment.hpp"
#include "atollpr/error.hpp"
#include "atollpr/parallel.hpp"

namespace atollpr {

void AudioBuffer::validate() const {
  if (sample_rate_hz <= 0) fail(ErrorKind::structural, "sample rate must be positive");
  if (samples.size() < 2) fail(ErrorKind::structural, "audio needs at least two samples");
  for (double v : samples)
    if (!std::isfinite(v)) fail(ErrorKind::domain, "audio samples must be finite");
}

Signal to_signal(const AudioBuffer& audio, TimeScale scale) {
  audio.validate();
  if (!(scale.seconds_per_unit > 0.0)) fail(ErrorKind::precondition, "time scale must be positive");
  return Signal(audio.samples, audio.sample_rate_hz * scale.seconds_per_unit, 0.0);
}

AudioBuffer to_audio(const Signal& s, int sample_rate_hz) {
  AudioBuffer a;
  a.sample_rate_hz = sample_rate_hz;
  a.samples.resize(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) a.samples[k] = s[k].real();
  return a;
}

Lattice audio_lattice(const Signal& f, double dx, double dy) {
  const double ratio = f.sample_rate() / dy;
  const double N = std::round(ratio);
  if (N < 2 || std::abs(ratio - N) > 1e-9 * ratio) {
    std::ostringstream os;
    os << "sample rate " << f.sample_rate() << " is not an integer multiple of dy = " << dy;
    fail(ErrorKind::precondition, os.str());
  }
  Lattice lat;
  lat.dx = dx;
  lat.dy = dy;
  lat.origin_x = f.t0();
  lat.nx = static_cast<int>(std::floor((f.t_last() - f.t0()) / dx + 1e-9)) + 1;
  lat.ny = static_cast<int>(N);
  lat.origin_y = -std::floor(N / 2.0) * dy;
  lat.validate();
  return lat;
}

namespace {

std::vector<cd> rfft(const std::vector<double>& f) {
  std::vector<cd> b(f.begin(), f.end());
  fft_inplace(b, -1);
  return b;
}

std::vector<double> irfft_real(std::vector<cd> b) {
  fft_inplace(b, +1);
  std::vector<double> out(b.size());
  const double n = static_cast<double>(b.size());
  double imag = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) {
    out[k] = b[k].real() / n;
    imag = std::max(imag, std::abs(b[k].imag()) / n);
    scale = std::max(scale, std::abs(out[k]));
  }
  if (imag > 1e-10 * std::max(1.0, scale)) fail(ErrorKind::numerical, "spectral rotation produced a complex signal");
  return out;
}

}  // namespace

AudioBuffer phase_shift_global(const AudioBuffer& f, double alpha) {
  f.validate();
  auto b = rfft(f.samples);
  const std::size_t n = b.size();
  const cd up = std::polar(1.0, alpha), down = std::conj(up);
  for (std::size_t m = 1; m < n; ++m) {
    if (2 * m == n) continue;
    b[m] *= 2 * m < n ? up : down;
  }
  return {irfft_real(std::move(b)), f.sample_rate_hz};
}

std::vector<double> hilbert(const std::vector<double>& f) {
  auto b = rfft(f);
  const std::size_t n = b.size();
  b[0] = 0.0;
  for (std::size_t m = 1; m < n; ++m) {
    if (2 * m == n) b[m] = 0.0;
    else b[m] *= 2 * m < n ? cd(0.0, -1.0) : cd(0.0, 1.0);
  }
  return irfft_real(std::move(b));
}

std::vector<double> phase_shift_time_formula(const AudioBuffer& f, double alpha) {
  f.validate();
  const auto H = hilbert(f.samples);
  const std::size_t n = f.samples.size();
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = std::cos(alpha) * f.samples[k] + std::sin(alpha) * H[n - 1 - k];
  return out;
}

AudioBuffer phase_shift_components(const AudioBuffer& f, const AtollDecomposition& dec,
                                   const std::vector<double>& alphas, TimeScale scale) {
  const Signal s = to_signal(f, scale);
  const Signal fa = analytic_part(s);
  const TFGrid V = gabor_forward(fa, dec.lattice, GaborOptions{true});
  const TFGrid G = scramble_phases(V, dec, alphas);
  const Signal ga = gabor_inverse(G, TimeAxis{s.t0(), s.sample_rate(), s.size()});
  AudioBuffer out;
  out.sample_rate_hz = f.sample_rate_hz;
  out.samples.resize(ga.size());
  for (std::size_t k = 0; k < ga.size(); ++k) out.samples[k] = 2.0 * ga[k].real();
  return out;
}

AudioBuffer two_burst_signal() {
  AudioBuffer a;
  a.sample_rate_hz = 4000;
  const std::size_t n = 1600;
  a.samples.resize(n);
  const double u = kTwoBurstSecondsPerUnit;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / a.sample_rate_hz / u;  // time-frequency units
    const double e1 = std::exp(-M_PI * std::pow((t - 12.0) / 2.0, 2));
    const double e2 = std::exp(-M_PI * std::pow((t - 28.0) / 2.0, 2));
    a.samples[k] = 0.8 * e1 * std::cos(2.0 * M_PI * 6.0 * t) + 0.6 * e2 * std::cos(2.0 * M_PI * 10.0 * t + 0.4);
  }
  return a;
}

double relative_l2(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) fail(ErrorKind::structural, "length mismatch");
  std::vector<double> d(a.size()), n(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    d[k] = (a[k] - b[k]) * (a[k] - b[k]);
    n[k] = b[k] * b[k];
  }
  const double nb = pairwise_sum(n);
  return nb > 0.0 ? std::sqrt(pairwise_sum(d) / nb) : std::sqrt(pairwise_sum(d));
}

}  // namespace atollpr
