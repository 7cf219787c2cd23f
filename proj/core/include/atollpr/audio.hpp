#pragma once

#include <filesystem>
#include <vector>

#include "atollpr/atoll.hpp"
#include "atollpr/transforms.hpp"

namespace atollpr {

struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate_hz = 0;
  void validate() const;
};

// Mono 16-bit PCM or 32-bit float; anything else is rejected.
AudioBuffer read_wav(const std::filesystem::path& path);
// Always 32-bit float.
void write_wav(const std::filesystem::path& path, const AudioBuffer& audio);

// Maps seconds to time-frequency units: t_tf = t_sec / seconds_per_unit.
struct TimeScale {
  double seconds_per_unit = 1.0;
};

Signal to_signal(const AudioBuffer& audio, TimeScale scale = {});
AudioBuffer to_audio(const Signal& real_signal, int sample_rate_hz);

// Full-band lattice over the signal duration: N = fs/dy rows (fs/dy must
// be an integer), columns every dx over [t0, t_last].
Lattice audio_lattice(const Signal& f, double dx, double dy);

// Spectral rotation: e^{i alpha} on positive bins, e^{-i alpha} on negative
// bins; DC and Nyquist untouched.
AudioBuffer phase_shift_global(const AudioBuffer& f, double alpha);
// Hilbert transform, multiplier -i sgn(xi).
std::vector<double> hilbert(const std::vector<double>& f);
// cos(alpha) f(t) + sin(alpha) (Hf)(-t), reflected about the buffer centre.
std::vector<double> phase_shift_time_formula(const AudioBuffer& f, double alpha);

// V of the analytic part on dec.lattice, per-component phase factors,
// synthesis, then 2 Re(.).
AudioBuffer phase_shift_components(const AudioBuffer& f, const AtollDecomposition& dec,
                                   const std::vector<double>& alphas, TimeScale scale = {});

// Two disjoint Gaussian wave packets (600 Hz and 1000 Hz) at 4 kHz, 0.4 s;
// intended with seconds_per_unit = 0.01.
AudioBuffer two_burst_signal();
inline constexpr double kTwoBurstSecondsPerUnit = 0.01;

// ||a - b|| / ||b||
double relative_l2(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace atollpr
