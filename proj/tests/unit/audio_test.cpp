#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>

#include "atollpr/audio.hpp"
#include "atollpr/error.hpp"

using namespace atollpr;
namespace fs = std::filesystem;

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

AudioBuffer noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  AudioBuffer a;
  a.sample_rate_hz = 8000;
  a.samples.resize(n);
  for (auto& v : a.samples) v = u(rng);
  return a;
}

// Zero-mean, no Nyquist component: the spectral rotation acts on all of it.
AudioBuffer band_limited(std::size_t n, std::uint64_t seed) {
  AudioBuffer a = noise(n, seed);
  const auto H = hilbert(a.samples);
  a.samples = hilbert(H);
  for (auto& v : a.samples) v = -v;
  return a;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

struct TwoBurst {
  AudioBuffer audio;
  TimeScale scale;
  Lattice lattice;
  TFGrid V;
  AtollDecomposition dec;
};

TwoBurst two_burst() {
  AudioBuffer audio = two_burst_signal();
  const TimeScale scale{kTwoBurstSecondsPerUnit};
  const Signal s = to_signal(audio, scale);
  const Lattice lat = audio_lattice(s, 0.25, 0.25);
  TFGrid V = gabor_forward(analytic_part(s), lat, GaborOptions{true});
  AtollDecomposition dec = segment(magnitude(V), 1e-4 * V.max_abs());
  return {std::move(audio), scale, lat, std::move(V), std::move(dec)};
}

double magnitude_residual(const TwoBurst& t, const AudioBuffer& b) {
  const TFGrid W = gabor_forward(analytic_part(to_signal(b, t.scale)), t.lattice, GaborOptions{true});
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < W.size(); ++k) {
    num += std::pow(std::abs(W[k]) - std::abs(t.V[k]), 2);
    den += std::norm(t.V[k]);
  }
  return std::sqrt(num / den);
}

fs::path temp_path(const std::string& name) { return fs::temp_directory_path() / ("atollpr_audio_test_" + name); }

void write_bytes(const fs::path& p, const std::vector<std::uint8_t>& bytes) {
  std::ofstream os(p, std::ios::binary);
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void put16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v & 0xff));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) b.push_back(static_cast<std::uint8_t>((v >> s) & 0xff));
}

void put_tag(std::vector<std::uint8_t>& b, const char* tag) { b.insert(b.end(), tag, tag + 4); }

// Canonical 44-byte header followed by 16-bit PCM frames.
std::vector<std::uint8_t> pcm16_wav(const std::vector<std::int16_t>& frames, std::uint16_t channels, std::uint32_t rate) {
  std::vector<std::uint8_t> b;
  const auto data_bytes = static_cast<std::uint32_t>(frames.size() * 2);
  put_tag(b, "RIFF");
  put32(b, 36 + data_bytes);
  put_tag(b, "WAVE");
  put_tag(b, "fmt ");
  put32(b, 16);
  put16(b, 1);
  put16(b, channels);
  put32(b, rate);
  put32(b, rate * channels * 2);
  put16(b, static_cast<std::uint16_t>(channels * 2));
  put16(b, 16);
  put_tag(b, "data");
  put32(b, data_bytes);
  for (std::int16_t v : frames) put16(b, static_cast<std::uint16_t>(v));
  return b;
}

}  // namespace

TEST_CASE("phase_shift_global examples") {
  const AudioBuffer f = noise(1001, 81);
  CHECK(max_diff(phase_shift_global(f, 0.0).samples, f.samples) < 1e-12);

  // alpha = pi negates everything except DC.
  double mean = 0.0;
  for (double v : f.samples) mean += v;
  mean /= static_cast<double>(f.samples.size());
  const AudioBuffer neg = phase_shift_global(f, M_PI);
  for (std::size_t k = 0; k < f.samples.size(); ++k) CHECK(neg.samples[k] == doctest::Approx(2.0 * mean - f.samples[k]).epsilon(1e-10));

  const AudioBuffer g = band_limited(1024, 82);
  const double n0 = norm2(g.samples);
  for (double a : {0.3, 1.0, 2.5, -1.7}) CHECK(std::abs(norm2(phase_shift_global(g, a).samples) - n0) < 1e-10 * n0);
  CHECK(phase_shift_global(g, 0.4).sample_rate_hz == g.sample_rate_hz);
}

TEST_CASE("phase_shift_global is a group action") {
  for (std::size_t n : {1024u, 1001u}) {
    const AudioBuffer f = noise(n, 83);
    for (auto [a, b] : {std::pair{0.4, 1.1}, std::pair{-2.0, 2.9}, std::pair{3.0, 3.0}}) {
      const AudioBuffer ab = phase_shift_global(f, a + b);
      const AudioBuffer seq = phase_shift_global(phase_shift_global(f, a), b);
      CHECK(max_diff(ab.samples, seq.samples) < 1e-10);
    }
  }
}

TEST_CASE("hilbert transform") {
  const std::size_t n = 512;
  std::vector<double> c(n), s(n);
  for (std::size_t k = 0; k < n; ++k) {
    c[k] = std::cos(2.0 * M_PI * 5.0 * static_cast<double>(k) / n);
    s[k] = std::sin(2.0 * M_PI * 5.0 * static_cast<double>(k) / n);
  }
  CHECK(max_diff(hilbert(c), s) < 1e-12);
  const std::vector<double> hs = hilbert(s);
  for (std::size_t k = 0; k < n; ++k) CHECK(hs[k] == doctest::Approx(-c[k]).epsilon(1e-12).scale(1.0));
  // The rotation by alpha equals cos(alpha) f - sin(alpha) Hf.
  const AudioBuffer f = noise(777, 84);
  const auto H = hilbert(f.samples);
  const double a = 0.7;
  double mean = 0.0;
  for (double v : f.samples) mean += v;
  mean /= static_cast<double>(f.samples.size());
  std::vector<double> alt(f.samples.size());
  for (std::size_t k = 0; k < alt.size(); ++k) alt[k] = std::cos(a) * (f.samples[k] - mean) - std::sin(a) * H[k] + mean;
  CHECK(max_diff(alt, phase_shift_global(f, a).samples) < 1e-12);
}

TEST_CASE("the reflected time-domain formula disagrees with the spectral rotation") {
  const AudioBuffer f = two_burst_signal();
  const double a = 0.7;
  const AudioBuffer g = phase_shift_global(f, a);
  CHECK(relative_l2(phase_shift_time_formula(f, a), g.samples) > 0.5);
  CHECK(max_diff(phase_shift_time_formula(f, 0.0), f.samples) < 1e-15);
}

TEST_CASE("phase_shift_components examples") {
  const TwoBurst t = two_burst();
  REQUIRE(t.dec.size() == 2);

  const AudioBuffer same = phase_shift_components(t.audio, t.dec, {0.0, 0.0}, t.scale);
  CHECK(relative_l2(same.samples, t.audio.samples) < 1e-3);

  for (double a : {0.7, -2.0}) {
    const AudioBuffer comp = phase_shift_components(t.audio, t.dec, {a, a}, t.scale);
    CHECK(relative_l2(comp.samples, phase_shift_global(t.audio, a).samples) < 1e-3);
  }

  const AudioBuffer split = phase_shift_components(t.audio, t.dec, {0.0, M_PI / 2.0}, t.scale);
  CHECK(magnitude_residual(t, split) < 1e-3);
  CHECK(relative_l2(split.samples, t.audio.samples) >= 0.3);
  CHECK(std::abs(norm2(split.samples) / norm2(t.audio.samples) - 1.0) < 1e-3);

  CHECK(kind_of([&] { phase_shift_components(t.audio, t.dec, {0.0}, t.scale); }) == ErrorKind::structural);
}

TEST_CASE("audio lattice and conversions") {
  const AudioBuffer a = two_burst_signal();
  CHECK(a.sample_rate_hz == 4000);
  CHECK(a.samples.size() == 1600);
  const Signal s = to_signal(a, TimeScale{kTwoBurstSecondsPerUnit});
  CHECK(s.sample_rate() == doctest::Approx(40.0));
  const Lattice lat = audio_lattice(s, 0.25, 0.25);
  CHECK(lat.ny == 160);
  CHECK(lat.x(0) == s.t0());
  CHECK(lat.x_max() <= s.t_last() + 1e-12);
  CHECK(to_audio(s, 4000).samples == a.samples);
  CHECK(kind_of([&] { audio_lattice(s, 0.25, 0.3); }) == ErrorKind::precondition);
  CHECK(kind_of([&] { to_signal(a, TimeScale{0.0}); }) == ErrorKind::precondition);
  CHECK(kind_of([] { to_signal(AudioBuffer{{0.0, 1.0}, 0}); }) == ErrorKind::structural);
  CHECK(kind_of([] { to_signal(AudioBuffer{{0.0, NAN}, 100}); }) == ErrorKind::domain);
  CHECK(relative_l2({1.0, 1.0}, {1.0, 1.0}) == 0.0);
  CHECK(kind_of([] { relative_l2({1.0}, {1.0, 2.0}); }) == ErrorKind::structural);
}

TEST_CASE("WAV round trip and 16-bit input") {
  const AudioBuffer a = noise(257, 85);
  const fs::path p = temp_path("roundtrip.wav");
  write_wav(p, a);
  const AudioBuffer b = read_wav(p);
  CHECK(b.sample_rate_hz == a.sample_rate_hz);
  REQUIRE(b.samples.size() == a.samples.size());
  for (std::size_t k = 0; k < a.samples.size(); ++k) CHECK(b.samples[k] == static_cast<double>(static_cast<float>(a.samples[k])));

  const fs::path q = temp_path("pcm16.wav");
  write_bytes(q, pcm16_wav({0, 16384, -32768, 32767}, 1, 22050));
  const AudioBuffer c = read_wav(q);
  CHECK(c.sample_rate_hz == 22050);
  REQUIRE(c.samples.size() == 4);
  CHECK(c.samples[0] == 0.0);
  CHECK(c.samples[1] == 0.5);
  CHECK(c.samples[2] == -1.0);
  CHECK(c.samples[3] == doctest::Approx(32767.0 / 32768.0));
  fs::remove(p);
  fs::remove(q);
}

TEST_CASE("WAV errors") {
  const fs::path stereo = temp_path("stereo.wav");
  write_bytes(stereo, pcm16_wav({1, 2, 3, 4}, 2, 8000));
  CHECK(kind_of([&] { read_wav(stereo); }) == ErrorKind::precondition);

  const fs::path junk = temp_path("junk.wav");
  write_bytes(junk, {'n', 'o', 't', ' ', 'a', ' ', 'w', 'a', 'v', 'e', ' ', 'f', 'i', 'l', 'e'});
  CHECK(kind_of([&] { read_wav(junk); }) == ErrorKind::structural);

  auto truncated = pcm16_wav({1, 2, 3, 4}, 1, 8000);
  truncated.resize(30);
  const fs::path cut = temp_path("cut.wav");
  write_bytes(cut, truncated);
  CHECK(kind_of([&] { read_wav(cut); }) == ErrorKind::structural);

  CHECK(kind_of([] { read_wav(temp_path("does_not_exist.wav")); }) == ErrorKind::io);
  CHECK(kind_of([] { write_wav("/nonexistent_dir/x.wav", two_burst_signal()); }) == ErrorKind::io);
  fs::remove(stereo);
  fs::remove(junk);
  fs::remove(cut);
}
