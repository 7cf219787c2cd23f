#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "atollpr/audio.hpp"
#include "atollpr/error.hpp"

static_assert(std::endian::native == std::endian::little, "WAV I/O assumes a little-endian host");

namespace atollpr {

namespace {

template <class T>
T read_le(const std::vector<char>& buf, std::size_t at) {
  if (at + sizeof(T) > buf.size()) fail(ErrorKind::structural, "truncated WAV file");
  T v;
  std::memcpy(&v, buf.data() + at, sizeof(T));
  return v;
}

template <class T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

}  // namespace

AudioBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorKind::io, "cannot open: " + path.string());
  const std::vector<char> buf((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (buf.size() < 12 || std::memcmp(buf.data(), "RIFF", 4) != 0 || std::memcmp(buf.data() + 8, "WAVE", 4) != 0)
    fail(ErrorKind::structural, "not a RIFF/WAVE file: " + path.string());

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::size_t data_at = 0, data_len = 0;
  std::size_t at = 12;
  while (at + 8 <= buf.size()) {
    const std::string id(buf.data() + at, 4);
    const auto len = read_le<std::uint32_t>(buf, at + 4);
    const std::size_t body = at + 8;
    if (id == "fmt ") {
      format = read_le<std::uint16_t>(buf, body);
      channels = read_le<std::uint16_t>(buf, body + 2);
      rate = read_le<std::uint32_t>(buf, body + 4);
      bits = read_le<std::uint16_t>(buf, body + 14);
      if (format == 0xFFFE && len >= 40) format = read_le<std::uint16_t>(buf, body + 24);
      have_fmt = true;
    } else if (id == "data") {
      data_at = body;
      data_len = std::min<std::size_t>(len, buf.size() - body);
    }
    at = body + len + (len & 1u);
  }
  if (!have_fmt || data_at == 0) fail(ErrorKind::structural, "WAV file lacks fmt or data chunk");
  if (channels != 1) {
    std::ostringstream os;
    os << "only mono WAV is supported (file has " << channels << " channels)";
    fail(ErrorKind::precondition, os.str());
  }
  AudioBuffer a;
  a.sample_rate_hz = static_cast<int>(rate);
  if (format == 1 && bits == 16) {
    const std::size_t n = data_len / 2;
    a.samples.resize(n);
    for (std::size_t k = 0; k < n; ++k) a.samples[k] = read_le<std::int16_t>(buf, data_at + 2 * k) / 32768.0;
  } else if (format == 3 && bits == 32) {
    const std::size_t n = data_len / 4;
    a.samples.resize(n);
    for (std::size_t k = 0; k < n; ++k) a.samples[k] = read_le<float>(buf, data_at + 4 * k);
  } else {
    std::ostringstream os;
    os << "unsupported WAV encoding (format " << format << ", " << bits << " bits)";
    fail(ErrorKind::precondition, os.str());
  }
  a.validate();
  return a;
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& audio) {
  audio.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorKind::io, "cannot open for writing: " + path.string());
  const auto n = static_cast<std::uint32_t>(audio.samples.size());
  const std::uint32_t data_bytes = n * 4;
  put<std::uint32_t>(os, 0x46464952u);  // "RIFF"
  put<std::uint32_t>(os, 4 + (8 + 18) + (8 + 4) + (8 + data_bytes));
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  put<std::uint32_t>(os, 18);
  put<std::uint16_t>(os, 3);
  put<std::uint16_t>(os, 1);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(audio.sample_rate_hz));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(audio.sample_rate_hz) * 4);
  put<std::uint16_t>(os, 4);
  put<std::uint16_t>(os, 32);
  put<std::uint16_t>(os, 0);
  os.write("fact", 4);
  put<std::uint32_t>(os, 4);
  put<std::uint32_t>(os, n);
  os.write("data", 4);
  put<std::uint32_t>(os, data_bytes);
  for (double v : audio.samples) put<float>(os, static_cast<float>(v));
  if (!os) fail(ErrorKind::io, "write failed: " + path.string());
}

}  // namespace atollpr
