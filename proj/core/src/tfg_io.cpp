#include "atollpr/tfg_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>

#include "atollpr/error.hpp"

static_assert(std::endian::native == std::endian::little, "TFG I/O assumes a little-endian host");

namespace atollpr {

namespace {

constexpr char kMagic[4] = {'T', 'F', 'G', '1'};

std::string header_json(const Lattice& lat, TfgKind kind) {
  nlohmann::json h;
  h["nx"] = lat.nx;
  h["ny"] = lat.ny;
  h["origin_x"] = lat.origin_x;
  h["origin_y"] = lat.origin_y;
  h["dx"] = lat.dx;
  h["dy"] = lat.dy;
  h["kind"] = tfg_kind_name(kind);
  return h.dump();
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorKind::io, "cannot open for writing: " + path.string());
  return os;
}

void write_header(std::ofstream& os, const Lattice& lat, TfgKind kind) {
  const std::string h = header_json(lat, kind);
  const auto len = static_cast<std::uint32_t>(h.size());
  os.write(kMagic, 4);
  os.write(reinterpret_cast<const char*>(&len), 4);
  os.write(h.data(), static_cast<std::streamsize>(h.size()));
}

}  // namespace

const char* tfg_kind_name(TfgKind kind) {
  switch (kind) {
    case TfgKind::complex: return "complex";
    case TfgKind::real: return "real";
    case TfgKind::boolean: return "bool";
  }
  return "complex";
}

void write_tfg(const std::filesystem::path& path, const TFGrid& grid, TfgKind kind) {
  if (kind == TfgKind::boolean) fail(ErrorKind::structural, "use the mask overload for bool TFG files");
  if (kind == TfgKind::real && !grid.is_real()) fail(ErrorKind::structural, "grid has imaginary parts");
  auto os = open_out(path);
  write_header(os, grid.lattice(), kind);
  if (kind == TfgKind::complex) {
    os.write(reinterpret_cast<const char*>(grid.values().data()),
             static_cast<std::streamsize>(grid.size() * sizeof(cd)));
  } else {
    const auto re = grid.real_values();
    os.write(reinterpret_cast<const char*>(re.data()), static_cast<std::streamsize>(re.size() * sizeof(double)));
  }
  if (!os) fail(ErrorKind::io, "write failed: " + path.string());
}

void write_tfg(const std::filesystem::path& path, const DomainMask& mask) {
  auto os = open_out(path);
  write_header(os, mask.lattice(), TfgKind::boolean);
  os.write(reinterpret_cast<const char*>(mask.cells().data()), static_cast<std::streamsize>(mask.cells().size()));
  if (!os) fail(ErrorKind::io, "write failed: " + path.string());
}

TfgFile read_tfg(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorKind::io, "cannot open: " + path.string());
  char magic[4];
  std::uint32_t len = 0;
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    fail(ErrorKind::structural, "not a TFG1 file: " + path.string());
  if (!is.read(reinterpret_cast<char*>(&len), 4)) fail(ErrorKind::structural, "truncated TFG header");
  std::string h(len, '\0');
  if (!is.read(h.data(), len)) fail(ErrorKind::structural, "truncated TFG header");
  TfgFile f;
  try {
    const auto j = nlohmann::json::parse(h);
    f.lattice.nx = j.at("nx").get<int>();
    f.lattice.ny = j.at("ny").get<int>();
    f.lattice.origin_x = j.at("origin_x").get<double>();
    f.lattice.origin_y = j.at("origin_y").get<double>();
    f.lattice.dx = j.at("dx").get<double>();
    f.lattice.dy = j.at("dy").get<double>();
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "complex") f.kind = TfgKind::complex;
    else if (kind == "real") f.kind = TfgKind::real;
    else if (kind == "bool") f.kind = TfgKind::boolean;
    else fail(ErrorKind::structural, "unknown TFG kind: " + kind);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::structural, std::string("bad TFG header: ") + e.what());
  }
  f.lattice.validate();
  const std::size_t n = f.lattice.size();
  if (f.kind == TfgKind::boolean) {
    f.cells.resize(n);
    if (!is.read(reinterpret_cast<char*>(f.cells.data()), static_cast<std::streamsize>(n)))
      fail(ErrorKind::structural, "truncated TFG payload");
  } else if (f.kind == TfgKind::complex) {
    f.values.resize(n);
    if (!is.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(n * sizeof(cd))))
      fail(ErrorKind::structural, "truncated TFG payload");
  } else {
    std::vector<double> re(n);
    if (!is.read(reinterpret_cast<char*>(re.data()), static_cast<std::streamsize>(n * sizeof(double))))
      fail(ErrorKind::structural, "truncated TFG payload");
    f.values.assign(re.begin(), re.end());
  }
  return f;
}

TFGrid read_tfg_grid(const std::filesystem::path& path) {
  auto f = read_tfg(path);
  if (f.kind == TfgKind::boolean) {
    std::vector<cd> v(f.cells.begin(), f.cells.end());
    return TFGrid(f.lattice, std::move(v));
  }
  return TFGrid(f.lattice, std::move(f.values));
}

DomainMask read_tfg_mask(const std::filesystem::path& path) {
  auto f = read_tfg(path);
  if (f.kind != TfgKind::boolean) fail(ErrorKind::structural, "expected a bool TFG file: " + path.string());
  return DomainMask(f.lattice, std::move(f.cells));
}

}  // namespace atollpr
