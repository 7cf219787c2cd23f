#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "atollpr/grid.hpp"

namespace atollpr {

// "TFG1", u32 LE header length, JSON header, then LE float64 payload
// (complex interleaved re,im) or one byte per cell for masks.
enum class TfgKind { complex, real, boolean };

const char* tfg_kind_name(TfgKind kind);

struct TfgFile {
  Lattice lattice;
  TfgKind kind = TfgKind::complex;
  std::vector<cd> values;             // complex and real kinds
  std::vector<std::uint8_t> cells;    // boolean kind
};

void write_tfg(const std::filesystem::path& path, const TFGrid& grid, TfgKind kind = TfgKind::complex);
void write_tfg(const std::filesystem::path& path, const DomainMask& mask);
TfgFile read_tfg(const std::filesystem::path& path);
TFGrid read_tfg_grid(const std::filesystem::path& path);
DomainMask read_tfg_mask(const std::filesystem::path& path);

}  // namespace atollpr
