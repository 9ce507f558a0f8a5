#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "infosample/grid.hpp"

namespace infosample::io {

/// Reads a headerless little-endian f32 brick (x-fastest) and widens to f64.
/// Throws SizeMismatchError (bytes) or NonFiniteValueError.
Field load_field(const std::filesystem::path& path, const GridDims& dims, const std::string& name);

/// Writes a field as a little-endian f32 brick.
void save_field(const Field& field, const std::filesystem::path& path);

// Point-set file layout (all integers little-endian):
//   "MVSP" | u16 version=1 | u16 reserved=0
//   u32 nVars | u64 nPoints | u32 nx | u32 ny | u32 nz
//   nVars x (u16 byteLength, UTF-8 name)
//   nPoints x (u64 linearIndex, nVars x f32 value)
inline constexpr char kPointSetMagic[4] = {'M', 'V', 'S', 'P'};
inline constexpr std::uint16_t kPointSetVersion = 1;

void save_pointset(const SampledPointSet& ps, const std::filesystem::path& path);
SampledPointSet load_pointset(const std::filesystem::path& path);

/// JSON sidecar: {"dims":[nx,ny,nz],"variables":[{"name":..,"file":..}]}.
/// File paths are resolved relative to the sidecar's directory.
struct SidecarEntry {
  std::string name;
  std::string file;
};
struct Sidecar {
  GridDims dims;
  std::vector<SidecarEntry> variables;
};

Sidecar read_sidecar(const std::filesystem::path& path);
void write_sidecar(const Sidecar& sidecar, const std::filesystem::path& path);

MultiField load_multifield(const std::filesystem::path& sidecar_path);

/// Writes one brick per variable (<sidecar stem>_<name>.f32) next to the sidecar.
void save_multifield(const MultiField& mf, const std::filesystem::path& sidecar_path);

/// Little-endian u64 list, as written by `query --out`.
void save_indices(const std::vector<std::uint64_t>& indices, const std::filesystem::path& path);
std::vector<std::uint64_t> load_indices(const std::filesystem::path& path);

/// True when the file starts with the point-set magic.
bool is_pointset_file(const std::filesystem::path& path);

}  // namespace infosample::io
