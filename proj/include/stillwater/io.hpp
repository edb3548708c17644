#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "stillwater/spectral.hpp"

namespace stillwater {

/// Contents of an SWF1 field file: a grid and named sample arrays.
///
/// Layout: "SWF1", then little-endian u32 version (1), u32 N1, u32 N2,
/// f64 L1, f64 L2, u32 field count, and per field u16 name length, the
/// UTF-8 name and N1*N2 row-major f64 samples.
struct FieldFile {
  Grid grid;
  std::vector<std::pair<std::string, Field>> fields;

  /// Throws FormatError if no field has this name.
  [[nodiscard]] const Field& get(const std::string& name) const;
  [[nodiscard]] bool has(const std::string& name) const;
};

void write_field_file(const std::filesystem::path& path, const FieldFile& file);
/// Throws FormatError on malformed input.
FieldFile read_field_file(const std::filesystem::path& path);

std::vector<char> encode_field_file(const FieldFile& file);
FieldFile decode_field_file(const std::vector<char>& bytes);

}  // namespace stillwater
