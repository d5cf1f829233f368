#pragma once

#include <filesystem>

#include "skinspec/cube.hpp"

namespace skinspec {

// Cube container: a key=value header (width, height, bands, layout=band-major,
// dtype=float32, wavelengths=<comma-separated nm>) next to a raw little-endian
// float32 payload. The payload path defaults to the header path with its
// extension replaced by ".raw"; an optional payload=<file> key overrides it
// (relative to the header's directory).
HsiCube load_cube(const std::filesystem::path& header_path);
void save_cube(const HsiCube& cube, const std::filesystem::path& header_path);

std::filesystem::path payload_path_for(const std::filesystem::path& header_path);

// Mask raster: "width=W" and "height=H" lines, then H rows of W '0'/'1' chars.
AnnotationMask load_mask(const std::filesystem::path& path);
void save_mask(const AnnotationMask& mask, const std::filesystem::path& path);

}  // namespace skinspec
