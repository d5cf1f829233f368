#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "skinspec/grid.hpp"
#include "skinspec/spectrum.hpp"

namespace skinspec {

// Reflectance volume stored band-major: band outermost, then row, then column.
class HsiCube {
 public:
  HsiCube(std::size_t width, std::size_t height, WavelengthGrid grid, std::vector<float> values);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t bands() const { return grid_.size(); }
  std::size_t pixels() const { return width_ * height_; }
  const WavelengthGrid& grid() const { return grid_; }
  std::span<const float> values() const { return values_; }

  float at(std::size_t band, std::size_t row, std::size_t col) const {
    return values_[(band * height_ + row) * width_ + col];
  }
  // Contiguous plane of one band, row-major.
  std::span<const float> band_plane(std::size_t band) const {
    return std::span<const float>(values_).subspan(band * pixels(), pixels());
  }

  friend bool operator==(const HsiCube&, const HsiCube&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  WavelengthGrid grid_;
  std::vector<float> values_;
};

class AnnotationMask {
 public:
  AnnotationMask(std::size_t width, std::size_t height, std::vector<std::uint8_t> included);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  bool included(std::size_t row, std::size_t col) const { return bits_[row * width_ + col] != 0; }
  std::span<const std::uint8_t> bits() const { return bits_; }
  std::size_t included_count() const;

  friend bool operator==(const AnnotationMask&, const AnnotationMask&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint8_t> bits_;  // 0 or 1, row-major
};

// Per-band median over included pixels. Even counts average the two central
// order statistics (computed in double). Throws ValidationError on an empty
// mask or a dimension mismatch.
MedianSpectrum median_spectrum(const HsiCube& cube, const AnnotationMask& mask, SpectrumMeta meta);

}  // namespace skinspec
