#include "skinspec/cube.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skinspec/error.hpp"

namespace skinspec {

HsiCube::HsiCube(std::size_t width, std::size_t height, WavelengthGrid grid, std::vector<float> values)
    : width_(width), height_(height), grid_(std::move(grid)), values_(std::move(values)) {
  if (width_ == 0 || height_ == 0) fail_validation("cube dimensions must be positive");
  const std::size_t expected = width_ * height_ * grid_.size();
  if (values_.size() != expected) {
    fail_validation("cube value count " + std::to_string(values_.size()) + " does not match " +
                    std::to_string(width_) + "x" + std::to_string(height_) + "x" +
                    std::to_string(grid_.size()) + " = " + std::to_string(expected));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const float v = values_[i];
    if (!std::isfinite(v) || v < 0.0f) {
      fail_validation("cube value at index " + std::to_string(i) + " is not finite and non-negative");
    }
  }
}

AnnotationMask::AnnotationMask(std::size_t width, std::size_t height, std::vector<std::uint8_t> included)
    : width_(width), height_(height), bits_(std::move(included)) {
  if (bits_.size() != width_ * height_) {
    fail_validation("mask payload has " + std::to_string(bits_.size()) + " pixels, expected " +
                    std::to_string(width_ * height_));
  }
  for (auto& b : bits_) b = b != 0 ? 1 : 0;
}

std::size_t AnnotationMask::included_count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

MedianSpectrum median_spectrum(const HsiCube& cube, const AnnotationMask& mask, SpectrumMeta meta) {
  if (mask.width() != cube.width() || mask.height() != cube.height()) {
    fail_validation("mask " + std::to_string(mask.width()) + "x" + std::to_string(mask.height()) +
                    " does not match cube " + std::to_string(cube.width()) + "x" +
                    std::to_string(cube.height()));
  }
  std::vector<std::size_t> pixels;
  const auto bits = mask.bits();
  for (std::size_t p = 0; p < bits.size(); ++p) {
    if (bits[p]) pixels.push_back(p);
  }
  if (pixels.empty()) fail_validation("annotation mask has no included pixels");

  const std::size_t n = pixels.size();
  const std::size_t upper = n / 2;
  std::vector<float> scratch(n);
  MedianSpectrum out;
  out.values.resize(cube.bands());
  for (std::size_t b = 0; b < cube.bands(); ++b) {
    const auto plane = cube.band_plane(b);
    for (std::size_t i = 0; i < n; ++i) scratch[i] = plane[pixels[i]];
    std::nth_element(scratch.begin(), scratch.begin() + upper, scratch.end());
    const double hi = scratch[upper];
    if (n % 2 == 1) {
      out.values[b] = hi;
    } else {
      const double lo = *std::max_element(scratch.begin(), scratch.begin() + upper);
      out.values[b] = (lo + hi) / 2.0;
    }
  }
  out.meta = std::move(meta);
  return out;
}

}  // namespace skinspec
