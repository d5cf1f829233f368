#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace skinspec {

// Band-center wavelengths in nanometers, strictly increasing.
class WavelengthGrid {
 public:
  // 100 bands, 500-1000 nm inclusive, uniform spacing.
  WavelengthGrid();
  explicit WavelengthGrid(std::vector<double> centers);

  static WavelengthGrid uniform(double first_nm, double last_nm, std::size_t bands);

  std::size_t size() const { return centers_.size(); }
  double operator[](std::size_t i) const { return centers_[i]; }
  std::span<const double> centers() const { return centers_; }
  double front() const { return centers_.front(); }
  double back() const { return centers_.back(); }

  // Indices of bands whose center lies in [lo_nm, hi_nm].
  std::vector<std::size_t> bands_within(double lo_nm, double hi_nm) const;

  friend bool operator==(const WavelengthGrid&, const WavelengthGrid&) = default;

 private:
  std::vector<double> centers_;
};

}  // namespace skinspec
