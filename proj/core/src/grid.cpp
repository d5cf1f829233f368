#include "skinspec/grid.hpp"

#include <cmath>
#include <string>

#include "skinspec/error.hpp"

namespace skinspec {

WavelengthGrid::WavelengthGrid() : WavelengthGrid(uniform(500.0, 1000.0, 100)) {}

WavelengthGrid::WavelengthGrid(std::vector<double> centers) : centers_(std::move(centers)) {
  if (centers_.empty()) fail_validation("wavelength grid is empty");
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    const double c = centers_[i];
    if (!std::isfinite(c) || c <= 0.0) {
      fail_validation("wavelength " + std::to_string(i) + " is not finite and positive");
    }
    if (i > 0 && !(c > centers_[i - 1])) {
      fail_validation("wavelength grid is not strictly increasing at index " + std::to_string(i));
    }
  }
}

WavelengthGrid WavelengthGrid::uniform(double first_nm, double last_nm, std::size_t bands) {
  if (bands == 0) fail_validation("uniform grid needs at least one band");
  if (bands == 1) return WavelengthGrid(std::vector<double>{first_nm});
  std::vector<double> c(bands);
  const double step = (last_nm - first_nm) / static_cast<double>(bands - 1);
  for (std::size_t i = 0; i < bands; ++i) c[i] = first_nm + step * static_cast<double>(i);
  c.back() = last_nm;
  return WavelengthGrid(std::move(c));
}

std::vector<std::size_t> WavelengthGrid::bands_within(double lo_nm, double hi_nm) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    if (centers_[i] >= lo_nm && centers_[i] <= hi_nm) out.push_back(i);
  }
  return out;
}

}  // namespace skinspec
