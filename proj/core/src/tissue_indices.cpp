#include "skinspec/tissue_indices.hpp"

#include <algorithm>
#include <string>

#include "skinspec/error.hpp"

namespace skinspec {
namespace {

double window_mean(std::span<const double> values, const WavelengthGrid& grid, const WavelengthWindow& w) {
  const auto bands = grid.bands_within(w.lo_nm, w.hi_nm);
  if (bands.empty()) {
    fail_validation("window " + std::to_string(w.lo_nm) + "-" + std::to_string(w.hi_nm) +
                    " nm covers no band of the grid");
  }
  double sum = 0.0;
  for (auto b : bands) sum += values[b];
  return sum / static_cast<double>(bands.size());
}

}  // namespace

double band_ratio_index(std::span<const double> values, const WavelengthGrid& grid, const BandRatio& ratio) {
  if (values.size() != grid.size()) fail_validation("spectrum length does not match the grid");
  const double a = window_mean(values, grid, ratio.a);
  const double b = window_mean(values, grid, ratio.b);
  const double denom = a + b;
  if (denom == 0.0) return 0.5;
  return std::clamp(a / denom, 0.0, 1.0);
}

TissueIndices tissue_indices(const MedianSpectrum& spectrum, const WavelengthGrid& grid,
                             const TissueIndexConfig& config) {
  return {band_ratio_index(spectrum.values, grid, config.sto2),
          band_ratio_index(spectrum.values, grid, config.npi),
          band_ratio_index(spectrum.values, grid, config.thi),
          band_ratio_index(spectrum.values, grid, config.twi)};
}

}  // namespace skinspec
