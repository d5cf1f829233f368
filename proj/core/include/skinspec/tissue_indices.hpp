#pragma once

#include "skinspec/grid.hpp"
#include "skinspec/spectrum.hpp"

namespace skinspec {

struct WavelengthWindow {
  double lo_nm = 0.0;
  double hi_nm = 0.0;
};

// index = mean(A) / (mean(A) + mean(B)), clamped to [0, 1].
struct BandRatio {
  WavelengthWindow a;
  WavelengthWindow b;
};

// Generic band-ratio stand-ins for the camera's oxygenation, perfusion,
// hemoglobin and water summaries. The default windows sit in familiar
// absorber regions; they make no claim of matching any vendor algorithm.
struct TissueIndexConfig {
  BandRatio sto2{{570.0, 590.0}, {740.0, 780.0}};
  BandRatio npi{{655.0, 735.0}, {825.0, 925.0}};
  BandRatio thi{{530.0, 590.0}, {785.0, 825.0}};
  BandRatio twi{{950.0, 1000.0}, {650.0, 700.0}};
};

struct TissueIndices {
  double sto2_like = 0.0;
  double npi_like = 0.0;
  double thi_like = 0.0;
  double twi_like = 0.0;
};

// Throws ValidationError when a window covers no band of the grid or the
// spectrum length differs from the grid. When both window means are zero the
// ratio is taken as 0.5.
double band_ratio_index(std::span<const double> values, const WavelengthGrid& grid, const BandRatio& ratio);

TissueIndices tissue_indices(const MedianSpectrum& spectrum, const WavelengthGrid& grid,
                             const TissueIndexConfig& config = {});

}  // namespace skinspec
