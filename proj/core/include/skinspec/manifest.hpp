#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skinspec/cohort.hpp"

namespace skinspec {

// Minimal RFC-4180 style splitting: commas, double-quoted fields, "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_escape(std::string_view field);

// Text files with one ASCII float per line.
std::vector<double> load_spectrum_file(const std::filesystem::path& path);
void save_spectrum_file(const std::vector<double>& values, const std::filesystem::path& path);

// One wavelength (nm) per line.
WavelengthGrid load_grid_file(const std::filesystem::path& path);
void save_grid_file(const WavelengthGrid& grid, const std::filesystem::path& path);

inline constexpr std::string_view kManifestFixedColumns[] = {
    "subject_id", "group", "site", "timepoint_index", "acquired_at", "software_version",
    "spectrum_file"};

// Columns after the fixed ones are covariates (blank = missing). A covariate
// column is categorical when named "sex" or when any non-blank cell fails to
// parse as a number; otherwise numeric.
//
// The wavelength grid comes from `grid` when given, else from
// "wavelengths.txt" beside the manifest, else the default 500-1000 nm uniform
// grid with as many bands as the first spectrum file.
Cohort load_cohort(const std::filesystem::path& manifest_path,
                   const std::filesystem::path& spectra_root,
                   std::optional<WavelengthGrid> grid = std::nullopt);

// Writes <dir>/manifest.csv, <dir>/wavelengths.txt and <dir>/spectra/*.txt.
// Output is a pure function of the cohort (byte-identical across runs).
void save_cohort(const Cohort& cohort, const std::filesystem::path& dir);

}  // namespace skinspec
