#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skinspec/grid.hpp"
#include "skinspec/spectrum.hpp"

namespace skinspec {

struct SubjectRecord {
  std::string subject_id;
  Group group = Group::healthy;
  // Subject-level covariates. Numeric values are per-subject means over the
  // spectra that carry them (static values pass through unchanged);
  // categorical values are the most frequent level.
  Covariates covariates;
  std::vector<MedianSpectrum> spectra;

  friend bool operator==(const SubjectRecord&, const SubjectRecord&) = default;
};

// Collapse per-acquisition covariates to one subject-level record.
Covariates subject_covariates(const std::vector<MedianSpectrum>& spectra);

class Cohort {
 public:
  // Validates: unique subject ids, every spectrum carries its subject's id and
  // group, all spectra match the grid and are finite and non-negative.
  Cohort(WavelengthGrid grid, std::vector<SubjectRecord> subjects);

  // Groups spectra by subject_id in order of first appearance and derives
  // subject-level covariates. Conflicting groups for one subject_id throw.
  static Cohort from_spectra(WavelengthGrid grid, std::vector<MedianSpectrum> spectra);

  const WavelengthGrid& grid() const { return grid_; }
  const std::vector<SubjectRecord>& subjects() const { return subjects_; }
  std::size_t size() const { return subjects_.size(); }
  std::size_t spectrum_count() const;
  std::size_t group_size(Group g) const;
  const SubjectRecord* find(std::string_view subject_id) const;

  friend bool operator==(const Cohort&, const Cohort&) = default;

 private:
  WavelengthGrid grid_;
  std::vector<SubjectRecord> subjects_;
};

}  // namespace skinspec
