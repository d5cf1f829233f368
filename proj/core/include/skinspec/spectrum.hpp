#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skinspec/types.hpp"

namespace skinspec {

// Clinical covariates attached to one acquisition. Absent keys are missing
// values; numeric and categorical variables live in separate maps.
struct Covariates {
  std::map<std::string, double> numeric;
  std::map<std::string, std::string> categorical;

  friend bool operator==(const Covariates&, const Covariates&) = default;
};

struct SpectrumMeta {
  std::string subject_id;
  Group group = Group::healthy;
  Site site = Site::hand;
  int timepoint_index = 0;  // 0 = first measurement
  std::optional<Timestamp> acquired_at;
  std::string software_version;
  Covariates covariates;

  friend bool operator==(const SpectrumMeta&, const SpectrumMeta&) = default;
};

// One feature vector per image: per-band median over the annotated pixels.
struct MedianSpectrum {
  std::vector<double> values;
  SpectrumMeta meta;

  friend bool operator==(const MedianSpectrum&, const MedianSpectrum&) = default;
};

}  // namespace skinspec
