#include "skinspec/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "skinspec/error.hpp"

namespace skinspec {

Covariates subject_covariates(const std::vector<MedianSpectrum>& spectra) {
  std::map<std::string, std::vector<double>> numeric;
  std::map<std::string, std::vector<std::string>> categorical;
  for (const auto& s : spectra) {
    for (const auto& [k, v] : s.meta.covariates.numeric) numeric[k].push_back(v);
    for (const auto& [k, v] : s.meta.covariates.categorical) categorical[k].push_back(v);
  }
  Covariates out;
  for (const auto& [k, vals] : numeric) {
    const bool constant = std::all_of(vals.begin(), vals.end(), [&](double v) { return v == vals[0]; });
    if (constant) {
      out.numeric[k] = vals[0];
    } else {
      double sum = 0.0;
      for (double v : vals) sum += v;
      out.numeric[k] = sum / static_cast<double>(vals.size());
    }
  }
  for (const auto& [k, vals] : categorical) {
    // Most frequent level; ties go to the level seen first.
    std::vector<std::pair<std::string, int>> counts;
    for (const auto& v : vals) {
      auto it = std::find_if(counts.begin(), counts.end(), [&](const auto& c) { return c.first == v; });
      if (it == counts.end()) {
        counts.emplace_back(v, 1);
      } else {
        ++it->second;
      }
    }
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it) {
      if (it->second > best->second) best = it;
    }
    out.categorical[k] = best->first;
  }
  return out;
}

Cohort::Cohort(WavelengthGrid grid, std::vector<SubjectRecord> subjects)
    : grid_(std::move(grid)), subjects_(std::move(subjects)) {
  std::set<std::string_view> seen;
  for (const auto& subj : subjects_) {
    if (subj.subject_id.empty()) fail_validation("empty subject_id");
    if (!seen.insert(subj.subject_id).second) {
      fail_validation("duplicate subject_id '" + subj.subject_id + "'");
    }
    for (const auto& s : subj.spectra) {
      if (s.meta.subject_id != subj.subject_id) {
        fail_validation("spectrum of '" + s.meta.subject_id + "' filed under subject '" +
                        subj.subject_id + "'");
      }
      if (s.meta.group != subj.group) {
        fail_validation("subject '" + subj.subject_id + "' has spectra with conflicting groups");
      }
      if (s.values.size() != grid_.size()) {
        fail_validation("spectrum of '" + subj.subject_id + "' has " + std::to_string(s.values.size()) +
                        " bands, cohort grid has " + std::to_string(grid_.size()));
      }
      for (double v : s.values) {
        if (!std::isfinite(v) || v < 0.0) {
          fail_validation("spectrum of '" + subj.subject_id + "' has a non-finite or negative value");
        }
      }
      if (s.meta.timepoint_index < 0) {
        fail_validation("negative timepoint_index for subject '" + subj.subject_id + "'");
      }
    }
  }
}

Cohort Cohort::from_spectra(WavelengthGrid grid, std::vector<MedianSpectrum> spectra) {
  std::vector<SubjectRecord> subjects;
  std::unordered_map<std::string, std::size_t> index;
  for (auto& s : spectra) {
    auto [it, inserted] = index.try_emplace(s.meta.subject_id, subjects.size());
    if (inserted) {
      SubjectRecord rec;
      rec.subject_id = s.meta.subject_id;
      rec.group = s.meta.group;
      subjects.push_back(std::move(rec));
    } else if (subjects[it->second].group != s.meta.group) {
      fail_validation("subject_id '" + s.meta.subject_id + "' appears with groups '" +
                      std::string(to_string(subjects[it->second].group)) + "' and '" +
                      std::string(to_string(s.meta.group)) + "'");
    }
    subjects[it->second].spectra.push_back(std::move(s));
  }
  for (auto& subj : subjects) subj.covariates = subject_covariates(subj.spectra);
  return Cohort(std::move(grid), std::move(subjects));
}

std::size_t Cohort::spectrum_count() const {
  std::size_t n = 0;
  for (const auto& s : subjects_) n += s.spectra.size();
  return n;
}

std::size_t Cohort::group_size(Group g) const {
  return static_cast<std::size_t>(
      std::count_if(subjects_.begin(), subjects_.end(), [g](const auto& s) { return s.group == g; }));
}

const SubjectRecord* Cohort::find(std::string_view subject_id) const {
  for (const auto& s : subjects_) {
    if (s.subject_id == subject_id) return &s;
  }
  return nullptr;
}

}  // namespace skinspec
