#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "skinspec/cohort.hpp"
#include "skinspec/eval.hpp"
#include "skinspec/summary.hpp"

namespace skinspec::confound {

enum class VariableKind { numeric, categorical };

struct GroupDescriptives {
  Group group = Group::healthy;
  std::size_t n = 0;  // subjects with a value
  // Numeric variables with n > 0 only.
  std::optional<Summary> stats;
  std::optional<double> sd;  // sample sd (n - 1); 0 for a single value
  // Categorical variables: subjects per level.
  std::map<std::string, std::size_t> levels;
};

struct SmdEntry {
  Group a = Group::healthy;
  Group b = Group::healthy;
  std::optional<double> value;
  std::string note;  // why value is empty
};

struct VariableReport {
  std::string variable;
  VariableKind kind = VariableKind::numeric;
  PerGroup<GroupDescriptives> groups;
  std::vector<SmdEntry> smd;  // numeric variables only
};

struct ConfounderReport {
  std::vector<VariableReport> variables;
  // Confounders with no recorded variable; only synthetic injection reaches them.
  std::vector<std::string> not_measured;
};

// Subject-level values of a variable. Numeric covariates are per-subject
// means over time; "software_version" is a categorical pseudo-variable
// (the subject's most frequent tag).
std::vector<std::string> list_variables(const Cohort& cohort);

// Per-group summary of subject-level values. Throws ValidationError for an
// unknown variable (no value anywhere in the cohort).
VariableReport descriptives(const Cohort& cohort, std::string_view variable);

// (mean_a - mean_b) / sqrt((sd_a^2 + sd_b^2) / 2) over subject-level values.
// Needs >= 2 values per group; 0 when both sds are 0 and the means agree;
// throws ValidationError when the pooled sd is 0 but the means differ.
double standardized_mean_difference(const Cohort& cohort, std::string_view variable, Group a, Group b);

// Descriptives for `variables` (all when empty) plus SMDs for every ordered
// pair (order[i], order[j]), i < j.
ConfounderReport confounder_report(const Cohort& cohort, const std::vector<std::string>& variables,
                                   const std::vector<Group>& order = {Group::healthy, Group::pancreatic,
                                                                      Group::sepsis});

nlohmann::json to_json(const ConfounderReport& report);
// variable,kind,group,n,mean,sd,min,q1,median,q3,max,levels
void write_descriptives_csv(const ConfounderReport& report, std::ostream& out);
// variable,group_a,group_b,smd,note
void write_smd_csv(const ConfounderReport& report, std::ostream& out);

struct TimelineEvent {
  Timestamp at;
  std::string subject_id;
};

struct GroupTimeline {
  Group group = Group::healthy;
  std::vector<TimelineEvent> events;  // ascending by time, then subject_id
  std::optional<Timestamp> first;
  std::optional<Timestamp> last;
};

struct TimelineOverlap {
  Group a = Group::healthy;
  Group b = Group::healthy;
  double days = 0.0;  // length of the intersection of [first, last] ranges
};

struct Timeline {
  PerGroup<GroupTimeline> groups;
  std::vector<TimelineOverlap> overlaps;
  std::vector<std::string> missing;  // "<subject_id>#<spectrum index>"
};

Timeline acquisition_timeline(const Cohort& cohort);
nlohmann::json to_json(const Timeline& timeline);
// group,subject_id,timestamp
void write_timeline_csv(const Timeline& timeline, std::ostream& out);

// Label of one spectrum for a separation test; nullopt drops the spectrum.
using SpectrumLabel = std::function<std::optional<bool>(const SubjectRecord&, const MedianSpectrum&)>;
using SubjectFilter = std::function<bool(const SubjectRecord&)>;

// Threshold labels: software_version compares dotted versions
// (numerically per component), acquired_at compares timestamps, numeric
// covariates compare values; all are "value >= cut". Categorical covariates
// test equality with `cut`.
SpectrumLabel threshold_label(std::string_view variable, std::string_view cut);
// Label by subject id; subjects not in the map are dropped.
SpectrumLabel subject_label(std::map<std::string, bool> labels);

struct SeparationOptions {
  std::size_t folds = 5;
  double gamma = lda::kDefaultGamma;
  lda::PriorsMode priors = lda::PriorsMode::uniform;
  std::uint64_t seed = 0;
};

struct SeparationResult {
  std::string variable;
  std::string label_definition;
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;
  std::size_t folds = 0;
  std::array<std::size_t, 2> subjects_per_label{};  // [false, true]
  std::array<std::size_t, 2> spectra_per_label{};
  std::vector<std::vector<std::string>> fold_subjects;  // held-out subjects per fold
};

// Subject-grouped stratified k-fold LDA separability of a binary label.
// Subjects are stratified by their majority label (ties count as true).
// Throws ValidationError when a label is absent or has fewer subjects than
// folds.
SeparationResult separation_test(const Cohort& cohort, const SubjectFilter& filter, const SpectrumLabel& label,
                                 const SeparationOptions& options, std::string variable = {},
                                 std::string label_definition = {});

nlohmann::json to_json(const SeparationResult& result);

}  // namespace skinspec::confound
