#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "skinspec/cohort.hpp"
#include "skinspec/lda.hpp"
#include "skinspec/summary.hpp"

namespace skinspec::eval {

enum class SiteFilter { hand, thigh, both };
enum class TimepointFilter { all, first };
enum class LabelMode { binary, multiclass };
// How one patient's per-image correctness collapses to a patient score.
enum class Aggregation { mean, majority };

std::string_view to_string(SiteFilter v);
std::string_view to_string(TimepointFilter v);
std::string_view to_string(LabelMode v);
std::string_view to_string(Aggregation v);
SiteFilter parse_site_filter(std::string_view text);
TimepointFilter parse_timepoint_filter(std::string_view text);
LabelMode parse_label_mode(std::string_view text);
Aggregation parse_aggregation(std::string_view text);

struct ClassifierConfig {
  double gamma = lda::kDefaultGamma;
  lda::PriorsMode priors = lda::PriorsMode::empirical;
  LabelMode label_mode = LabelMode::binary;
};

struct SplitPlan {
  std::size_t n_splits = 1000;
  PerGroup<std::size_t> test_counts{5, 5, 5};
  std::uint64_t master_seed = 0;
  SiteFilter site_filter = SiteFilter::both;
  TimepointFilter test_timepoints = TimepointFilter::all;
  ClassifierConfig classifier;
  Aggregation aggregation = Aggregation::mean;

  // Throws ValidationError: n_splits == 0, a test count of zero or larger than
  // its group, or an invalid gamma.
  void validate(const Cohort& cohort) const;
};

// Class label an image of group `g` carries under `mode`: binary uses
// lda::BinaryLabel values, multiclass uses index_of(g).
int class_label(Group g, LabelMode mode);
std::vector<int> class_labels(LabelMode mode);

// Indices into cohort.subjects(), each list ascending.
struct Split {
  std::size_t index = 0;
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Per group, draws test_counts[g] subjects uniformly without replacement from
// the whole cohort (filters never change the draw). The draw depends only on
// (master_seed, split_index). Throws ValidationError when a group is too
// small and SplitError when training lacks a subject of some class.
Split make_split(const Cohort& cohort, const SplitPlan& plan, std::size_t split_index);

struct PatientScore {
  std::string subject_id;
  Group group = Group::healthy;
  std::size_t images = 0;
  std::size_t correct = 0;
  double score = 0.0;
};

struct SplitResult {
  std::size_t split_index = 0;
  std::vector<PatientScore> patients;
  // Test patients left without images after site/time filtering.
  std::vector<std::string> excluded;
  // Set when the split could not be evaluated; metrics are then empty.
  std::optional<std::string> error;
  std::optional<double> accuracy;
  std::optional<double> sensitivity;  // mean score over sepsis patients
  std::optional<double> specificity;  // mean score over non-sepsis patients
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

// Fits LDA on the training subjects (site filter applied, all time points)
// and scores the test subjects (site filter and test_timepoints applied).
// Split-level failures are recorded in `error`, not thrown.
SplitResult evaluate_split(const Cohort& cohort, const Split& split, const SplitPlan& plan);

struct EvalReport {
  SplitPlan plan;
  std::vector<SplitResult> splits;
  std::optional<Summary> accuracy;
  std::optional<Summary> sensitivity;
  std::optional<Summary> specificity;
  std::vector<std::size_t> skipped;  // indices of splits with an error
};

// Evaluates every split on `workers` threads (0 = hardware concurrency).
// The report is bitwise independent of the worker count.
EvalReport run_evaluation(const Cohort& cohort, const SplitPlan& plan, std::size_t workers = 1);

nlohmann::json plan_to_json(const SplitPlan& plan);
nlohmann::json summary_to_json(const Summary& s);
nlohmann::json to_json(const EvalReport& report, bool include_splits = false);

// split_index,accuracy,sensitivity,specificity (blank where undefined).
void write_split_csv(const EvalReport& report, std::ostream& out);
// metric,setting,count,mean,min,whisker_low,q1,median,q3,whisker_high,max
void write_boxplot_csv(const EvalReport& report, std::string_view setting, std::ostream& out,
                       bool header = true);

}  // namespace skinspec::eval
