#include <algorithm>
#include <cmath>

#include "skinspec/error.hpp"
#include "skinspec/eval.hpp"
#include "skinspec/rng.hpp"

namespace skinspec::eval {

std::string_view to_string(SiteFilter v) {
  switch (v) {
    case SiteFilter::hand: return "hand";
    case SiteFilter::thigh: return "thigh";
    case SiteFilter::both: return "both";
  }
  return "?";
}
std::string_view to_string(TimepointFilter v) { return v == TimepointFilter::all ? "all" : "first"; }
std::string_view to_string(LabelMode v) { return v == LabelMode::binary ? "binary" : "multiclass"; }
std::string_view to_string(Aggregation v) { return v == Aggregation::mean ? "mean" : "majority"; }

SiteFilter parse_site_filter(std::string_view text) {
  if (text == "hand") return SiteFilter::hand;
  if (text == "thigh") return SiteFilter::thigh;
  if (text == "both") return SiteFilter::both;
  fail_validation("unknown site filter '" + std::string(text) + "' (expected hand, thigh or both)");
}

TimepointFilter parse_timepoint_filter(std::string_view text) {
  if (text == "all") return TimepointFilter::all;
  if (text == "first") return TimepointFilter::first;
  fail_validation("unknown timepoint filter '" + std::string(text) + "' (expected all or first)");
}

LabelMode parse_label_mode(std::string_view text) {
  if (text == "binary") return LabelMode::binary;
  if (text == "multiclass") return LabelMode::multiclass;
  fail_validation("unknown label mode '" + std::string(text) + "' (expected binary or multiclass)");
}

Aggregation parse_aggregation(std::string_view text) {
  if (text == "mean") return Aggregation::mean;
  if (text == "majority") return Aggregation::majority;
  fail_validation("unknown aggregation '" + std::string(text) + "' (expected mean or majority)");
}

int class_label(Group g, LabelMode mode) {
  if (mode == LabelMode::binary) return static_cast<int>(lda::relabel_binary(g));
  return static_cast<int>(index_of(g));
}

std::vector<int> class_labels(LabelMode mode) {
  if (mode == LabelMode::binary) return {0, 1};
  return {0, 1, 2};
}

void SplitPlan::validate(const Cohort& cohort) const {
  if (n_splits == 0) fail_validation("n_splits must be at least 1");
  if (!std::isfinite(classifier.gamma) || classifier.gamma < 0.0) {
    fail_validation("gamma must be finite and non-negative");
  }
  for (auto g : kAllGroups) {
    const auto want = test_counts[index_of(g)];
    const auto have = cohort.group_size(g);
    if (want == 0) fail_validation("test count for group " + std::string(to_string(g)) + " must be >= 1");
    if (want > have) {
      fail_validation("group " + std::string(to_string(g)) + " has " + std::to_string(have) +
                      " subjects, fewer than the test count " + std::to_string(want));
    }
  }
}

Split make_split(const Cohort& cohort, const SplitPlan& plan, std::size_t split_index) {
  Rng rng(derive_seed(plan.master_seed, split_index));
  Split split;
  split.index = split_index;
  const auto& subjects = cohort.subjects();
  for (auto g : kAllGroups) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < subjects.size(); ++i) {
      if (subjects[i].group == g) members.push_back(i);
    }
    const auto k = plan.test_counts[index_of(g)];
    if (k > members.size()) {
      fail_validation("group " + std::string(to_string(g)) + " has " + std::to_string(members.size()) +
                      " subjects, fewer than the test count " + std::to_string(k));
    }
    // Partial Fisher-Yates: the first k slots become the test draw.
    for (std::size_t i = 0; i < k; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(members.size() - i));
      std::swap(members[i], members[j]);
    }
    split.test.insert(split.test.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(k));
    split.train.insert(split.train.end(), members.begin() + static_cast<std::ptrdiff_t>(k), members.end());
  }
  std::sort(split.test.begin(), split.test.end());
  std::sort(split.train.begin(), split.train.end());

  const auto mode = plan.classifier.label_mode;
  for (int label : class_labels(mode)) {
    const bool present = std::any_of(split.train.begin(), split.train.end(), [&](std::size_t i) {
      return class_label(subjects[i].group, mode) == label;
    });
    if (!present) {
      throw SplitError("split " + std::to_string(split_index) + ": training set has no subject of class " +
                       std::to_string(label));
    }
  }
  return split;
}

}  // namespace skinspec::eval
