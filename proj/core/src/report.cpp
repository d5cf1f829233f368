#include <charconv>
#include <map>
#include <ostream>

#include "skinspec/eval.hpp"

namespace skinspec::eval {
namespace {

std::string fmt(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

}  // namespace

nlohmann::json plan_to_json(const SplitPlan& plan) {
  return {
      {"n_splits", plan.n_splits},
      {"test_counts",
       {{"healthy", plan.test_counts[0]}, {"pancreatic", plan.test_counts[1]}, {"sepsis", plan.test_counts[2]}}},
      {"master_seed", plan.master_seed},
      {"site_filter", to_string(plan.site_filter)},
      {"test_timepoints", to_string(plan.test_timepoints)},
      {"gamma", plan.classifier.gamma},
      {"priors", lda::to_string(plan.classifier.priors)},
      {"label_mode", to_string(plan.classifier.label_mode)},
      {"aggregation", to_string(plan.aggregation)},
  };
}

nlohmann::json summary_to_json(const Summary& s) {
  return {{"count", s.count}, {"mean", s.mean},     {"min", s.min},
          {"q1", s.q1},       {"median", s.median}, {"q3", s.q3},
          {"max", s.max},     {"whisker_low", s.whisker_low}, {"whisker_high", s.whisker_high}};
}

nlohmann::json to_json(const EvalReport& report, bool include_splits) {
  nlohmann::json j;
  j["plan"] = plan_to_json(report.plan);
  auto summ = [](const std::optional<Summary>& s) { return s ? summary_to_json(*s) : nlohmann::json(); };
  j["summary"] = {{"accuracy", summ(report.accuracy)},
                  {"sensitivity", summ(report.sensitivity)},
                  {"specificity", summ(report.specificity)}};

  nlohmann::json skipped = nlohmann::json::array();
  std::map<std::string, std::size_t> exclusions;
  for (const auto& r : report.splits) {
    if (r.error) skipped.push_back({{"split_index", r.split_index}, {"reason", *r.error}});
    for (const auto& id : r.excluded) ++exclusions[id];
  }
  j["evaluated_splits"] = report.splits.size() - report.skipped.size();
  j["skipped_splits"] = std::move(skipped);
  nlohmann::json excl = nlohmann::json::array();
  for (const auto& [id, n] : exclusions) excl.push_back({{"subject_id", id}, {"splits_excluded", n}});
  j["excluded_patients"] = std::move(excl);

  if (include_splits) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.splits) {
      nlohmann::json row = {{"split_index", r.split_index},
                            {"accuracy", opt(r.accuracy)},
                            {"sensitivity", opt(r.sensitivity)},
                            {"specificity", opt(r.specificity)},
                            {"positives", r.positives},
                            {"negatives", r.negatives},
                            {"excluded", r.excluded}};
      nlohmann::json patients = nlohmann::json::array();
      for (const auto& p : r.patients) {
        patients.push_back({{"subject_id", p.subject_id},
                            {"group", to_string(p.group)},
                            {"images", p.images},
                            {"correct", p.correct},
                            {"score", p.score}});
      }
      row["patients"] = std::move(patients);
      if (r.error) row["error"] = *r.error;
      rows.push_back(std::move(row));
    }
    j["splits"] = std::move(rows);
  }
  return j;
}

void write_split_csv(const EvalReport& report, std::ostream& out) {
  out << "split_index,accuracy,sensitivity,specificity\n";
  for (const auto& r : report.splits) {
    out << r.split_index << ',' << fmt(r.accuracy) << ',' << fmt(r.sensitivity) << ','
        << fmt(r.specificity) << '\n';
  }
}

void write_boxplot_csv(const EvalReport& report, std::string_view setting, std::ostream& out, bool header) {
  if (header) out << "metric,setting,count,mean,min,whisker_low,q1,median,q3,whisker_high,max\n";
  const std::pair<const char*, const std::optional<Summary>*> rows[] = {
      {"accuracy", &report.accuracy}, {"sensitivity", &report.sensitivity}, {"specificity", &report.specificity}};
  for (const auto& [name, s] : rows) {
    if (!*s) continue;
    const Summary& v = **s;
    out << name << ',' << setting << ',' << v.count << ',' << fmt(v.mean) << ',' << fmt(v.min) << ','
        << fmt(v.whisker_low) << ',' << fmt(v.q1) << ',' << fmt(v.median) << ',' << fmt(v.q3) << ','
        << fmt(v.whisker_high) << ',' << fmt(v.max) << '\n';
  }
}

}  // namespace skinspec::eval
