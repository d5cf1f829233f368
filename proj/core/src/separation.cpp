#include <algorithm>
#include <charconv>

#include "skinspec/confound.hpp"
#include "skinspec/error.hpp"
#include "skinspec/rng.hpp"

namespace skinspec::confound {
namespace {

std::vector<std::string> split_version(std::string_view v) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto dot = v.find('.', start);
    const auto end = dot == std::string_view::npos ? v.size() : dot;
    parts.emplace_back(v.substr(start, end - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return parts;
}

std::optional<long long> as_integer(const std::string& s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// Negative, zero or positive like strcmp.
int compare_versions(std::string_view a, std::string_view b) {
  const auto pa = split_version(a);
  const auto pb = split_version(b);
  for (std::size_t i = 0; i < std::max(pa.size(), pb.size()); ++i) {
    const std::string x = i < pa.size() ? pa[i] : "0";
    const std::string y = i < pb.size() ? pb[i] : "0";
    const auto nx = as_integer(x), ny = as_integer(y);
    if (nx && ny) {
      if (*nx != *ny) return *nx < *ny ? -1 : 1;
    } else if (x != y) {
      return x < y ? -1 : 1;
    }
  }
  return 0;
}

}  // namespace

SpectrumLabel threshold_label(std::string_view variable, std::string_view cut) {
  const std::string var(variable);
  const std::string threshold(cut);
  if (var == "software_version") {
    return [threshold](const SubjectRecord&, const MedianSpectrum& s) -> std::optional<bool> {
      if (s.meta.software_version.empty()) return std::nullopt;
      return compare_versions(s.meta.software_version, threshold) >= 0;
    };
  }
  if (var == "acquired_at") {
    const auto t = parse_timestamp(threshold);
    if (!t) fail_validation("acquired_at cut must be a timestamp");
    return [t](const SubjectRecord&, const MedianSpectrum& s) -> std::optional<bool> {
      if (!s.meta.acquired_at) return std::nullopt;
      return *s.meta.acquired_at >= *t;
    };
  }
  double numeric_cut = 0.0;
  auto [ptr, ec] = std::from_chars(threshold.data(), threshold.data() + threshold.size(), numeric_cut);
  const bool numeric = !threshold.empty() && ec == std::errc{} && ptr == threshold.data() + threshold.size();
  return [var, threshold, numeric, numeric_cut](const SubjectRecord&,
                                                const MedianSpectrum& s) -> std::optional<bool> {
    const auto& cov = s.meta.covariates;
    if (auto it = cov.numeric.find(var); it != cov.numeric.end()) {
      if (!numeric) fail_validation("cut '" + threshold + "' for numeric variable '" + var + "' is not a number");
      return it->second >= numeric_cut;
    }
    if (auto it = cov.categorical.find(var); it != cov.categorical.end()) return it->second == threshold;
    return std::nullopt;
  };
}

SpectrumLabel subject_label(std::map<std::string, bool> labels) {
  return [labels = std::move(labels)](const SubjectRecord& subj, const MedianSpectrum&) -> std::optional<bool> {
    auto it = labels.find(subj.subject_id);
    if (it == labels.end()) return std::nullopt;
    return it->second;
  };
}

SeparationResult separation_test(const Cohort& cohort, const SubjectFilter& filter, const SpectrumLabel& label,
                                 const SeparationOptions& options, std::string variable,
                                 std::string label_definition) {
  if (options.folds < 2) fail_validation("separation test needs at least 2 folds");

  struct Unit {
    const SubjectRecord* subject;
    std::vector<std::pair<const MedianSpectrum*, bool>> spectra;
    bool majority;
  };
  std::vector<Unit> units;
  SeparationResult result;
  result.variable = std::move(variable);
  result.label_definition = std::move(label_definition);
  result.folds = options.folds;

  for (const auto& subj : cohort.subjects()) {
    if (filter && !filter(subj)) continue;
    Unit u{&subj, {}, false};
    std::size_t positives = 0;
    for (const auto& s : subj.spectra) {
      const auto l = label(subj, s);
      if (!l) continue;
      u.spectra.emplace_back(&s, *l);
      positives += *l ? 1 : 0;
      ++result.spectra_per_label[*l ? 1 : 0];
    }
    if (u.spectra.empty()) continue;
    u.majority = 2 * positives >= u.spectra.size();
    ++result.subjects_per_label[u.majority ? 1 : 0];
    units.push_back(std::move(u));
  }
  for (int l = 0; l < 2; ++l) {
    if (result.subjects_per_label[l] == 0) {
      fail_validation(std::string("separation test: label ") + (l ? "true" : "false") + " is absent");
    }
    if (result.subjects_per_label[l] < options.folds) {
      fail_validation("separation test: label " + std::string(l ? "true" : "false") + " has " +
                      std::to_string(result.subjects_per_label[l]) + " subjects, fewer than " +
                      std::to_string(options.folds) + " folds");
    }
  }

  // Stratified round-robin dealing of shuffled subjects into folds.
  std::vector<std::size_t> fold_of(units.size());
  std::size_t dealt = 0;
  for (int l = 0; l < 2; ++l) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < units.size(); ++i) {
      if (units[i].majority == (l == 1)) members.push_back(i);
    }
    Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(l)));
    rng.shuffle(members.begin(), members.end());
    for (auto i : members) fold_of[i] = dealt++ % options.folds;
  }

  const auto bands = static_cast<Eigen::Index>(cohort.grid().size());
  lda::FitOptions fit;
  fit.gamma = options.gamma;
  fit.priors = options.priors;
  fit.classes = {0, 1};
  result.fold_subjects.resize(options.folds);
  for (std::size_t f = 0; f < options.folds; ++f) {
    std::vector<const MedianSpectrum*> train;
    std::vector<int> labels;
    for (std::size_t i = 0; i < units.size(); ++i) {
      if (fold_of[i] == f) continue;
      for (const auto& [s, l] : units[i].spectra) {
        train.push_back(s);
        labels.push_back(l ? 1 : 0);
      }
    }
    Eigen::MatrixXd x(static_cast<Eigen::Index>(train.size()), bands);
    for (std::size_t r = 0; r < train.size(); ++r) {
      x.row(static_cast<Eigen::Index>(r)) = Eigen::Map<const Eigen::RowVectorXd>(train[r]->values.data(), bands);
    }
    const auto model = lda::fit_lda(x, labels, fit);

    double sum = 0.0;
    std::size_t patients = 0;
    for (std::size_t i = 0; i < units.size(); ++i) {
      if (fold_of[i] != f) continue;
      result.fold_subjects[f].push_back(units[i].subject->subject_id);
      std::size_t correct = 0;
      for (const auto& [s, l] : units[i].spectra) {
        if (model.predict(s->values) == (l ? 1 : 0)) ++correct;
      }
      sum += static_cast<double>(correct) / static_cast<double>(units[i].spectra.size());
      ++patients;
    }
    result.fold_accuracy.push_back(sum / static_cast<double>(patients));
  }
  double total = 0.0;
  for (double a : result.fold_accuracy) total += a;
  result.mean_accuracy = total / static_cast<double>(result.fold_accuracy.size());
  return result;
}

nlohmann::json to_json(const SeparationResult& r) {
  return {{"variable", r.variable},
          {"label_definition", r.label_definition},
          {"folds", r.folds},
          {"fold_accuracy", r.fold_accuracy},
          {"mean_accuracy", r.mean_accuracy},
          {"subjects_per_label", {{"false", r.subjects_per_label[0]}, {"true", r.subjects_per_label[1]}}},
          {"spectra_per_label", {{"false", r.spectra_per_label[0]}, {"true", r.spectra_per_label[1]}}},
          {"fold_subjects", r.fold_subjects}};
}

}  // namespace skinspec::confound
