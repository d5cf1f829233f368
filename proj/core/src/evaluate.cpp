#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <thread>

#include "skinspec/error.hpp"
#include "skinspec/eval.hpp"

namespace skinspec::eval {
namespace {

bool site_passes(Site s, SiteFilter f) {
  switch (f) {
    case SiteFilter::hand: return s == Site::hand;
    case SiteFilter::thigh: return s == Site::thigh;
    case SiteFilter::both: return true;
  }
  return false;
}

std::vector<const MedianSpectrum*> filtered_spectra(const SubjectRecord& subject, SiteFilter site,
                                                    TimepointFilter time) {
  std::vector<const MedianSpectrum*> out;
  for (const auto& s : subject.spectra) {
    if (site_passes(s.meta.site, site)) out.push_back(&s);
  }
  if (time == TimepointFilter::first && !out.empty()) {
    int first = std::numeric_limits<int>::max();
    for (const auto* s : out) first = std::min(first, s->meta.timepoint_index);
    std::erase_if(out, [first](const MedianSpectrum* s) { return s->meta.timepoint_index != first; });
  }
  return out;
}

double aggregate(std::size_t correct, std::size_t images, Aggregation how) {
  const double frac = static_cast<double>(correct) / static_cast<double>(images);
  if (how == Aggregation::mean) return frac;
  if (2 * correct > images) return 1.0;
  if (2 * correct < images) return 0.0;
  return 0.5;
}

}  // namespace

SplitResult evaluate_split(const Cohort& cohort, const Split& split, const SplitPlan& plan) {
  SplitResult result;
  result.split_index = split.index;
  const auto& subjects = cohort.subjects();
  const auto mode = plan.classifier.label_mode;

  std::vector<const MedianSpectrum*> train;
  std::vector<int> labels;
  for (auto i : split.train) {
    for (const auto* s : filtered_spectra(subjects[i], plan.site_filter, TimepointFilter::all)) {
      train.push_back(s);
      labels.push_back(class_label(subjects[i].group, mode));
    }
  }
  const auto bands = static_cast<Eigen::Index>(cohort.grid().size());
  Eigen::MatrixXd x(static_cast<Eigen::Index>(train.size()), bands);
  for (std::size_t r = 0; r < train.size(); ++r) {
    x.row(static_cast<Eigen::Index>(r)) = Eigen::Map<const Eigen::RowVectorXd>(train[r]->values.data(), bands);
  }

  lda::FitOptions options;
  options.gamma = plan.classifier.gamma;
  options.priors = plan.classifier.priors;
  options.classes = class_labels(mode);
  std::optional<lda::LdaModel> model;
  try {
    model.emplace(lda::fit_lda(x, labels, options));
  } catch (const ValidationError& e) {
    // A class without training images; numerical failures propagate.
    result.error = e.what();
    return result;
  }

  double sum_all = 0.0, sum_pos = 0.0, sum_neg = 0.0;
  for (auto i : split.test) {
    const auto& subj = subjects[i];
    const auto images = filtered_spectra(subj, plan.site_filter, plan.test_timepoints);
    if (images.empty()) {
      result.excluded.push_back(subj.subject_id);
      continue;
    }
    const int truth = class_label(subj.group, mode);
    PatientScore p;
    p.subject_id = subj.subject_id;
    p.group = subj.group;
    p.images = images.size();
    for (const auto* s : images) {
      if (model->predict(s->values) == truth) ++p.correct;
    }
    p.score = aggregate(p.correct, p.images, plan.aggregation);
    sum_all += p.score;
    if (subj.group == Group::sepsis) {
      sum_pos += p.score;
      ++result.positives;
    } else {
      sum_neg += p.score;
      ++result.negatives;
    }
    result.patients.push_back(std::move(p));
  }
  if (!result.patients.empty()) result.accuracy = sum_all / static_cast<double>(result.patients.size());
  if (result.positives > 0) result.sensitivity = sum_pos / static_cast<double>(result.positives);
  if (result.negatives > 0) result.specificity = sum_neg / static_cast<double>(result.negatives);
  return result;
}

EvalReport run_evaluation(const Cohort& cohort, const SplitPlan& plan, std::size_t workers) {
  plan.validate(cohort);
  EvalReport report;
  report.plan = plan;
  report.splits.resize(plan.n_splits);

  auto run_one = [&](std::size_t idx) {
    SplitResult r;
    try {
      r = evaluate_split(cohort, make_split(cohort, plan, idx), plan);
    } catch (const SplitError& e) {
      r = SplitResult{};
      r.error = e.what();
    }
    r.split_index = idx;
    report.splits[idx] = std::move(r);
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, plan.n_splits);
  if (workers <= 1) {
    for (std::size_t i = 0; i < plan.n_splits; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (;;) {
            const auto i = next.fetch_add(1);
            if (i >= plan.n_splits || failed.load()) return;
            try {
              run_one(i);
            } catch (...) {
              if (!failed.exchange(true)) failure = std::current_exception();
              return;
            }
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<double> acc, sens, spec;
  for (const auto& r : report.splits) {
    if (r.error) {
      report.skipped.push_back(r.split_index);
      continue;
    }
    if (r.accuracy) acc.push_back(*r.accuracy);
    if (r.sensitivity) sens.push_back(*r.sensitivity);
    if (r.specificity) spec.push_back(*r.specificity);
  }
  if (!acc.empty()) report.accuracy = summarize(acc);
  if (!sens.empty()) report.sensitivity = summarize(sens);
  if (!spec.empty()) report.specificity = summarize(spec);
  return report;
}

}  // namespace skinspec::eval
