// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "skinspec/confound.hpp"
#include "skinspec/eval.hpp"
#include "skinspec/lda.hpp"
#include "skinspec/synth.hpp"
#include "support.hpp"

namespace {

using namespace skinspec;
using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  failures += !ok;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Eigen::MatrixXd to_eigen(const test::Dense& d) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d[0].size()));
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d[i].size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d[i][j];
  return m;
}

void lda_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(1);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  std::size_t mismatches = 0, instances = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t k = 2 + rep % 2;
    const std::size_t b = 1 + rep % 8;
    const std::size_t n = 2 * k + static_cast<std::size_t>(rep * 7) % (51 - 2 * k);
    const auto inst = test::random_instance(gen, n, b, k);
    lda::FitOptions opts;
    opts.gamma = 1e-3;
    const auto model = lda::fit_lda(to_eigen(inst.x), inst.y, opts);
    const auto oracle = test::scatter_oracle(inst.x, inst.y, 1e-3);
    const auto expected = test::whitened_eigenvalues(oracle);
    for (std::size_t i = 0; i < model.component_count(); ++i) {
      const double got = model.eigenvalues()[static_cast<Eigen::Index>(i)];
      worst = std::max(worst, std::abs(got - expected[i]) / std::abs(expected[i]));
    }
    const auto& p = model.parts().priors;
    const std::vector<double> priors(p.data(), p.data() + p.size());
    for (int t = 0; t < 1000; ++t) {
      std::vector<double> x(b);
      for (auto& v : x) v = 3.0 * normal(gen);
      mismatches += model.predict(x) != test::oracle_predict(oracle, priors, x);
    }
    ++instances;
  }
  const double secs = seconds_since(t0);
  report(1, worst <= 1e-8 && mismatches == 0 && secs < 10.0,
         fmt("LDA oracle over %.0f instances: max relative eigenvalue error %.3g, %.0f argmax mismatches, %.2f s",
             static_cast<double>(instances), worst, static_cast<double>(mismatches), secs));
}

void median_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(1);
  std::size_t bad = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t w = 8 + rep % 25, h = 8 + rep % 17, b = 1 + rep % 100;
    const auto cube = test::random_cube(gen, w, h, b);
    const auto mask = test::random_mask(gen, w, h);
    bad += median_spectrum(cube, mask, {}).values != test::sort_median(cube, mask);
  }
  const double secs = seconds_since(t0);
  report(2, bad == 0 && secs < 5.0,
         fmt("median oracle over 100 cubes: %.0f mismatching cubes, %.2f s", static_cast<double>(bad), secs));
}

Cohort scenario_cohort(const std::string& name) {
  return synth::generate_cohort(synth::scenario(name, {{"master_seed", 1}})).cohort;
}

eval::SplitPlan acceptance_plan() {
  eval::SplitPlan plan;
  plan.n_splits = 1000;
  plan.test_counts = {5, 5, 5};
  plan.master_seed = 1;
  plan.classifier.priors = lda::PriorsMode::uniform;
  return plan;
}

// Worst deviation from accuracy = (P * sens + N * spec) / (P + N) over evaluated splits.
double identity_gap(const eval::EvalReport& r, std::size_t& checked) {
  double worst = 0.0;
  for (const auto& s : r.splits) {
    if (!s.accuracy) continue;
    const double p = static_cast<double>(s.positives), n = static_cast<double>(s.negatives);
    const double combined = (p * s.sensitivity.value_or(0.0) + n * s.specificity.value_or(0.0)) / (p + n);
    worst = std::max(worst, std::abs(*s.accuracy - combined));
    ++checked;
  }
  return worst;
}

std::map<std::string, eval::EvalReport> pipeline_runs() {
  std::map<std::string, eval::EvalReport> reports;

  const auto t0 = Clock::now();
  reports["separable"] = eval::run_evaluation(scenario_cohort("separable"), acceptance_plan(), 1);
  const double secs = seconds_since(t0);
  const auto& sep = reports["separable"];
  const double acc = sep.accuracy ? sep.accuracy->mean : NAN;
  const double sens = sep.sensitivity ? sep.sensitivity->mean : NAN;
  const double spec = sep.specificity ? sep.specificity->mean : NAN;
  report(3, acc >= 0.95 && sens >= 0.90 && spec >= 0.95 && secs < 60.0,
         fmt("separable: accuracy %.4f, sensitivity %.4f, specificity %.4f, %.1f s on 1 worker", acc, sens, spec,
             secs));

  reports["null"] = eval::run_evaluation(scenario_cohort("null"), acceptance_plan(), 1);
  const auto& nul = reports["null"];
  const double null_acc = nul.accuracy ? nul.accuracy->mean : NAN;
  report(4, null_acc >= 0.45 && null_acc <= 0.55, fmt("null: accuracy %.4f", null_acc));

  reports["confounded"] = eval::run_evaluation(scenario_cohort("confounded"), acceptance_plan(), 1);
  reports["balanced_confounder"] = eval::run_evaluation(scenario_cohort("balanced_confounder"), acceptance_plan(), 1);
  const auto& c = reports["confounded"];
  const auto& bal = reports["balanced_confounder"];
  const double ca = c.accuracy ? c.accuracy->mean : NAN;
  const double ba = bal.accuracy ? bal.accuracy->mean : NAN;
  report(5, ca >= 0.90 && ba <= 0.60 && ca - ba >= 0.30,
         fmt("confounded accuracy %.4f, balanced_confounder accuracy %.4f, gap %.4f", ca, ba, ca - ba));
  return reports;
}

void separation() {
  auto cfg = synth::scenario("confounded", {{"master_seed", 1}});
  cfg.confounders.at(0).fraction = {0.0, 0.0, 0.48};
  const auto cohort = synth::generate_cohort(cfg).cohort;
  const confound::SubjectFilter sepsis = [](const SubjectRecord& s) { return s.group == Group::sepsis; };
  confound::SeparationOptions opts;
  opts.seed = 1;
  const auto real = confound::separation_test(cohort, sepsis, confound::threshold_label("software_version", "2.0"), opts);

  std::vector<std::string> ids;
  std::vector<bool> labels;
  for (const auto& s : cohort.subjects()) {
    if (s.group != Group::sepsis) continue;
    ids.push_back(s.subject_id);
    labels.push_back(s.spectra.at(0).meta.software_version == "2.0");
  }
  std::mt19937_64 gen(1);
  std::shuffle(labels.begin(), labels.end(), gen);
  std::map<std::string, bool> shuffled;
  for (std::size_t i = 0; i < ids.size(); ++i) shuffled[ids[i]] = labels[i];
  const auto null = confound::separation_test(cohort, sepsis, confound::subject_label(shuffled), opts);

  report(6, real.mean_accuracy >= 0.90 && null.mean_accuracy >= 0.35 && null.mean_accuracy <= 0.65,
         fmt("sepsis-only 48%% tilt: cv accuracy %.4f (%.0f of %.0f subjects tilted); shuffled labels %.4f",
             real.mean_accuracy, static_cast<double>(real.subjects_per_label[1]), static_cast<double>(ids.size()),
             null.mean_accuracy));
}

void determinism() {
  test::TempDir tmp;
  std::ostringstream out, err;
  const auto cohort = (tmp.path() / "cohort").string();
  bool ok = cli::run({"skinspec", "synth", "--scenario", "separable", "--seed", "1", "--out", cohort}, out, err) == 0;
  std::vector<std::string> reports;
  for (int run = 0; run < 2; ++run) {
    for (const char* workers : {"1", "8"}) {
      const auto dir = tmp.path() / ("eval-" + std::to_string(run) + "-" + workers);
      ok = ok && cli::run({"skinspec", "eval", "--cohort", cohort, "--splits", "200", "--seed", "1", "--workers",
                           workers, "--per-split", "--out", dir.string()},
                          out, err) == 0;
      reports.push_back(test::read_file(dir / "report.json"));
    }
  }
  bool same = ok && !reports[0].empty();
  for (const auto& r : reports) same = same && r == reports[0];
  report(7, same,
         fmt("eval report.json at 1 and 8 workers over 2 runs, %.0f bytes: ", static_cast<double>(reports[0].size())) +
             (same ? "bitwise identical" : "differs " + err.str()));
}

void aggregation_identity(const std::map<std::string, eval::EvalReport>& reports) {
  double worst = 0.0;
  std::size_t checked = 0;
  for (const auto& [name, r] : reports) worst = std::max(worst, identity_gap(r, checked));
  report(8, checked > 0 && worst <= 1e-12,
         fmt("accuracy identity over %.0f evaluated splits: max deviation %.3g", static_cast<double>(checked), worst));
}

}  // namespace

int main() {
  lda_oracle();
  median_oracle();
  const auto reports = pipeline_runs();
  separation();
  determinism();
  aggregation_identity(reports);
  std::printf("%s: %d of 8 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
