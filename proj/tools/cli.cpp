#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "skinspec/confound.hpp"
#include "skinspec/cube_io.hpp"
#include "skinspec/error.hpp"
#include "skinspec/eval.hpp"
#include "skinspec/lda.hpp"
#include "skinspec/manifest.hpp"
#include "skinspec/synth.hpp"

namespace fs = std::filesystem;

namespace skinspec::cli {
namespace {

// Every command assembles its outputs in memory and only then writes them,
// so validation failures never leave partial files behind.
using FileSet = std::map<fs::path, std::string>;

void write_files(const fs::path& out_dir, const FileSet& files) {
  for (const auto& [rel, content] : files) {
    const fs::path p = out_dir / rel;
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    if (ec) fail_io("cannot create " + p.parent_path().string() + ": " + ec.message());
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) fail_io("cannot write " + p.string());
    f << content;
    if (!f) fail_io("failed writing " + p.string());
  }
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::vector<std::size_t> parse_counts(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const long v = std::stol(item, &pos);
      if (pos != item.size() || v < 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      fail_validation("'" + text + "' is not a comma-separated list of counts");
    }
  }
  if (out.size() != kGroupCount) fail_validation("expected three counts (healthy,pancreatic,sepsis), got '" + text + "'");
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct CohortPaths {
  fs::path manifest;
  fs::path root;
};

CohortPaths resolve_cohort(const std::string& cohort, const std::string& spectra_root) {
  CohortPaths p;
  p.manifest = fs::is_directory(cohort) ? fs::path(cohort) / "manifest.csv" : fs::path(cohort);
  p.root = spectra_root.empty() ? p.manifest.parent_path() : fs::path(spectra_root);
  return p;
}

std::size_t default_workers() {
  if (const char* env = std::getenv(kWorkersEnv)) {
    try {
      const long v = std::stol(env);
      if (v >= 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

// ---- synth -----------------------------------------------------------------

struct SynthArgs {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string out;
  std::string config;
  std::string counts;
  std::size_t cubes = 0;
};

void cmd_synth(const SynthArgs& a, std::ostream& out) {
  nlohmann::json patch = nlohmann::json::object();
  if (!a.config.empty()) {
    std::ifstream f(a.config);
    if (!f) fail_io("cannot open config " + a.config);
    try {
      patch = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
      fail_validation(a.config + ": " + e.what());
    }
  }
  patch["master_seed"] = a.seed;
  if (!a.counts.empty()) {
    const auto c = parse_counts(a.counts);
    patch["counts"] = {{"healthy", c[0]}, {"pancreatic", c[1]}, {"sepsis", c[2]}};
  }
  const auto config = synth::scenario(a.scenario, patch);
  const auto generated = synth::generate_cohort(config);

  const fs::path stage = fs::temp_directory_path() /
                         ("skinspec-synth-" + std::to_string(std::hash<std::string>{}(a.out)) + "-" +
                          std::to_string(a.seed));
  fs::remove_all(stage);
  save_cohort(generated.cohort, stage);
  FileSet files;
  for (const auto& entry : fs::recursive_directory_iterator(stage)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream f(entry.path(), std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    files[fs::relative(entry.path(), stage)] = ss.str();
  }
  fs::remove_all(stage);

  std::ostringstream truth;
  synth::write_ground_truth_csv(generated, truth);
  files["ground_truth.csv"] = truth.str();
  files["config.json"] = dump(synth::to_json(config));

  if (a.cubes > 0) {
    std::ostringstream meta;
    meta << "image";
    for (auto col : kManifestFixedColumns) {
      if (col != "spectrum_file") meta << ',' << col;
    }
    meta << '\n';
    std::size_t written = 0;
    const auto& subjects = generated.cohort.subjects();
    for (std::size_t s = 0; s < subjects.size() && written < a.cubes; ++s) {
      for (std::size_t i = 0; i < subjects[s].spectra.size() && written < a.cubes; ++i, ++written) {
        const auto [cube, mask] = synth::generate_cube(config, generated, s, i);
        char name[64];
        std::snprintf(name, sizeof name, "img%05zu", written);
        const fs::path tmp = fs::temp_directory_path() / ("skinspec-cube-" + std::to_string(a.seed) + ".hdr");
        save_cube(cube, tmp);
        save_mask(mask, fs::path(tmp).replace_extension(".mask"));
        for (const auto& [src, dst] : {std::pair{tmp, fs::path("cubes") / (std::string(name) + ".hdr")},
                                       std::pair{payload_path_for(tmp), fs::path("cubes") / (std::string(name) + ".raw")},
                                       std::pair{fs::path(tmp).replace_extension(".mask"),
                                                 fs::path("masks") / (std::string(name) + ".mask")}}) {
          std::ifstream f(src, std::ios::binary);
          std::ostringstream ss;
          ss << f.rdbuf();
          files[dst] = ss.str();
          fs::remove(src);
        }
        const auto& m = subjects[s].spectra[i].meta;
        meta << name << ',' << csv_escape(m.subject_id) << ',' << to_string(m.group) << ',' << to_string(m.site)
             << ',' << m.timepoint_index << ',' << (m.acquired_at ? format_timestamp(*m.acquired_at) : "") << ','
             << csv_escape(m.software_version) << '\n';
      }
    }
    files["cube_meta.csv"] = meta.str();
  }
  write_files(a.out, files);

  out << "synth: scenario " << a.scenario << ", " << generated.cohort.size() << " subjects, "
      << generated.cohort.spectrum_count() << " spectra -> " << a.out << '\n';
  if (generated.total_values > 0 &&
      static_cast<double>(generated.clamped_values) > 0.001 * static_cast<double>(generated.total_values)) {
    out << "synth: warning: " << generated.clamped_values << " of " << generated.total_values
        << " reflectance values were clamped at 0\n";
  }
}

// ---- extract ---------------------------------------------------------------

struct ExtractArgs {
  std::string cubes;
  std::string masks;
  std::string meta;
  std::string out;
};

void cmd_extract(const ExtractArgs& a, std::ostream& out) {
  if (!fs::is_directory(a.cubes)) fail_io("cube directory " + a.cubes + " does not exist");
  if (!fs::is_directory(a.masks)) fail_io("mask directory " + a.masks + " does not exist");
  std::vector<fs::path> headers;
  for (const auto& e : fs::directory_iterator(a.cubes)) {
    if (e.is_regular_file() && e.path().extension() == ".hdr") headers.push_back(e.path());
  }
  std::sort(headers.begin(), headers.end());
  if (headers.empty()) fail_validation("no .hdr cube headers in " + a.cubes);

  std::map<std::string, std::vector<std::string>> meta_rows;
  std::vector<std::string> meta_header;
  if (!a.meta.empty()) {
    std::ifstream f(a.meta);
    if (!f) fail_io("cannot open metadata " + a.meta);
    std::string line;
    if (!std::getline(f, line)) fail_validation(a.meta + ": empty file");
    meta_header = split_csv_line(line);
    if (meta_header.empty() || meta_header[0] != "image") fail_validation(a.meta + ": first column must be 'image'");
    while (std::getline(f, line)) {
      if (line.empty()) continue;
      auto fields = split_csv_line(line);
      if (fields.size() != meta_header.size()) fail_validation(a.meta + ": ragged row for '" + fields[0] + "'");
      meta_rows[fields[0]] = std::move(fields);
    }
    for (std::size_t i = 0; i + 1 < std::size(kManifestFixedColumns); ++i) {
      if (meta_header.size() <= i + 1 || meta_header[i + 1] != kManifestFixedColumns[i]) {
        fail_validation(a.meta + ": column " + std::to_string(i + 2) + " must be '" +
                        std::string(kManifestFixedColumns[i]) + "'");
      }
    }
  }

  FileSet files;
  std::ostringstream manifest, index;
  std::optional<WavelengthGrid> grid;
  if (!a.meta.empty()) {
    for (std::size_t i = 1; i < meta_header.size(); ++i) {
      if (i == std::size(kManifestFixedColumns)) manifest << ",spectrum_file";
      manifest << (i > 1 ? "," : "") << csv_escape(meta_header[i]);
    }
    if (meta_header.size() == std::size(kManifestFixedColumns)) manifest << ",spectrum_file";
    manifest << '\n';
  }
  index << "image,spectrum_file\n";

  for (const auto& hdr : headers) {
    const std::string stem = hdr.stem().string();
    const fs::path mask_path = fs::path(a.masks) / (stem + ".mask");
    if (!fs::exists(mask_path)) fail_io("missing mask file " + mask_path.string() + " for cube " + hdr.string());
    const auto cube = load_cube(hdr);
    const auto mask = load_mask(mask_path);
    if (grid && !(*grid == cube.grid())) fail_validation("cube " + hdr.string() + " uses a different wavelength grid");
    grid = cube.grid();
    MedianSpectrum spectrum;
    try {
      spectrum = median_spectrum(cube, mask, {});
    } catch (const ValidationError& e) {
      fail_validation(stem + ": " + e.what());
    }
    const std::string rel = "spectra/" + stem + ".txt";
    std::ostringstream body;
    for (double v : spectrum.values) {
      char buf[40];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
      body.write(buf, ptr - buf);
      body << '\n';
    }
    files[rel] = body.str();
    index << csv_escape(stem) << ',' << rel << '\n';
    if (!a.meta.empty()) {
      auto it = meta_rows.find(stem);
      if (it == meta_rows.end()) fail_validation(a.meta + ": no metadata row for image '" + stem + "'");
      const auto& row = it->second;
      for (std::size_t i = 1; i < row.size(); ++i) {
        if (i == std::size(kManifestFixedColumns)) manifest << ',' << rel;
        manifest << (i > 1 ? "," : "") << csv_escape(row[i]);
      }
      if (row.size() == std::size(kManifestFixedColumns)) manifest << ',' << rel;
      manifest << '\n';
    }
  }
  files["index.csv"] = index.str();
  if (!a.meta.empty()) files["manifest.csv"] = manifest.str();
  std::ostringstream wl;
  for (double c : grid->centers()) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, c);
    wl.write(buf, ptr - buf);
    wl << '\n';
  }
  files["wavelengths.txt"] = wl.str();
  write_files(a.out, files);
  out << "extract: " << headers.size() << " median spectra -> " << a.out << '\n';
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string cohort;
  std::string spectra_root;
  std::string out;
  std::size_t splits = 1000;
  std::uint64_t seed = 0;
  std::string test_counts = "5,5,5";
  std::string site = "both";
  std::string timepoints = "all";
  double gamma = lda::kDefaultGamma;
  std::string priors = "empirical";
  std::string labels = "binary";
  std::string aggregation = "mean";
  std::optional<std::size_t> workers;
  bool per_split = false;
};

void cmd_eval(const EvalArgs& a, std::ostream& out) {
  eval::SplitPlan plan;
  plan.n_splits = a.splits;
  plan.master_seed = a.seed;
  const auto counts = parse_counts(a.test_counts);
  std::copy(counts.begin(), counts.end(), plan.test_counts.begin());
  plan.site_filter = eval::parse_site_filter(a.site);
  plan.test_timepoints = eval::parse_timepoint_filter(a.timepoints);
  plan.classifier.gamma = a.gamma;
  plan.classifier.priors = lda::parse_priors_mode(a.priors);
  plan.classifier.label_mode = eval::parse_label_mode(a.labels);
  plan.aggregation = eval::parse_aggregation(a.aggregation);

  const auto paths = resolve_cohort(a.cohort, a.spectra_root);
  const auto cohort = load_cohort(paths.manifest, paths.root);
  plan.validate(cohort);
  const auto report = eval::run_evaluation(cohort, plan, a.workers.value_or(default_workers()));
  if (!report.accuracy) {
    throw NumericalError("no split could be evaluated (" + std::to_string(report.skipped.size()) + " skipped)");
  }

  FileSet files;
  files["report.json"] = dump(eval::to_json(report, a.per_split));
  std::ostringstream splits, box;
  eval::write_split_csv(report, splits);
  const std::string setting = std::string(eval::to_string(plan.site_filter)) + "/" +
                              std::string(eval::to_string(plan.test_timepoints));
  eval::write_boxplot_csv(report, setting, box);
  files["splits.csv"] = splits.str();
  files["boxplot.csv"] = box.str();
  write_files(a.out, files);

  auto line = [&](const char* name, const std::optional<Summary>& s) {
    out << "  " << name << ": ";
    if (s) {
      out << "mean " << s->mean << ", median " << s->median << " (n=" << s->count << ")\n";
    } else {
      out << "undefined\n";
    }
  };
  out << "eval: " << report.splits.size() - report.skipped.size() << " of " << report.splits.size()
      << " splits evaluated\n";
  line("accuracy", report.accuracy);
  line("sensitivity", report.sensitivity);
  line("specificity", report.specificity);
}

// ---- confound --------------------------------------------------------------

struct ConfoundArgs {
  std::string cohort;
  std::string spectra_root;
  std::string out;
  std::string variables;
  std::string groups = "healthy,pancreatic,sepsis";
  std::string separate;
  std::string cut;
  std::string subject_group;
  std::size_t folds = 5;
  double gamma = lda::kDefaultGamma;
  std::uint64_t seed = 0;
};

void cmd_confound(const ConfoundArgs& a, std::ostream& out) {
  std::vector<Group> order;
  for (const auto& g : split_list(a.groups)) order.push_back(parse_group(g));
  if (order.size() < 2) fail_validation("--groups needs at least two groups");
  std::optional<Group> only;
  if (!a.subject_group.empty()) only = parse_group(a.subject_group);
  if (!a.separate.empty() && a.cut.empty()) fail_validation("--separate requires --cut");

  const auto paths = resolve_cohort(a.cohort, a.spectra_root);
  const auto cohort = load_cohort(paths.manifest, paths.root);
  const auto report = confound::confounder_report(cohort, split_list(a.variables), order);
  const auto timeline = confound::acquisition_timeline(cohort);

  nlohmann::json j = confound::to_json(report);
  j["timeline"] = confound::to_json(timeline);

  FileSet files;
  if (!a.separate.empty()) {
    const auto known = confound::list_variables(cohort);
    if (a.separate != "acquired_at" && std::find(known.begin(), known.end(), a.separate) == known.end()) {
      fail_validation("unknown variable '" + a.separate + "'");
    }
    confound::SeparationOptions opts;
    opts.folds = a.folds;
    opts.gamma = a.gamma;
    opts.seed = a.seed;
    confound::SubjectFilter filter;
    if (only) filter = [g = *only](const SubjectRecord& s) { return s.group == g; };
    const auto sep = confound::separation_test(cohort, filter, confound::threshold_label(a.separate, a.cut), opts,
                                               a.separate, a.separate + " >= " + a.cut);
    j["separation"] = confound::to_json(sep);
    files["separation.json"] = dump(confound::to_json(sep));
    out << "confound: separation of " << a.separate << " at " << a.cut << ": mean cv accuracy "
        << sep.mean_accuracy << " over " << sep.folds << " folds\n";
  }

  std::ostringstream desc, smd, tl;
  confound::write_descriptives_csv(report, desc);
  confound::write_smd_csv(report, smd);
  confound::write_timeline_csv(timeline, tl);
  files["confounders.json"] = dump(j);
  files["descriptives.csv"] = desc.str();
  files["smd.csv"] = smd.str();
  files["timeline.csv"] = tl.str();
  write_files(a.out, files);
  out << "confound: " << report.variables.size() << " variables -> " << a.out << '\n';
}

// ---- project ---------------------------------------------------------------

struct ProjectArgs {
  std::string cohort;
  std::string spectra_root;
  std::string out;
  std::string labels = "multiclass";
  double gamma = lda::kDefaultGamma;
  std::string priors = "empirical";
};

void cmd_project(const ProjectArgs& a, std::ostream& out) {
  const auto mode = eval::parse_label_mode(a.labels);
  lda::FitOptions opts;
  opts.gamma = a.gamma;
  opts.priors = lda::parse_priors_mode(a.priors);
  opts.classes = eval::class_labels(mode);

  const auto paths = resolve_cohort(a.cohort, a.spectra_root);
  const auto cohort = load_cohort(paths.manifest, paths.root);
  std::vector<const MedianSpectrum*> all;
  std::vector<int> labels;
  for (const auto& s : cohort.subjects()) {
    for (const auto& sp : s.spectra) {
      all.push_back(&sp);
      labels.push_back(eval::class_label(s.group, mode));
    }
  }
  const auto b = static_cast<Eigen::Index>(cohort.grid().size());
  Eigen::MatrixXd x(static_cast<Eigen::Index>(all.size()), b);
  for (std::size_t i = 0; i < all.size(); ++i) {
    x.row(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::RowVectorXd>(all[i]->values.data(), b);
  }
  const auto model = lda::fit_lda(x, labels, opts);

  std::ostringstream csv, model_text;
  csv << "subject_id,group,site,timepoint_index";
  for (std::size_t c = 0; c < model.component_count(); ++c) csv << ",component_" << c + 1;
  csv << '\n';
  for (const auto* s : all) {
    const auto p = model.project(s->values);
    csv << csv_escape(s->meta.subject_id) << ',' << to_string(s->meta.group) << ',' << to_string(s->meta.site) << ','
        << s->meta.timepoint_index;
    for (Eigen::Index c = 0; c < p.size(); ++c) {
      char buf[40];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, p[c]);
      csv << ',' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
    }
    csv << '\n';
  }
  lda::save_model(model, model_text);
  write_files(a.out, {{"projection.csv", csv.str()}, {"model.txt", model_text.str()}});
  out << "project: " << all.size() << " spectra on " << model.component_count() << " components -> " << a.out
      << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"skinspec: hyperspectral skin-spectrum classification and confounder analysis"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic cohort from a scenario");
  synth->add_option("--scenario", synth_args.scenario, "separable | null | confounded | balanced_confounder")
      ->required();
  synth->add_option("--seed", synth_args.seed, "Master seed");
  synth->add_option("--out", synth_args.out, "Output directory")->required();
  synth->add_option("--config", synth_args.config, "JSON merge patch applied to the scenario config");
  synth->add_option("--counts", synth_args.counts, "Subjects per group: healthy,pancreatic,sepsis");
  synth->add_option("--cubes", synth_args.cubes, "Also write cube/mask pairs for the first N images");

  ExtractArgs extract_args;
  auto* extract = app.add_subcommand("extract", "Median spectra from cube + mask directories");
  extract->add_option("--cubes", extract_args.cubes, "Directory of <name>.hdr/.raw cubes")->required();
  extract->add_option("--masks", extract_args.masks, "Directory of <name>.mask rasters")->required();
  extract->add_option("--meta", extract_args.meta, "CSV keyed by image name with manifest metadata columns");
  extract->add_option("--out", extract_args.out, "Output directory")->required();

  EvalArgs eval_args;
  auto* ev = app.add_subcommand("eval", "Bootstrap-subsampling LDA evaluation");
  ev->add_option("--cohort", eval_args.cohort, "Manifest CSV or directory containing manifest.csv")->required();
  ev->add_option("--spectra-root", eval_args.spectra_root, "Base directory for spectrum_file paths");
  ev->add_option("--out", eval_args.out, "Output directory")->required();
  ev->add_option("--splits", eval_args.splits, "Number of train/test splits")->check(CLI::PositiveNumber);
  ev->add_option("--seed", eval_args.seed, "Master seed");
  ev->add_option("--test-counts", eval_args.test_counts, "Test subjects per group: healthy,pancreatic,sepsis");
  ev->add_option("--site", eval_args.site, "hand | thigh | both")->check(CLI::IsMember({"hand", "thigh", "both"}));
  ev->add_option("--timepoints", eval_args.timepoints, "Test time points: all | first")
      ->check(CLI::IsMember({"all", "first"}));
  ev->add_option("--gamma", eval_args.gamma, "Shrinkage intensity")->check(CLI::NonNegativeNumber);
  ev->add_option("--priors", eval_args.priors, "empirical | uniform")
      ->check(CLI::IsMember({"empirical", "uniform"}));
  ev->add_option("--labels", eval_args.labels, "binary | multiclass")->check(CLI::IsMember({"binary", "multiclass"}));
  ev->add_option("--aggregation", eval_args.aggregation, "Patient aggregation: mean | majority")
      ->check(CLI::IsMember({"mean", "majority"}));
  ev->add_option("--workers", eval_args.workers,
                 std::string("Worker threads (default $") + kWorkersEnv + " or 1; 0 = all cores)");
  ev->add_flag("--per-split", eval_args.per_split, "Include the per-split table in report.json");

  ConfoundArgs conf_args;
  auto* conf = app.add_subcommand("confound", "Confounder descriptives, SMDs, timeline and separation test");
  conf->add_option("--cohort", conf_args.cohort, "Manifest CSV or directory containing manifest.csv")->required();
  conf->add_option("--spectra-root", conf_args.spectra_root, "Base directory for spectrum_file paths");
  conf->add_option("--out", conf_args.out, "Output directory")->required();
  conf->add_option("--variables", conf_args.variables, "Comma-separated variables (default: all)");
  conf->add_option("--groups", conf_args.groups, "Group order for SMD pairs");
  conf->add_option("--separate", conf_args.separate, "Variable whose threshold label is tested for separability");
  conf->add_option("--cut", conf_args.cut, "Threshold for --separate (label = value >= cut)");
  conf->add_option("--subject-group", conf_args.subject_group, "Restrict the separation test to one group");
  conf->add_option("--folds", conf_args.folds, "Cross-validation folds")->check(CLI::Range(2, 1000));
  conf->add_option("--gamma", conf_args.gamma, "Shrinkage intensity")->check(CLI::NonNegativeNumber);
  conf->add_option("--seed", conf_args.seed, "Fold assignment seed");

  ProjectArgs proj_args;
  auto* proj = app.add_subcommand("project", "Fit LDA on the whole cohort and emit projected coordinates");
  proj->add_option("--cohort", proj_args.cohort, "Manifest CSV or directory containing manifest.csv")->required();
  proj->add_option("--spectra-root", proj_args.spectra_root, "Base directory for spectrum_file paths");
  proj->add_option("--out", proj_args.out, "Output directory")->required();
  proj->add_option("--labels", proj_args.labels, "binary | multiclass")
      ->check(CLI::IsMember({"binary", "multiclass"}));
  proj->add_option("--gamma", proj_args.gamma, "Shrinkage intensity")->check(CLI::NonNegativeNumber);
  proj->add_option("--priors", proj_args.priors, "empirical | uniform")
      ->check(CLI::IsMember({"empirical", "uniform"}));

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return kUsage;
  }

  try {
    if (synth->parsed()) cmd_synth(synth_args, out);
    if (extract->parsed()) cmd_extract(extract_args, out);
    if (ev->parsed()) cmd_eval(eval_args, out);
    if (conf->parsed()) cmd_confound(conf_args, out);
    if (proj->parsed()) cmd_project(proj_args, out);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kDataValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataValidation;
  }
  return kSuccess;
}

}  // namespace skinspec::cli
