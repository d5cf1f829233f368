#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "skinspec/cohort.hpp"
#include "skinspec/cube.hpp"

namespace skinspec::synth {

// Gaussian pseudo-absorber: strength * exp(-(lambda - center)^2 / (2 width^2)).
struct ChromophoreBand {
  double center_nm = 0.0;
  double width_nm = 1.0;
  double strength = 1.0;

  double at(double lambda_nm) const;
};

struct Chromophore {
  std::string name;
  ChromophoreBand band;
  PerGroup<double> baseline{};     // concentration per group
  PerGroup<double> group_delta{};  // the real group effect
};

enum class EffectAction { tilt, concentration };

// An injected confounder. A fixed share of each group's subjects (rounded to
// the nearest count, chosen at random) receives the effect on all of its
// images.
struct ConfounderEffect {
  std::string name;
  PerGroup<double> fraction{};
  EffectAction action = EffectAction::tilt;
  double tilt_slope = 0.05;  // multiplicative tilt 1 + a (lambda - mid) / range
  std::string chromophore;   // for EffectAction::concentration
  double concentration_delta = 0.0;
  // When non-empty, affected spectra carry this software_version tag.
  std::string software_version;
};

struct NormalSpec {
  double mean = 0.0;
  double sd = 0.0;
};

// Group-conditional normal covariate. Dynamic covariates vary around the
// subject mean at every time point; a missing group spec means the variable
// is not recorded for that group.
struct CovariateModel {
  std::string name;
  bool dynamic = false;
  PerGroup<std::optional<NormalSpec>> per_group;
  double within_sd = 0.0;
  std::optional<double> min;
  std::optional<double> max;
};

struct CategoricalModel {
  std::string name;
  std::vector<std::string> levels;
  PerGroup<std::vector<double>> probabilities;  // per group, one per level
};

struct SyntheticConfig {
  WavelengthGrid grid;
  PerGroup<std::size_t> counts{25, 25, 25};
  PerGroup<std::pair<int, int>> timepoints{{{1, 1}, {10, 10}, {6, 9}}};  // inclusive range
  // Probability that the thigh image of a time point is missing.
  PerGroup<double> missing_thigh_probability{0.0, 0.0, 0.1};

  std::vector<Chromophore> chromophores;
  double subject_concentration_sd = 0.04;
  double image_concentration_sd = 0.01;
  double scattering_slope = 0.3;
  double scattering_sd = 0.01;
  double thigh_scattering_offset = 0.02;
  double illumination = 1.0;
  double illumination_jitter_sd = 0.01;
  double noise_sd = 0.01;

  std::vector<ConfounderEffect> confounders;
  std::vector<CovariateModel> covariates;
  std::vector<CategoricalModel> categorical;

  std::string base_date = "2019-06-01";
  PerGroup<int> enrollment_offset_days{0, 30, 60};
  PerGroup<int> enrollment_span_days{180, 180, 180};
  double hours_between_timepoints = 8.0;
  std::string software_version = "1.0";

  std::size_t cube_width = 32;
  std::size_t cube_height = 32;

  std::uint64_t master_seed = 0;

  // Throws ValidationError on negative sds, negative concentrations, bad
  // fractions or probabilities, unknown chromophore references.
  void validate() const;
};

// Default chromophore set: oxy-like pair near 540/575 nm, deoxy-like near
// 760 nm, water-like near 970 nm. No group effect, no confounders.
std::vector<Chromophore> default_chromophores();
std::vector<CovariateModel> default_covariates();
std::vector<CategoricalModel> default_categorical();
SyntheticConfig default_config();

// "separable", "null", "confounded", "balanced_confounder". Overrides are a
// JSON merge patch applied to the preset.
SyntheticConfig scenario(std::string_view name, const nlohmann::json& overrides = nlohmann::json::object());
std::vector<std::string> scenario_names();

nlohmann::json to_json(const SyntheticConfig& config);
SyntheticConfig config_from_json(const nlohmann::json& j);

// Latent parameters of one generated image.
struct LatentImage {
  std::vector<double> concentrations;  // one per chromophore
  double scattering = 0.0;
  double illumination = 1.0;
  double tilt_slope = 0.0;
};

struct GroundTruthRow {
  std::string spectrum_id;
  std::string effect;
  bool applied = false;
};

struct SyntheticCohort {
  Cohort cohort;
  // latents[s][i] belongs to cohort.subjects()[s].spectra[i].
  std::vector<std::vector<LatentImage>> latents;
  std::vector<GroundTruthRow> truth;
  std::size_t clamped_values = 0;
  std::size_t total_values = 0;
};

// R(l) = b exp(-sum_i c_i g_i(l) - s (l - l_min)/(l_max - l_min)) t(l) with
// t(l) = 1 + a (l - l_mid)/(l_max - l_min). Noise free.
std::vector<double> forward_model(const SyntheticConfig& config, const LatentImage& latent);

// Fully determined by config (including master_seed). Each spectrum is the
// forward model plus N(0, noise_sd) per band, clamped at 0 and rounded to
// float precision.
SyntheticCohort generate_cohort(const SyntheticConfig& config);

std::string spectrum_id(const MedianSpectrum& s, std::size_t index_within_subject);

// spectrum_id,effect,applied
void write_ground_truth_csv(const SyntheticCohort& cohort, std::ostream& out);

// Small cube whose masked pixels are per-pixel noisy (noise_sd) copies of the
// image's noise-free spectrum. The mask is an ellipse with a shaded notch
// removed; pixels outside it hold a dim background.
std::pair<HsiCube, AnnotationMask> generate_cube(const SyntheticConfig& config, const SyntheticCohort& cohort,
                                                 std::size_t subject_index, std::size_t image_index);

}  // namespace skinspec::synth
