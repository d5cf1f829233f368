#include "skinspec/synth.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "skinspec/error.hpp"
#include "skinspec/manifest.hpp"
#include "skinspec/rng.hpp"

namespace skinspec::synth {
namespace {

// Stream tags keep subject, assignment and pixel draws independent.
constexpr std::uint64_t kSubjectStream = 0x5375626a65637400ull;
constexpr std::uint64_t kAssignStream = 0x41737369676e0000ull;
constexpr std::uint64_t kCubeStream = 0x4375626500000000ull;

std::vector<std::vector<bool>> assign_confounders(const SyntheticConfig& config,
                                                  const std::vector<Group>& groups) {
  std::vector<std::vector<bool>> applied(config.confounders.size(), std::vector<bool>(groups.size(), false));
  for (std::size_t e = 0; e < config.confounders.size(); ++e) {
    for (auto g : kAllGroups) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < groups.size(); ++i) {
        if (groups[i] == g) members.push_back(i);
      }
      const double frac = config.confounders[e].fraction[index_of(g)];
      const auto take = static_cast<std::size_t>(std::llround(frac * static_cast<double>(members.size())));
      Rng rng(derive_seed(derive_seed(config.master_seed, kAssignStream + e), index_of(g)));
      rng.shuffle(members.begin(), members.end());
      for (std::size_t k = 0; k < std::min(take, members.size()); ++k) applied[e][members[k]] = true;
    }
  }
  return applied;
}

std::size_t chromophore_index(const SyntheticConfig& config, const std::string& name) {
  for (std::size_t i = 0; i < config.chromophores.size(); ++i) {
    if (config.chromophores[i].name == name) return i;
  }
  fail_validation("confounder refers to unknown chromophore '" + name + "'");
}

std::string subject_name(Group g, std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%03zu", static_cast<char>(std::toupper(to_string(g)[0])), n + 1);
  return buf;
}

}  // namespace

double ChromophoreBand::at(double lambda_nm) const {
  const double d = (lambda_nm - center_nm) / width_nm;
  return strength * std::exp(-0.5 * d * d);
}

void SyntheticConfig::validate() const {
  auto non_negative = [](double v, const std::string& what) {
    if (!std::isfinite(v) || v < 0.0) fail_validation(what + " must be finite and non-negative");
  };
  non_negative(subject_concentration_sd, "subject_concentration_sd");
  non_negative(image_concentration_sd, "image_concentration_sd");
  non_negative(scattering_sd, "scattering_sd");
  non_negative(illumination_jitter_sd, "illumination_jitter_sd");
  non_negative(noise_sd, "noise_sd");
  non_negative(illumination, "illumination");
  non_negative(hours_between_timepoints, "hours_between_timepoints");
  for (auto g : kAllGroups) {
    const auto [lo, hi] = timepoints[index_of(g)];
    if (lo < 1 || hi < lo) fail_validation("timepoint range must satisfy 1 <= min <= max");
    const double p = missing_thigh_probability[index_of(g)];
    if (!(p >= 0.0 && p <= 1.0)) fail_validation("missing_thigh_probability must lie in [0, 1]");
    if (enrollment_span_days[index_of(g)] < 0) fail_validation("enrollment_span_days must be >= 0");
  }
  for (const auto& c : chromophores) {
    if (!(c.band.width_nm > 0.0)) fail_validation("chromophore '" + c.name + "' needs a positive width");
    non_negative(c.band.strength, "chromophore strength");
    for (auto g : kAllGroups) {
      const double conc = c.baseline[index_of(g)] + c.group_delta[index_of(g)];
      if (!(c.baseline[index_of(g)] >= 0.0) || !(conc >= 0.0)) {
        fail_validation("chromophore '" + c.name + "' has a negative concentration");
      }
    }
  }
  for (const auto& e : confounders) {
    for (double f : e.fraction) {
      if (!(f >= 0.0 && f <= 1.0)) fail_validation("confounder '" + e.name + "' fraction must lie in [0, 1]");
    }
    if (e.action == EffectAction::concentration) chromophore_index(*this, e.chromophore);
  }
  for (const auto& c : covariates) {
    non_negative(c.within_sd, "covariate within_sd");
    for (const auto& spec : c.per_group) {
      if (spec) non_negative(spec->sd, "covariate sd");
    }
  }
  for (const auto& c : categorical) {
    for (const auto& probs : c.probabilities) {
      if (probs.size() != c.levels.size()) fail_validation("categorical '" + c.name + "' probability count mismatch");
      for (double p : probs) non_negative(p, "categorical probability");
    }
  }
  if (!parse_timestamp(base_date)) fail_validation("base_date must be a date");
  if (cube_width == 0 || cube_height == 0) fail_validation("cube dimensions must be positive");
}

std::vector<double> forward_model(const SyntheticConfig& config, const LatentImage& latent) {
  const auto& grid = config.grid;
  const double lo = grid.front(), hi = grid.back();
  const double range = hi > lo ? hi - lo : 1.0;
  const double mid = 0.5 * (lo + hi);
  std::vector<double> out(grid.size());
  for (std::size_t b = 0; b < grid.size(); ++b) {
    const double lambda = grid[b];
    double absorbance = latent.scattering * (lambda - lo) / range;
    for (std::size_t i = 0; i < config.chromophores.size(); ++i) {
      absorbance += latent.concentrations[i] * config.chromophores[i].band.at(lambda);
    }
    const double tilt = 1.0 + latent.tilt_slope * (lambda - mid) / range;
    out[b] = latent.illumination * std::exp(-absorbance) * tilt;
  }
  return out;
}

std::string spectrum_id(const MedianSpectrum& s, std::size_t index_within_subject) {
  return s.meta.subject_id + "/t" + std::to_string(s.meta.timepoint_index) + "/" +
         std::string(to_string(s.meta.site)) + "/" + std::to_string(index_within_subject);
}

SyntheticCohort generate_cohort(const SyntheticConfig& config) {
  config.validate();
  std::vector<Group> groups;
  std::vector<std::string> names;
  for (auto g : kAllGroups) {
    for (std::size_t n = 0; n < config.counts[index_of(g)]; ++n) {
      groups.push_back(g);
      names.push_back(subject_name(g, n));
    }
  }
  const auto applied = assign_confounders(config, groups);
  const auto base = *parse_timestamp(config.base_date);
  const std::size_t nchrom = config.chromophores.size();

  std::vector<SubjectRecord> subjects;
  std::vector<std::vector<LatentImage>> latents;
  std::vector<GroundTruthRow> truth;
  std::size_t clamped = 0, total = 0;

  for (std::size_t si = 0; si < groups.size(); ++si) {
    const Group g = groups[si];
    const auto gi = index_of(g);
    Rng rng(derive_seed(derive_seed(config.master_seed, kSubjectStream), si));

    std::vector<double> conc(nchrom);
    for (std::size_t c = 0; c < nchrom; ++c) {
      const auto& ch = config.chromophores[c];
      conc[c] = std::max(0.0, ch.baseline[gi] + ch.group_delta[gi] + config.subject_concentration_sd * rng.normal());
    }
    const double scattering = config.scattering_slope + config.scattering_sd * rng.normal();
    double tilt = 0.0;
    std::string version = config.software_version;
    for (std::size_t e = 0; e < config.confounders.size(); ++e) {
      if (!applied[e][si]) continue;
      const auto& eff = config.confounders[e];
      if (eff.action == EffectAction::tilt) {
        tilt += eff.tilt_slope;
      } else {
        auto& c = conc[chromophore_index(config, eff.chromophore)];
        c = std::max(0.0, c + eff.concentration_delta);
      }
      if (!eff.software_version.empty()) version = eff.software_version;
    }

    // Subject-level covariates.
    std::map<std::string, double> cov_mean;
    for (const auto& cm : config.covariates) {
      const auto& spec = cm.per_group[gi];
      if (spec) cov_mean[cm.name] = rng.normal(spec->mean, spec->sd);
    }
    std::map<std::string, std::string> cat;
    for (const auto& cm : config.categorical) {
      const auto& probs = cm.probabilities[gi];
      double total_p = 0.0;
      for (double p : probs) total_p += p;
      if (total_p <= 0.0 || cm.levels.empty()) continue;
      double u = rng.uniform() * total_p;
      std::size_t pick = cm.levels.size() - 1;
      for (std::size_t k = 0; k < probs.size(); ++k) {
        if (u < probs[k]) {
          pick = k;
          break;
        }
        u -= probs[k];
      }
      cat[cm.name] = cm.levels[pick];
    }

    const auto [tmin, tmax] = config.timepoints[gi];
    const int n_tp = tmin + static_cast<int>(rng.below(static_cast<std::uint64_t>(tmax - tmin + 1)));
    const int enroll_day = config.enrollment_offset_days[gi] +
                           static_cast<int>(rng.below(static_cast<std::uint64_t>(config.enrollment_span_days[gi] + 1)));
    const auto enrolled = base + std::chrono::days{enroll_day} + std::chrono::hours{8};

    SubjectRecord rec;
    rec.subject_id = names[si];
    rec.group = g;
    std::vector<LatentImage> subject_latents;
    for (int tp = 0; tp < n_tp; ++tp) {
      Covariates covs;
      covs.categorical = cat;
      for (const auto& cm : config.covariates) {
        auto it = cov_mean.find(cm.name);
        if (it == cov_mean.end()) continue;
        double v = cm.dynamic ? it->second + cm.within_sd * rng.normal() : it->second;
        if (cm.min) v = std::max(v, *cm.min);
        if (cm.max) v = std::min(v, *cm.max);
        covs.numeric[cm.name] = v;
      }
      const auto at = enrolled + std::chrono::seconds{static_cast<long long>(
                                     std::llround(config.hours_between_timepoints * 3600.0 * tp))};
      for (Site site : {Site::hand, Site::thigh}) {
        if (site == Site::thigh && rng.bernoulli(config.missing_thigh_probability[gi])) continue;
        LatentImage li;
        li.concentrations.resize(nchrom);
        for (std::size_t c = 0; c < nchrom; ++c) {
          li.concentrations[c] = std::max(0.0, conc[c] + config.image_concentration_sd * rng.normal());
        }
        li.scattering = scattering + (site == Site::thigh ? config.thigh_scattering_offset : 0.0);
        li.illumination = config.illumination * (1.0 + config.illumination_jitter_sd * rng.normal());
        li.tilt_slope = tilt;

        MedianSpectrum s;
        s.values = forward_model(config, li);
        for (auto& v : s.values) {
          if (config.noise_sd > 0.0) v += config.noise_sd * rng.normal();
          if (v < 0.0) {
            v = 0.0;
            ++clamped;
          }
          v = static_cast<double>(static_cast<float>(v));
          ++total;
        }
        s.meta.subject_id = rec.subject_id;
        s.meta.group = g;
        s.meta.site = site;
        s.meta.timepoint_index = tp;
        s.meta.acquired_at = std::chrono::floor<std::chrono::seconds>(at);
        s.meta.software_version = version;
        s.meta.covariates = covs;

        const std::string id = spectrum_id(s, rec.spectra.size());
        bool group_effect = false;
        for (const auto& ch : config.chromophores) group_effect |= ch.group_delta[gi] != 0.0;
        truth.push_back({id, "group_effect", group_effect});
        for (std::size_t e = 0; e < config.confounders.size(); ++e) {
          truth.push_back({id, config.confounders[e].name, static_cast<bool>(applied[e][si])});
        }
        rec.spectra.push_back(std::move(s));
        subject_latents.push_back(std::move(li));
      }
    }
    rec.covariates = subject_covariates(rec.spectra);
    subjects.push_back(std::move(rec));
    latents.push_back(std::move(subject_latents));
  }
  return SyntheticCohort{Cohort(config.grid, std::move(subjects)), std::move(latents), std::move(truth), clamped,
                         total};
}

void write_ground_truth_csv(const SyntheticCohort& cohort, std::ostream& out) {
  out << "spectrum_id,effect,applied\n";
  for (const auto& row : cohort.truth) {
    out << csv_escape(row.spectrum_id) << ',' << csv_escape(row.effect) << ',' << (row.applied ? "true" : "false")
        << '\n';
  }
}

std::pair<HsiCube, AnnotationMask> generate_cube(const SyntheticConfig& config, const SyntheticCohort& cohort,
                                                 std::size_t subject_index, std::size_t image_index) {
  const auto& latent = cohort.latents.at(subject_index).at(image_index);
  const auto truth = forward_model(config, latent);
  const std::size_t w = config.cube_width, h = config.cube_height;
  const std::size_t bands = config.grid.size();

  std::vector<std::uint8_t> bits(w * h, 0);
  const double cx = (static_cast<double>(w) - 1.0) / 2.0, cy = (static_cast<double>(h) - 1.0) / 2.0;
  const double rx = 0.45 * static_cast<double>(w), ry = 0.45 * static_cast<double>(h);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const double dx = (static_cast<double>(c) - cx) / rx, dy = (static_cast<double>(r) - cy) / ry;
      const bool inside = dx * dx + dy * dy <= 1.0;
      // Shaded corner notch excluded from the annotation.
      const bool shaded = static_cast<double>(c) > cx && static_cast<double>(r) < cy / 2.0;
      bits[r * w + c] = inside && !shaded;
    }
  }

  Rng rng(derive_seed(derive_seed(derive_seed(config.master_seed, kCubeStream), subject_index), image_index));
  std::vector<float> values(bands * w * h);
  for (std::size_t b = 0; b < bands; ++b) {
    for (std::size_t p = 0; p < w * h; ++p) {
      double v = bits[p] ? truth[b] : 0.1 * truth[b];
      if (config.noise_sd > 0.0) v += config.noise_sd * rng.normal();
      values[b * w * h + p] = static_cast<float>(std::max(0.0, v));
    }
  }
  return {HsiCube(w, h, config.grid, std::move(values)), AnnotationMask(w, h, std::move(bits))};
}

}  // namespace skinspec::synth
