#include <algorithm>

#include "skinspec/error.hpp"
#include "skinspec/synth.hpp"

namespace skinspec::synth {
namespace {

using nlohmann::json;

template <typename T>
json per_group_json(const PerGroup<T>& v) {
  return {{"healthy", v[0]}, {"pancreatic", v[1]}, {"sepsis", v[2]}};
}

template <typename T>
PerGroup<T> per_group_from(const json& j, const PerGroup<T>& fallback) {
  PerGroup<T> out = fallback;
  if (j.is_null()) return out;
  if (!j.is_object()) fail_validation("expected an object keyed by group name");
  for (auto g : kAllGroups) {
    const std::string key(to_string(g));
    if (j.contains(key)) out[index_of(g)] = j.at(key).get<T>();
  }
  for (const auto& [k, v] : j.items()) parse_group(k);
  return out;
}

json normal_json(const std::optional<NormalSpec>& n) {
  if (!n) return nullptr;
  return {{"mean", n->mean}, {"sd", n->sd}};
}

std::optional<NormalSpec> normal_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return NormalSpec{j.value("mean", 0.0), j.value("sd", 0.0)};
}

std::optional<double> opt_double(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

Chromophore chromophore(std::string name, double center, double width, double baseline) {
  Chromophore c;
  c.name = std::move(name);
  c.band = {center, width, 1.0};
  c.baseline = {baseline, baseline, baseline};
  c.group_delta = {0.0, 0.0, 0.0};
  return c;
}

CovariateModel covariate(std::string name, bool dynamic, PerGroup<std::optional<NormalSpec>> groups,
                         double within_sd, std::optional<double> min = std::nullopt,
                         std::optional<double> max = std::nullopt) {
  return {std::move(name), dynamic, groups, within_sd, min, max};
}

Chromophore& find_chromophore(SyntheticConfig& c, std::string_view name) {
  for (auto& ch : c.chromophores) {
    if (ch.name == name) return ch;
  }
  fail_validation("no chromophore named '" + std::string(name) + "'");
}

}  // namespace

std::vector<Chromophore> default_chromophores() {
  return {chromophore("oxy_a", 542.0, 12.0, 0.6), chromophore("oxy_b", 577.0, 12.0, 0.6),
          chromophore("deoxy", 760.0, 20.0, 0.3), chromophore("water", 970.0, 30.0, 0.4)};
}

// Shapes loosely follow the group differences seen in practice (healthy
// volunteers younger, septic patients anaemic and on vasopressors).
std::vector<CovariateModel> default_covariates() {
  using N = NormalSpec;
  const std::optional<N> none;
  return {
      covariate("age", false, {N{32, 9}, N{64, 10}, N{67, 12}}, 0.0, 18.0, 95.0),
      covariate("BMI", false, {N{24, 3}, N{26, 4}, N{28, 6}}, 0.0, 15.0, 60.0),
      covariate("MAP", true, {N{90, 8}, N{80, 10}, N{74, 9}}, 5.0, 40.0, 140.0),
      covariate("spO2", true, {N{98, 1}, N{97, 1.5}, N{95, 2.5}}, 1.0, 70.0, 100.0),
      covariate("Hb", true, {none, N{12.5, 1.5}, N{9.5, 1.5}}, 0.4, 4.0, 20.0),
      covariate("bilirubin", true, {none, N{0.8, 0.4}, N{1.8, 1.2}}, 0.2, 0.1, 30.0),
      covariate("fluid_balance", true, {none, N{1500, 800}, N{3000, 1500}}, 500.0),
      covariate("VIS", true, {none, N{2, 2}, N{15, 10}}, 3.0, 0.0, 200.0),
      covariate("ventilation_ratio", true, {none, N{0.2, 0.15}, N{0.7, 0.2}}, 0.1, 0.0, 1.0),
  };
}

std::vector<CategoricalModel> default_categorical() {
  return {{"sex", {"female", "male"}, {{{0.5, 0.5}, {0.4, 0.6}, {0.35, 0.65}}}}};
}

SyntheticConfig default_config() {
  SyntheticConfig c;
  c.chromophores = default_chromophores();
  c.covariates = default_covariates();
  c.categorical = default_categorical();
  return c;
}

std::vector<std::string> scenario_names() { return {"separable", "null", "confounded", "balanced_confounder"}; }

SyntheticConfig scenario(std::string_view name, const nlohmann::json& overrides) {
  SyntheticConfig c = default_config();
  ConfounderEffect update;
  update.name = "software_update";
  update.action = EffectAction::tilt;
  update.tilt_slope = 0.05;
  update.software_version = "2.0";

  if (name == "separable") {
    find_chromophore(c, "deoxy").group_delta = {0.0, 0.10, 0.30};
    find_chromophore(c, "water").group_delta = {0.0, 0.08, 0.25};
  } else if (name == "null") {
    // Neither group effects nor confounders.
  } else if (name == "confounded") {
    update.fraction = {0.0, 0.0, 1.0};
    c.confounders.push_back(update);
  } else if (name == "balanced_confounder") {
    update.fraction = {0.5, 0.5, 0.5};
    c.confounders.push_back(update);
  } else {
    fail_validation("unknown scenario '" + std::string(name) +
                    "' (expected separable, null, confounded or balanced_confounder)");
  }
  if (!overrides.is_null() && !(overrides.is_object() && overrides.empty())) {
    json merged = to_json(c);
    merged.merge_patch(overrides);
    c = config_from_json(merged);
  }
  c.validate();
  return c;
}

nlohmann::json to_json(const SyntheticConfig& c) {
  json j;
  j["wavelengths"] = std::vector<double>(c.grid.centers().begin(), c.grid.centers().end());
  j["counts"] = per_group_json(c.counts);
  PerGroup<std::vector<int>> tp;
  for (std::size_t g = 0; g < kGroupCount; ++g) tp[g] = {c.timepoints[g].first, c.timepoints[g].second};
  j["timepoints"] = per_group_json(tp);
  j["missing_thigh_probability"] = per_group_json(c.missing_thigh_probability);
  json chroms = json::array();
  for (const auto& ch : c.chromophores) {
    chroms.push_back({{"name", ch.name},
                      {"center_nm", ch.band.center_nm},
                      {"width_nm", ch.band.width_nm},
                      {"strength", ch.band.strength},
                      {"baseline", per_group_json(ch.baseline)},
                      {"group_delta", per_group_json(ch.group_delta)}});
  }
  j["chromophores"] = std::move(chroms);
  j["subject_concentration_sd"] = c.subject_concentration_sd;
  j["image_concentration_sd"] = c.image_concentration_sd;
  j["scattering_slope"] = c.scattering_slope;
  j["scattering_sd"] = c.scattering_sd;
  j["thigh_scattering_offset"] = c.thigh_scattering_offset;
  j["illumination"] = c.illumination;
  j["illumination_jitter_sd"] = c.illumination_jitter_sd;
  j["noise_sd"] = c.noise_sd;
  json conf = json::array();
  for (const auto& e : c.confounders) {
    conf.push_back({{"name", e.name},
                    {"fraction", per_group_json(e.fraction)},
                    {"action", e.action == EffectAction::tilt ? "tilt" : "concentration"},
                    {"tilt_slope", e.tilt_slope},
                    {"chromophore", e.chromophore},
                    {"concentration_delta", e.concentration_delta},
                    {"software_version", e.software_version}});
  }
  j["confounders"] = std::move(conf);
  json covs = json::array();
  for (const auto& cm : c.covariates) {
    PerGroup<json> groups;
    for (std::size_t g = 0; g < kGroupCount; ++g) groups[g] = normal_json(cm.per_group[g]);
    covs.push_back({{"name", cm.name},
                    {"dynamic", cm.dynamic},
                    {"per_group", per_group_json(groups)},
                    {"within_sd", cm.within_sd},
                    {"min", cm.min ? json(*cm.min) : json()},
                    {"max", cm.max ? json(*cm.max) : json()}});
  }
  j["covariates"] = std::move(covs);
  json cats = json::array();
  for (const auto& cm : c.categorical) {
    cats.push_back({{"name", cm.name}, {"levels", cm.levels}, {"probabilities", per_group_json(cm.probabilities)}});
  }
  j["categorical"] = std::move(cats);
  j["base_date"] = c.base_date;
  j["enrollment_offset_days"] = per_group_json(c.enrollment_offset_days);
  j["enrollment_span_days"] = per_group_json(c.enrollment_span_days);
  j["hours_between_timepoints"] = c.hours_between_timepoints;
  j["software_version"] = c.software_version;
  j["cube_width"] = c.cube_width;
  j["cube_height"] = c.cube_height;
  j["master_seed"] = c.master_seed;
  return j;
}

SyntheticConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail_validation("synthetic config must be a JSON object");
  try {
    SyntheticConfig c;
    const SyntheticConfig d = default_config();
    if (j.contains("wavelengths")) c.grid = WavelengthGrid(j.at("wavelengths").get<std::vector<double>>());
    c.counts = per_group_from(j.value("counts", json()), d.counts);
    PerGroup<std::vector<int>> tp_default;
    for (std::size_t g = 0; g < kGroupCount; ++g) tp_default[g] = {d.timepoints[g].first, d.timepoints[g].second};
    const auto tp = per_group_from(j.value("timepoints", json()), tp_default);
    for (std::size_t g = 0; g < kGroupCount; ++g) {
      if (tp[g].size() != 2) fail_validation("timepoints entries must be [min, max]");
      c.timepoints[g] = {tp[g][0], tp[g][1]};
    }
    c.missing_thigh_probability =
        per_group_from(j.value("missing_thigh_probability", json()), d.missing_thigh_probability);

    c.chromophores.clear();
    for (const auto& jc : j.value("chromophores", json::array())) {
      Chromophore ch;
      ch.name = jc.at("name").get<std::string>();
      ch.band = {jc.at("center_nm").get<double>(), jc.at("width_nm").get<double>(), jc.value("strength", 1.0)};
      ch.baseline = per_group_from(jc.value("baseline", json()), PerGroup<double>{});
      ch.group_delta = per_group_from(jc.value("group_delta", json()), PerGroup<double>{});
      c.chromophores.push_back(std::move(ch));
    }
    c.subject_concentration_sd = j.value("subject_concentration_sd", d.subject_concentration_sd);
    c.image_concentration_sd = j.value("image_concentration_sd", d.image_concentration_sd);
    c.scattering_slope = j.value("scattering_slope", d.scattering_slope);
    c.scattering_sd = j.value("scattering_sd", d.scattering_sd);
    c.thigh_scattering_offset = j.value("thigh_scattering_offset", d.thigh_scattering_offset);
    c.illumination = j.value("illumination", d.illumination);
    c.illumination_jitter_sd = j.value("illumination_jitter_sd", d.illumination_jitter_sd);
    c.noise_sd = j.value("noise_sd", d.noise_sd);

    for (const auto& je : j.value("confounders", json::array())) {
      ConfounderEffect e;
      e.name = je.at("name").get<std::string>();
      e.fraction = per_group_from(je.value("fraction", json()), PerGroup<double>{});
      const auto action = je.value("action", std::string("tilt"));
      if (action == "tilt") {
        e.action = EffectAction::tilt;
      } else if (action == "concentration") {
        e.action = EffectAction::concentration;
      } else {
        fail_validation("confounder action must be 'tilt' or 'concentration'");
      }
      e.tilt_slope = je.value("tilt_slope", 0.05);
      e.chromophore = je.value("chromophore", std::string());
      e.concentration_delta = je.value("concentration_delta", 0.0);
      e.software_version = je.value("software_version", std::string());
      c.confounders.push_back(std::move(e));
    }
    c.covariates.clear();
    for (const auto& jc : j.value("covariates", json::array())) {
      CovariateModel cm;
      cm.name = jc.at("name").get<std::string>();
      cm.dynamic = jc.value("dynamic", false);
      const auto groups = per_group_from(jc.value("per_group", json()), PerGroup<json>{});
      for (std::size_t g = 0; g < kGroupCount; ++g) cm.per_group[g] = normal_from(groups[g]);
      cm.within_sd = jc.value("within_sd", 0.0);
      cm.min = opt_double(jc, "min");
      cm.max = opt_double(jc, "max");
      c.covariates.push_back(std::move(cm));
    }
    c.categorical.clear();
    for (const auto& jc : j.value("categorical", json::array())) {
      CategoricalModel cm;
      cm.name = jc.at("name").get<std::string>();
      cm.levels = jc.at("levels").get<std::vector<std::string>>();
      cm.probabilities = per_group_from(jc.value("probabilities", json()), PerGroup<std::vector<double>>{});
      c.categorical.push_back(std::move(cm));
    }
    c.base_date = j.value("base_date", d.base_date);
    c.enrollment_offset_days = per_group_from(j.value("enrollment_offset_days", json()), d.enrollment_offset_days);
    c.enrollment_span_days = per_group_from(j.value("enrollment_span_days", json()), d.enrollment_span_days);
    c.hours_between_timepoints = j.value("hours_between_timepoints", d.hours_between_timepoints);
    c.software_version = j.value("software_version", d.software_version);
    c.cube_width = j.value("cube_width", d.cube_width);
    c.cube_height = j.value("cube_height", d.cube_height);
    c.master_seed = j.value("master_seed", d.master_seed);
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    fail_validation(std::string("synthetic config: ") + e.what());
  }
}

}  // namespace skinspec::synth
