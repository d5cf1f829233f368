#include "skinspec/confound.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <set>

#include "skinspec/error.hpp"
#include "skinspec/manifest.hpp"

namespace skinspec::confound {
namespace {

constexpr std::string_view kSoftwareVersion = "software_version";

std::string fmt(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::optional<std::string> subject_software_version(const SubjectRecord& s) {
  std::vector<MedianSpectrum> tagged;
  for (const auto& sp : s.spectra) {
    if (sp.meta.software_version.empty()) continue;
    MedianSpectrum tmp;
    tmp.meta.covariates.categorical[std::string(kSoftwareVersion)] = sp.meta.software_version;
    tagged.push_back(std::move(tmp));
  }
  if (tagged.empty()) return std::nullopt;
  return subject_covariates(tagged).categorical.at(std::string(kSoftwareVersion));
}

std::optional<VariableKind> kind_of(const Cohort& cohort, std::string_view variable) {
  if (variable == kSoftwareVersion) {
    for (const auto& s : cohort.subjects()) {
      if (subject_software_version(s)) return VariableKind::categorical;
    }
    return std::nullopt;
  }
  const std::string key(variable);
  for (const auto& s : cohort.subjects()) {
    if (s.covariates.numeric.count(key)) return VariableKind::numeric;
    if (s.covariates.categorical.count(key)) return VariableKind::categorical;
  }
  return std::nullopt;
}

PerGroup<std::vector<double>> numeric_values(const Cohort& cohort, std::string_view variable) {
  PerGroup<std::vector<double>> out;
  const std::string key(variable);
  for (const auto& s : cohort.subjects()) {
    if (auto it = s.covariates.numeric.find(key); it != s.covariates.numeric.end()) {
      out[index_of(s.group)].push_back(it->second);
    }
  }
  return out;
}

double mean_of(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double smd_from_values(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) {
    fail_validation("standardized mean difference needs at least two values per group");
  }
  const double ma = mean_of(a), mb = mean_of(b);
  const double sa = sample_sd(a), sb = sample_sd(b);
  const double pooled = std::sqrt((sa * sa + sb * sb) / 2.0);
  if (pooled == 0.0) {
    if (ma == mb) return 0.0;
    fail_validation("pooled standard deviation is zero but the group means differ");
  }
  return (ma - mb) / pooled;
}

}  // namespace

std::vector<std::string> list_variables(const Cohort& cohort) {
  std::set<std::string> names;
  for (const auto& s : cohort.subjects()) {
    for (const auto& [k, v] : s.covariates.numeric) names.insert(k);
    for (const auto& [k, v] : s.covariates.categorical) names.insert(k);
  }
  std::vector<std::string> out(names.begin(), names.end());
  if (kind_of(cohort, kSoftwareVersion) && !names.count(std::string(kSoftwareVersion))) {
    out.emplace_back(kSoftwareVersion);
  }
  return out;
}

VariableReport descriptives(const Cohort& cohort, std::string_view variable) {
  const auto kind = kind_of(cohort, variable);
  if (!kind) fail_validation("unknown variable '" + std::string(variable) + "' (no values in the cohort)");
  VariableReport rep;
  rep.variable = std::string(variable);
  rep.kind = *kind;
  for (auto g : kAllGroups) rep.groups[index_of(g)].group = g;

  if (*kind == VariableKind::numeric) {
    const auto values = numeric_values(cohort, variable);
    for (auto g : kAllGroups) {
      auto& row = rep.groups[index_of(g)];
      const auto& v = values[index_of(g)];
      row.n = v.size();
      if (v.empty()) continue;
      row.stats = summarize(v);
      row.sd = sample_sd(v);
    }
  } else {
    const std::string key(variable);
    for (const auto& s : cohort.subjects()) {
      std::optional<std::string> level;
      if (variable == kSoftwareVersion) {
        level = subject_software_version(s);
      } else if (auto it = s.covariates.categorical.find(key); it != s.covariates.categorical.end()) {
        level = it->second;
      }
      if (!level) continue;
      auto& row = rep.groups[index_of(s.group)];
      ++row.n;
      ++row.levels[*level];
    }
  }
  return rep;
}

double standardized_mean_difference(const Cohort& cohort, std::string_view variable, Group a, Group b) {
  const auto kind = kind_of(cohort, variable);
  if (!kind) fail_validation("unknown variable '" + std::string(variable) + "'");
  if (*kind != VariableKind::numeric) {
    fail_validation("variable '" + std::string(variable) + "' is categorical; SMD needs a numeric variable");
  }
  const auto values = numeric_values(cohort, variable);
  return smd_from_values(values[index_of(a)], values[index_of(b)]);
}

ConfounderReport confounder_report(const Cohort& cohort, const std::vector<std::string>& variables,
                                   const std::vector<Group>& order) {
  ConfounderReport report;
  const auto names = variables.empty() ? list_variables(cohort) : variables;
  for (const auto& name : names) {
    auto rep = descriptives(cohort, name);
    if (rep.kind == VariableKind::numeric) {
      const auto values = numeric_values(cohort, name);
      for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size(); ++j) {
          SmdEntry e;
          e.a = order[i];
          e.b = order[j];
          try {
            e.value = smd_from_values(values[index_of(e.a)], values[index_of(e.b)]);
          } catch (const ValidationError& err) {
            e.note = err.what();
          }
          rep.smd.push_back(std::move(e));
        }
      }
    }
    report.variables.push_back(std::move(rep));
  }
  report.not_measured = {"hand posture", "camera pose", "skin melanin / season", "room illumination",
                         "camera calibration"};
  return report;
}

nlohmann::json to_json(const ConfounderReport& report) {
  nlohmann::json vars = nlohmann::json::array();
  for (const auto& v : report.variables) {
    nlohmann::json jv;
    jv["variable"] = v.variable;
    jv["kind"] = v.kind == VariableKind::numeric ? "numeric" : "categorical";
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& g : v.groups) {
      nlohmann::json jg = {{"group", to_string(g.group)}, {"n", g.n}};
      if (g.stats) {
        jg["mean"] = g.stats->mean;
        jg["sd"] = *g.sd;
        jg["min"] = g.stats->min;
        jg["q1"] = g.stats->q1;
        jg["median"] = g.stats->median;
        jg["q3"] = g.stats->q3;
        jg["max"] = g.stats->max;
      }
      if (!g.levels.empty()) jg["levels"] = g.levels;
      groups.push_back(std::move(jg));
    }
    jv["groups"] = std::move(groups);
    nlohmann::json smd = nlohmann::json::array();
    for (const auto& e : v.smd) {
      nlohmann::json je = {{"group_a", to_string(e.a)}, {"group_b", to_string(e.b)}};
      je["smd"] = e.value ? nlohmann::json(*e.value) : nlohmann::json();
      if (!e.note.empty()) je["note"] = e.note;
      smd.push_back(std::move(je));
    }
    if (v.kind == VariableKind::numeric) jv["smd"] = std::move(smd);
    vars.push_back(std::move(jv));
  }
  return {{"variables", std::move(vars)}, {"not_measured", report.not_measured}};
}

void write_descriptives_csv(const ConfounderReport& report, std::ostream& out) {
  out << "variable,kind,group,n,mean,sd,min,q1,median,q3,max,levels\n";
  for (const auto& v : report.variables) {
    for (const auto& g : v.groups) {
      out << csv_escape(v.variable) << ',' << (v.kind == VariableKind::numeric ? "numeric" : "categorical")
          << ',' << to_string(g.group) << ',' << g.n << ',';
      if (g.stats) {
        out << fmt(g.stats->mean) << ',' << fmt(g.sd) << ',' << fmt(g.stats->min) << ',' << fmt(g.stats->q1)
            << ',' << fmt(g.stats->median) << ',' << fmt(g.stats->q3) << ',' << fmt(g.stats->max) << ',';
      } else {
        out << ",,,,,,,";
      }
      std::string levels;
      for (const auto& [lvl, n] : g.levels) levels += (levels.empty() ? "" : ";") + lvl + "=" + std::to_string(n);
      out << csv_escape(levels) << '\n';
    }
  }
}

void write_smd_csv(const ConfounderReport& report, std::ostream& out) {
  out << "variable,group_a,group_b,smd,note\n";
  for (const auto& v : report.variables) {
    for (const auto& e : v.smd) {
      out << csv_escape(v.variable) << ',' << to_string(e.a) << ',' << to_string(e.b) << ',' << fmt(e.value)
          << ',' << csv_escape(e.note) << '\n';
    }
  }
}

Timeline acquisition_timeline(const Cohort& cohort) {
  Timeline t;
  for (auto g : kAllGroups) t.groups[index_of(g)].group = g;
  for (const auto& s : cohort.subjects()) {
    for (std::size_t i = 0; i < s.spectra.size(); ++i) {
      const auto& at = s.spectra[i].meta.acquired_at;
      if (!at) {
        t.missing.push_back(s.subject_id + "#" + std::to_string(i));
        continue;
      }
      t.groups[index_of(s.group)].events.push_back({*at, s.subject_id});
    }
  }
  for (auto& g : t.groups) {
    std::sort(g.events.begin(), g.events.end(), [](const TimelineEvent& a, const TimelineEvent& b) {
      return a.at != b.at ? a.at < b.at : a.subject_id < b.subject_id;
    });
    if (!g.events.empty()) {
      g.first = g.events.front().at;
      g.last = g.events.back().at;
    }
  }
  for (std::size_t i = 0; i < kGroupCount; ++i) {
    for (std::size_t j = i + 1; j < kGroupCount; ++j) {
      const auto& a = t.groups[i];
      const auto& b = t.groups[j];
      TimelineOverlap o{a.group, b.group, 0.0};
      if (a.first && b.first) {
        const auto lo = std::max(*a.first, *b.first);
        const auto hi = std::min(*a.last, *b.last);
        if (hi > lo) o.days = std::chrono::duration<double, std::ratio<86400>>(hi - lo).count();
      }
      t.overlaps.push_back(o);
    }
  }
  return t;
}

nlohmann::json to_json(const Timeline& timeline) {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : timeline.groups) {
    nlohmann::json jg = {{"group", to_string(g.group)}, {"events", g.events.size()}};
    jg["first"] = g.first ? nlohmann::json(format_timestamp(*g.first)) : nlohmann::json();
    jg["last"] = g.last ? nlohmann::json(format_timestamp(*g.last)) : nlohmann::json();
    groups.push_back(std::move(jg));
  }
  nlohmann::json overlaps = nlohmann::json::array();
  for (const auto& o : timeline.overlaps) {
    overlaps.push_back({{"group_a", to_string(o.a)}, {"group_b", to_string(o.b)}, {"overlap_days", o.days}});
  }
  return {{"groups", std::move(groups)}, {"overlaps", std::move(overlaps)}, {"missing_timestamps", timeline.missing}};
}

void write_timeline_csv(const Timeline& timeline, std::ostream& out) {
  out << "group,subject_id,timestamp\n";
  for (const auto& g : timeline.groups) {
    for (const auto& e : g.events) {
      out << to_string(g.group) << ',' << csv_escape(e.subject_id) << ',' << format_timestamp(e.at) << '\n';
    }
  }
}

}  // namespace skinspec::confound
