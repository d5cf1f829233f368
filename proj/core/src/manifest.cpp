#include "skinspec/manifest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "skinspec/error.hpp"

namespace fs = std::filesystem;

namespace skinspec {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<double> try_parse_double(std::string_view text) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

std::string format_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string sanitize(std::string_view id) {
  std::string out;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.';
    out.push_back(ok ? c : '_');
  }
  return out;
}

std::vector<double> load_number_lines(const fs::path& path, std::string_view what) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open " + std::string(what) + " " + path.string());
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty()) continue;
    auto v = try_parse_double(t);
    if (!v) fail_validation(path.string() + ":" + std::to_string(lineno) + ": not a number: '" + t + "'");
    out.push_back(*v);
  }
  return out;
}

void save_number_lines(std::span<const double> values, const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail_io("cannot write " + path.string());
  for (double v : values) out << format_double(v) << '\n';
  if (!out) fail_io("failed writing " + path.string());
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  if (quoted) fail_validation("unterminated quote in CSV line");
  fields.push_back(std::move(cur));
  return fields;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::vector<double> load_spectrum_file(const fs::path& path) {
  return load_number_lines(path, "spectrum file");
}

void save_spectrum_file(const std::vector<double>& values, const fs::path& path) {
  save_number_lines(values, path);
}

WavelengthGrid load_grid_file(const fs::path& path) {
  return WavelengthGrid(load_number_lines(path, "wavelength file"));
}

void save_grid_file(const WavelengthGrid& grid, const fs::path& path) {
  save_number_lines(grid.centers(), path);
}

Cohort load_cohort(const fs::path& manifest_path, const fs::path& spectra_root,
                   std::optional<WavelengthGrid> grid) {
  std::ifstream in(manifest_path);
  if (!in) fail_io("cannot open manifest " + manifest_path.string());
  std::string line;
  if (!std::getline(in, line)) fail_validation(manifest_path.string() + ": empty manifest");
  const auto header = split_csv_line(line);
  constexpr std::size_t fixed = std::size(kManifestFixedColumns);
  if (header.size() < fixed) fail_validation(manifest_path.string() + ": header has too few columns");
  for (std::size_t i = 0; i < fixed; ++i) {
    if (trim(header[i]) != kManifestFixedColumns[i]) {
      fail_validation(manifest_path.string() + ": column " + std::to_string(i + 1) + " must be '" +
                      std::string(kManifestFixedColumns[i]) + "', found '" + header[i] + "'");
    }
  }
  std::vector<std::string> cov_names;
  for (std::size_t i = fixed; i < header.size(); ++i) cov_names.push_back(trim(header[i]));

  std::vector<std::vector<std::string>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      fail_validation(manifest_path.string() + ":" + std::to_string(lineno) + ": expected " +
                      std::to_string(header.size()) + " fields, found " + std::to_string(fields.size()));
    }
    for (auto& f : fields) f = trim(f);
    rows.push_back(std::move(fields));
  }

  std::vector<bool> categorical(cov_names.size(), false);
  for (std::size_t c = 0; c < cov_names.size(); ++c) {
    categorical[c] = cov_names[c] == "sex";
    for (const auto& r : rows) {
      const auto& cell = r[fixed + c];
      if (!cell.empty() && !try_parse_double(cell)) categorical[c] = true;
    }
  }

  if (!grid) {
    const fs::path grid_file = manifest_path.parent_path() / "wavelengths.txt";
    if (fs::exists(grid_file)) grid = load_grid_file(grid_file);
  }

  std::vector<MedianSpectrum> spectra;
  spectra.reserve(rows.size());
  std::size_t row_no = 1;
  for (const auto& r : rows) {
    ++row_no;
    const std::string where = manifest_path.string() + " row " + std::to_string(row_no - 1);
    MedianSpectrum s;
    s.meta.subject_id = r[0];
    if (s.meta.subject_id.empty()) fail_validation(where + ": empty subject_id");
    s.meta.group = parse_group(r[1]);
    s.meta.site = parse_site(r[2]);
    int tp = 0;
    auto [ptr, ec] = std::from_chars(r[3].data(), r[3].data() + r[3].size(), tp);
    if (r[3].empty() || ec != std::errc{} || ptr != r[3].data() + r[3].size() || tp < 0) {
      fail_validation(where + ": timepoint_index must be a non-negative integer");
    }
    s.meta.timepoint_index = tp;
    s.meta.acquired_at = parse_timestamp(r[4]);
    s.meta.software_version = r[5];
    for (std::size_t c = 0; c < cov_names.size(); ++c) {
      const auto& cell = r[fixed + c];
      if (cell.empty()) continue;
      if (categorical[c]) {
        s.meta.covariates.categorical[cov_names[c]] = cell;
      } else {
        s.meta.covariates.numeric[cov_names[c]] = *try_parse_double(cell);
      }
    }
    if (r[6].empty()) fail_validation(where + ": empty spectrum_file");
    s.values = load_spectrum_file(spectra_root / r[6]);
    if (!spectra.empty() && s.values.size() != spectra.front().values.size()) {
      fail_validation(where + ": spectrum has " + std::to_string(s.values.size()) +
                      " bands, earlier spectra have " + std::to_string(spectra.front().values.size()));
    }
    spectra.push_back(std::move(s));
  }
  if (spectra.empty()) fail_validation(manifest_path.string() + ": manifest lists no spectra");
  if (!grid) grid = WavelengthGrid::uniform(500.0, 1000.0, spectra.front().values.size());
  return Cohort::from_spectra(std::move(*grid), std::move(spectra));
}

void save_cohort(const Cohort& cohort, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir / "spectra", ec);
  if (ec) fail_io("cannot create " + (dir / "spectra").string() + ": " + ec.message());

  std::set<std::string> numeric_names, categorical_names;
  for (const auto& subj : cohort.subjects()) {
    for (const auto& s : subj.spectra) {
      for (const auto& [k, v] : s.meta.covariates.numeric) numeric_names.insert(k);
      for (const auto& [k, v] : s.meta.covariates.categorical) categorical_names.insert(k);
    }
  }
  std::vector<std::string> cov_names(numeric_names.begin(), numeric_names.end());
  cov_names.insert(cov_names.end(), categorical_names.begin(), categorical_names.end());

  const fs::path manifest = dir / "manifest.csv";
  std::ofstream out(manifest, std::ios::trunc);
  if (!out) fail_io("cannot write " + manifest.string());
  for (std::size_t i = 0; i < std::size(kManifestFixedColumns); ++i) {
    out << (i ? "," : "") << kManifestFixedColumns[i];
  }
  for (const auto& n : cov_names) out << ',' << csv_escape(n);
  out << '\n';

  std::size_t row = 0;
  for (const auto& subj : cohort.subjects()) {
    for (const auto& s : subj.spectra) {
      char num[16];
      std::snprintf(num, sizeof num, "%05zu", row++);
      const std::string file = "spectra/" + std::string(num) + "_" + sanitize(subj.subject_id) + ".txt";
      save_spectrum_file(s.values, dir / file);
      out << csv_escape(s.meta.subject_id) << ',' << to_string(s.meta.group) << ','
          << to_string(s.meta.site) << ',' << s.meta.timepoint_index << ','
          << (s.meta.acquired_at ? format_timestamp(*s.meta.acquired_at) : std::string()) << ','
          << csv_escape(s.meta.software_version) << ',' << file;
      for (const auto& n : cov_names) {
        out << ',';
        if (auto it = s.meta.covariates.numeric.find(n); it != s.meta.covariates.numeric.end()) {
          out << format_double(it->second);
        } else if (auto jt = s.meta.covariates.categorical.find(n);
                   jt != s.meta.covariates.categorical.end()) {
          out << csv_escape(jt->second);
        }
      }
      out << '\n';
    }
  }
  if (!out) fail_io("failed writing " + manifest.string());
  save_grid_file(cohort.grid(), dir / "wavelengths.txt");
}

}  // namespace skinspec
