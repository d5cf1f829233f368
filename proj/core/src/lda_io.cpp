#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "skinspec/error.hpp"
#include "skinspec/lda.hpp"

namespace skinspec::lda {
namespace {

constexpr std::string_view kMagic = "skinspec-lda v1";

std::string fmt(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_row(std::ostream& out, const auto& row) {
  for (Eigen::Index j = 0; j < row.size(); ++j) out << (j ? " " : "") << fmt(row[j]);
  out << '\n';
}

void write_matrix(std::ostream& out, std::string_view name, const Eigen::MatrixXd& m) {
  out << "[" << name << " " << m.rows() << " " << m.cols() << "]\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) write_row(out, m.row(i));
}

std::vector<double> parse_numbers(const std::string& line) {
  std::vector<double> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
      fail_validation("LDA model: bad number '" + tok + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::string next_line(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail_validation("LDA model: unexpected end of input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

Eigen::MatrixXd read_matrix(std::istream& in, std::string_view name) {
  const std::string head = next_line(in);
  std::istringstream ss(head);
  std::string tag;
  Eigen::Index rows = -1, cols = -1;
  ss >> tag >> rows >> cols;
  if (tag != "[" + std::string(name) || rows < 0 || cols < 0) {
    fail_validation("LDA model: expected matrix block '" + std::string(name) + "'");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto v = parse_numbers(next_line(in));
    if (static_cast<Eigen::Index>(v.size()) != cols) {
      fail_validation("LDA model: row width mismatch in block '" + std::string(name) + "'");
    }
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = v[static_cast<std::size_t>(j)];
  }
  return m;
}

Eigen::VectorXd as_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

void save_model(const LdaModel& model, std::ostream& out) {
  const auto& p = model.parts();
  out << kMagic << '\n';
  out << "classes=" << p.labels.size() << '\n';
  out << "features=" << p.grand_mean.size() << '\n';
  out << "components=" << p.projection.cols() << '\n';
  out << "samples=" << p.sample_count << '\n';
  out << "gamma=" << fmt(p.gamma) << '\n';
  out << "labels=";
  for (std::size_t i = 0; i < p.labels.size(); ++i) out << (i ? " " : "") << p.labels[i];
  out << '\n';
  out << "priors=";
  write_row(out, p.priors);
  out << "eigenvalues=";
  write_row(out, p.eigenvalues);
  out << "grand_mean=";
  write_row(out, p.grand_mean);
  write_matrix(out, "means", p.means);
  write_matrix(out, "pooled_scatter", p.pooled_scatter);
  write_matrix(out, "projection", p.projection);
}

LdaModel load_model(std::istream& in) {
  if (next_line(in) != kMagic) fail_validation("LDA model: missing header line");
  std::map<std::string, std::string> kv;
  for (const char* key : {"classes", "features", "components", "samples", "gamma", "labels", "priors",
                          "eigenvalues", "grand_mean"}) {
    const std::string line = next_line(in);
    const auto eq = line.find('=');
    if (eq == std::string::npos || line.substr(0, eq) != key) {
      fail_validation(std::string("LDA model: expected key '") + key + "'");
    }
    kv[key] = line.substr(eq + 1);
  }
  LdaParts p;
  for (double v : parse_numbers(kv["labels"])) p.labels.push_back(static_cast<int>(v));
  p.gamma = parse_numbers(kv["gamma"]).at(0);
  p.sample_count = static_cast<std::size_t>(parse_numbers(kv["samples"]).at(0));
  p.priors = as_vector(parse_numbers(kv["priors"]));
  p.eigenvalues = as_vector(parse_numbers(kv["eigenvalues"]));
  p.grand_mean = as_vector(parse_numbers(kv["grand_mean"]));
  p.means = read_matrix(in, "means");
  p.pooled_scatter = read_matrix(in, "pooled_scatter");
  p.projection = read_matrix(in, "projection");
  if (p.labels.size() != static_cast<std::size_t>(parse_numbers(kv["classes"]).at(0)) ||
      p.grand_mean.size() != static_cast<Eigen::Index>(parse_numbers(kv["features"]).at(0)) ||
      p.projection.cols() != static_cast<Eigen::Index>(parse_numbers(kv["components"]).at(0))) {
    fail_validation("LDA model: header counts disagree with payload");
  }
  return LdaModel(std::move(p));
}

}  // namespace skinspec::lda
