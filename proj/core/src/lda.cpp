#include "skinspec/lda.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "skinspec/error.hpp"

namespace skinspec::lda {
namespace {

// Rank cut-off for the whitened between-class spectrum, relative to its top
// eigenvalue.
constexpr double kRankTolerance = 1e-12;
constexpr double kMinReciprocalCondition = 1e-14;

Eigen::LLT<Eigen::MatrixXd> factor_scatter(const Eigen::MatrixXd& scatter) {
  Eigen::LLT<Eigen::MatrixXd> llt(scatter);
  if (llt.info() != Eigen::Success || !(llt.rcond() > kMinReciprocalCondition)) {
    throw NumericalError(
        "regularized within-class scatter is not positive definite; use a positive shrinkage gamma");
  }
  return llt;
}

}  // namespace

std::string_view to_string(PriorsMode m) { return m == PriorsMode::empirical ? "empirical" : "uniform"; }

PriorsMode parse_priors_mode(std::string_view text) {
  if (text == "empirical") return PriorsMode::empirical;
  if (text == "uniform") return PriorsMode::uniform;
  fail_validation("unknown priors mode '" + std::string(text) + "' (expected empirical or uniform)");
}

LdaModel::LdaModel(LdaParts parts) : parts_(std::move(parts)) {
  const auto k = static_cast<Eigen::Index>(parts_.labels.size());
  const auto b = parts_.grand_mean.size();
  if (k < 2) fail_validation("LDA model needs at least two classes");
  if (parts_.means.rows() != k || parts_.means.cols() != b || parts_.pooled_scatter.rows() != b ||
      parts_.pooled_scatter.cols() != b || parts_.projection.rows() != b ||
      parts_.eigenvalues.size() != parts_.projection.cols() || parts_.priors.size() != k) {
    fail_validation("inconsistent LDA model dimensions");
  }
  const auto llt = factor_scatter(parts_.pooled_scatter);
  coefficients_ = llt.solve(parts_.means.transpose());
  offsets_.resize(k);
  for (Eigen::Index c = 0; c < k; ++c) {
    offsets_[c] = -0.5 * parts_.means.row(c).dot(coefficients_.col(c)) + std::log(parts_.priors[c]);
  }
}

void LdaModel::check_dimension(std::span<const double> x) const {
  if (x.size() != feature_count()) {
    fail_validation("input has " + std::to_string(x.size()) + " features, model expects " +
                    std::to_string(feature_count()));
  }
}

Eigen::VectorXd LdaModel::project(std::span<const double> x) const {
  check_dimension(x);
  const Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
  return parts_.projection.transpose() * (v - parts_.grand_mean);
}

Eigen::VectorXd LdaModel::scores(std::span<const double> x) const {
  check_dimension(x);
  const Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
  return coefficients_.transpose() * v + offsets_;
}

int LdaModel::predict(std::span<const double> x) const {
  const Eigen::VectorXd s = scores(x);
  Eigen::Index best = 0;
  for (Eigen::Index c = 1; c < s.size(); ++c) {
    if (s[c] > s[best]) best = c;
  }
  return parts_.labels[static_cast<std::size_t>(best)];
}

Classification LdaModel::classify(std::span<const double> x) const {
  const Eigen::VectorXd s = scores(x);
  Eigen::Index best = 0;
  for (Eigen::Index c = 1; c < s.size(); ++c) {
    if (s[c] > s[best]) best = c;
  }
  Classification out;
  out.class_index = static_cast<std::size_t>(best);
  out.label = parts_.labels[out.class_index];
  out.posteriors = (s.array() - s[best]).exp().matrix();
  out.posteriors /= out.posteriors.sum();
  return out;
}

bool operator==(const LdaModel& a, const LdaModel& b) {
  const auto& x = a.parts_;
  const auto& y = b.parts_;
  auto same = [](const auto& m, const auto& n) {
    return m.rows() == n.rows() && m.cols() == n.cols() && (m.array() == n.array()).all();
  };
  return x.labels == y.labels && same(x.means, y.means) && same(x.grand_mean, y.grand_mean) &&
         same(x.pooled_scatter, y.pooled_scatter) && same(x.projection, y.projection) &&
         same(x.eigenvalues, y.eigenvalues) && same(x.priors, y.priors) && x.gamma == y.gamma &&
         x.sample_count == y.sample_count;
}

LdaModel fit_lda(const Eigen::MatrixXd& samples, std::span<const int> labels, const FitOptions& options) {
  const Eigen::Index n = samples.rows();
  const Eigen::Index b = samples.cols();
  if (b < 1) fail_validation("LDA needs at least one feature");
  if (static_cast<std::size_t>(n) != labels.size()) {
    fail_validation("sample count " + std::to_string(n) + " does not match label count " +
                    std::to_string(labels.size()));
  }
  if (!samples.allFinite()) fail_validation("LDA input contains non-finite values");
  if (!(options.gamma >= 0.0) || !std::isfinite(options.gamma)) {
    fail_validation("shrinkage gamma must be finite and non-negative");
  }

  std::vector<int> classes = options.classes;
  if (classes.empty()) classes.assign(labels.begin(), labels.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  const auto k = static_cast<Eigen::Index>(classes.size());
  if (k < 2) fail_validation("LDA needs at least two classes");

  std::vector<Eigen::Index> class_of(labels.size());
  std::vector<std::size_t> counts(classes.size(), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto it = std::lower_bound(classes.begin(), classes.end(), labels[i]);
    if (it == classes.end() || *it != labels[i]) {
      fail_validation("label " + std::to_string(labels[i]) + " is not one of the declared classes");
    }
    class_of[i] = it - classes.begin();
    ++counts[static_cast<std::size_t>(class_of[i])];
  }
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (counts[c] == 0) fail_validation("class " + std::to_string(classes[c]) + " has no samples");
  }

  LdaParts parts;
  parts.labels = classes;
  parts.gamma = options.gamma;
  parts.sample_count = static_cast<std::size_t>(n);

  parts.means = Eigen::MatrixXd::Zero(k, b);
  for (Eigen::Index i = 0; i < n; ++i) parts.means.row(class_of[static_cast<std::size_t>(i)]) += samples.row(i);
  for (Eigen::Index c = 0; c < k; ++c) parts.means.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);

  Eigen::VectorXd weights(k);
  for (Eigen::Index c = 0; c < k; ++c) {
    weights[c] = static_cast<double>(counts[static_cast<std::size_t>(c)]) / static_cast<double>(n);
  }
  parts.grand_mean = parts.means.transpose() * weights;

  Eigen::MatrixXd centered(n, b);
  for (Eigen::Index i = 0; i < n; ++i) {
    centered.row(i) = samples.row(i) - parts.means.row(class_of[static_cast<std::size_t>(i)]);
  }
  const double denom = static_cast<double>(n > k ? n - k : n);
  Eigen::MatrixXd within = Eigen::MatrixXd::Zero(b, b);
  within.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose(), 1.0 / denom);
  within = within.selfadjointView<Eigen::Lower>();

  const double trace = within.trace();
  const double scale = trace > 0.0 ? trace / static_cast<double>(b) : 1.0;
  parts.pooled_scatter = within;
  parts.pooled_scatter.diagonal().array() += options.gamma * scale;

  const auto llt = factor_scatter(parts.pooled_scatter);

  // S_b = H H^T with column c of H = sqrt(n_c / N) (mu_c - mu).
  Eigen::MatrixXd h(b, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    h.col(c) = std::sqrt(weights[c]) * (parts.means.row(c).transpose() - parts.grand_mean);
  }
  // Whitened factor Z = L^-1 H; the nonzero spectrum of Z Z^T equals that of
  // the K x K Gram matrix Z^T Z.
  const Eigen::MatrixXd z = llt.matrixL().solve(h);
  const Eigen::MatrixXd gram = z.transpose() * z;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition of the whitened scatter failed");

  const Eigen::VectorXd& evals = eig.eigenvalues();  // ascending
  const double top = std::max(evals[k - 1], 0.0);
  Eigen::Index m = 0;
  while (m < k - 1 && top > 0.0 && evals[k - 1 - m] > kRankTolerance * top) ++m;

  parts.eigenvalues.resize(m);
  Eigen::MatrixXd whitened(b, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const Eigen::Index src = k - 1 - j;
    parts.eigenvalues[j] = evals[src];
    Eigen::VectorXd v = z * eig.eigenvectors().col(src);
    v.normalize();
    whitened.col(j) = v;
  }
  parts.projection = llt.matrixU().solve(whitened);
  for (Eigen::Index j = 0; j < m; ++j) {
    Eigen::Index pivot = 0;
    parts.projection.col(j).cwiseAbs().maxCoeff(&pivot);
    if (parts.projection(pivot, j) < 0.0) parts.projection.col(j) *= -1.0;
  }

  if (options.priors == PriorsMode::uniform) {
    parts.priors = Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
  } else {
    parts.priors = weights;
  }
  return LdaModel(std::move(parts));
}

BinaryLabel relabel_binary(Group g) {
  return g == Group::sepsis ? BinaryLabel::positive : BinaryLabel::negative;
}

std::vector<BinaryLabel> relabel_binary(std::span<const Group> groups) {
  std::vector<BinaryLabel> out;
  out.reserve(groups.size());
  for (auto g : groups) out.push_back(relabel_binary(g));
  return out;
}

std::vector<std::string> relabel_binary(std::span<const std::string> labels) {
  std::vector<std::string> out;
  out.reserve(labels.size());
  for (const auto& l : labels) {
    if (l == "sepsis" || l == "positive") {
      out.emplace_back("positive");
    } else if (l == "healthy" || l == "pancreatic" || l == "negative") {
      out.emplace_back("negative");
    } else {
      fail_validation("unknown label '" + l + "'");
    }
  }
  return out;
}

}  // namespace skinspec::lda
