#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "skinspec/types.hpp"

namespace skinspec::lda {

enum class PriorsMode { empirical, uniform };

std::string_view to_string(PriorsMode m);
PriorsMode parse_priors_mode(std::string_view text);

inline constexpr double kDefaultGamma = 1e-3;

struct FitOptions {
  // Shrinkage intensity: S_w + gamma * (tr(S_w) / B) * I. Zero disables it.
  double gamma = kDefaultGamma;
  PriorsMode priors = PriorsMode::empirical;
  // Classes the model must cover. Empty means "the distinct labels seen".
  // A listed class with no samples is an error.
  std::vector<int> classes;
};

// Everything a fitted model persists. Class order follows `labels`
// (ascending).
struct LdaParts {
  std::vector<int> labels;
  Eigen::MatrixXd means;           // K x B, row k = mean of class labels[k]
  Eigen::VectorXd grand_mean;      // B, sample-weighted mean of all samples
  Eigen::MatrixXd pooled_scatter;  // B x B, regularized within-class covariance
  Eigen::MatrixXd projection;      // B x m, columns S-orthonormal
  Eigen::VectorXd eigenvalues;     // m, non-increasing
  Eigen::VectorXd priors;          // K, sum to 1
  double gamma = 0.0;
  std::size_t sample_count = 0;
};

struct Classification {
  int label = 0;
  std::size_t class_index = 0;
  Eigen::VectorXd posteriors;  // K, softmax of the discriminant scores
};

class LdaModel {
 public:
  // Derives the cached discriminant coefficients; throws NumericalError if
  // pooled_scatter is not positive definite.
  explicit LdaModel(LdaParts parts);

  const LdaParts& parts() const { return parts_; }
  const std::vector<int>& labels() const { return parts_.labels; }
  std::size_t class_count() const { return parts_.labels.size(); }
  std::size_t feature_count() const { return static_cast<std::size_t>(parts_.grand_mean.size()); }
  std::size_t component_count() const { return static_cast<std::size_t>(parts_.projection.cols()); }
  const Eigen::VectorXd& eigenvalues() const { return parts_.eigenvalues; }
  const Eigen::MatrixXd& projection() const { return parts_.projection; }
  double gamma() const { return parts_.gamma; }

  // projection^T (x - grand_mean)
  Eigen::VectorXd project(std::span<const double> x) const;

  // Linear discriminant scores x^T S^-1 mu_k - mu_k^T S^-1 mu_k / 2 + log pi_k,
  // with S the regularized pooled covariance.
  Eigen::VectorXd scores(std::span<const double> x) const;
  Classification classify(std::span<const double> x) const;
  // Label of the argmax score; ties resolve to the earlier class.
  int predict(std::span<const double> x) const;

  friend bool operator==(const LdaModel& a, const LdaModel& b);

 private:
  void check_dimension(std::span<const double> x) const;

  LdaParts parts_;
  Eigen::MatrixXd coefficients_;  // B x K
  Eigen::VectorXd offsets_;       // K
};

// Multi-class LDA. Rows of `samples` are observations. The within-class
// scatter is pooled with denominator N - K (N when N == K); the between-class
// scatter is sum_k (n_k / N)(mu_k - mu)(mu_k - mu)^T. The projection solves
// S_b w = lambda S~_w w through Cholesky whitening of S~_w and a symmetric
// eigendecomposition, keeping m = min(K - 1, rank S_b) directions.
// When tr(S_w) == 0 the shrinkage target is the identity itself.
LdaModel fit_lda(const Eigen::MatrixXd& samples, std::span<const int> labels, const FitOptions& options = {});

// Text container; load(save(m)) == m exactly.
void save_model(const LdaModel& model, std::ostream& out);
LdaModel load_model(std::istream& in);

enum class BinaryLabel : int { negative = 0, positive = 1 };

// sepsis -> positive, healthy/pancreatic -> negative.
BinaryLabel relabel_binary(Group g);
std::vector<BinaryLabel> relabel_binary(std::span<const Group> groups);
// String form over {healthy, pancreatic, sepsis, negative, positive}; returns
// "negative"/"positive", so it is idempotent. Unknown labels throw.
std::vector<std::string> relabel_binary(std::span<const std::string> labels);

}  // namespace skinspec::lda
