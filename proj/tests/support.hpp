#pragma once

// Test-only helpers. The numerical routines here are deliberately naive and
// share no code with the library so they can serve as oracles.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "skinspec/cohort.hpp"
#include "skinspec/cube.hpp"

namespace skinspec::test {

using Dense = std::vector<std::vector<double>>;

inline Dense zeros(std::size_t r, std::size_t c) { return Dense(r, std::vector<double>(c, 0.0)); }

inline Dense transpose(const Dense& a) {
  Dense t = zeros(a.empty() ? 0 : a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

inline Dense multiply(const Dense& a, const Dense& b) {
  Dense c = zeros(a.size(), b[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

// Cyclic Jacobi rotations; returns eigenvalues in descending order.
inline std::vector<double> jacobi_eigenvalues(Dense a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

// Lower-triangular L with L L^T = a (textbook Cholesky-Banachiewicz).
inline Dense cholesky(const Dense& a) {
  const std::size_t n = a.size();
  Dense l = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a[i][j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
      l[i][j] = i == j ? std::sqrt(s) : s / l[j][j];
    }
  }
  return l;
}

// Inverse of a lower-triangular matrix by forward substitution per column.
inline Dense lower_inverse(const Dense& l) {
  const std::size_t n = l.size();
  Dense inv = zeros(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = i == c ? 1.0 : 0.0;
      for (std::size_t k = 0; k < i; ++k) s -= l[i][k] * inv[k][c];
      inv[i][c] = s / l[i][i];
    }
  }
  return inv;
}

// Solves a x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> solve(Dense a, std::vector<double> b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

// Scatter matrices recomputed from raw samples with the library's declared
// conventions: pooled denominator N-K (N when N == K), shrinkage
// gamma * tr / B (scale 1 when the trace vanishes), S_b weighted by n_k / N.
struct ScatterOracle {
  std::vector<int> classes;
  Dense means;  // K x B
  std::vector<double> counts;
  Dense sw_reg;
  Dense sb;
};

inline ScatterOracle scatter_oracle(const Dense& x, const std::vector<int>& y, double gamma) {
  ScatterOracle o;
  o.classes = y;
  std::sort(o.classes.begin(), o.classes.end());
  o.classes.erase(std::unique(o.classes.begin(), o.classes.end()), o.classes.end());
  const std::size_t n = x.size(), b = x[0].size(), k = o.classes.size();
  o.means = zeros(k, b);
  o.counts.assign(k, 0.0);
  auto cls = [&](int label) {
    return static_cast<std::size_t>(std::find(o.classes.begin(), o.classes.end(), label) - o.classes.begin());
  };
  std::vector<double> grand(b, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = cls(y[i]);
    o.counts[c] += 1.0;
    for (std::size_t j = 0; j < b; ++j) {
      o.means[c][j] += x[i][j];
      grand[j] += x[i][j];
    }
  }
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t j = 0; j < b; ++j) o.means[c][j] /= o.counts[c];
  for (double& g : grand) g /= static_cast<double>(n);

  o.sw_reg = zeros(b, b);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = cls(y[i]);
    for (std::size_t p = 0; p < b; ++p)
      for (std::size_t q = 0; q < b; ++q) o.sw_reg[p][q] += (x[i][p] - o.means[c][p]) * (x[i][q] - o.means[c][q]);
  }
  const double denom = n == k ? static_cast<double>(n) : static_cast<double>(n - k);
  double trace = 0.0;
  for (std::size_t p = 0; p < b; ++p) {
    for (std::size_t q = 0; q < b; ++q) o.sw_reg[p][q] /= denom;
    trace += o.sw_reg[p][p];
  }
  const double scale = trace > 0.0 ? trace / static_cast<double>(b) : 1.0;
  for (std::size_t p = 0; p < b; ++p) o.sw_reg[p][p] += gamma * scale;

  o.sb = zeros(b, b);
  for (std::size_t c = 0; c < k; ++c) {
    const double w = o.counts[c] / static_cast<double>(n);
    for (std::size_t p = 0; p < b; ++p)
      for (std::size_t q = 0; q < b; ++q) o.sb[p][q] += w * (o.means[c][p] - grand[p]) * (o.means[c][q] - grand[q]);
  }
  return o;
}

// Eigenvalues of L^-1 S_b L^-T, descending.
inline std::vector<double> whitened_eigenvalues(const ScatterOracle& o) {
  const Dense li = lower_inverse(cholesky(o.sw_reg));
  return jacobi_eigenvalues(multiply(multiply(li, o.sb), transpose(li)));
}

// Discriminant argmax via explicit solves; ties go to the lower class index.
inline int oracle_predict(const ScatterOracle& o, const std::vector<double>& priors, const std::vector<double>& x) {
  std::size_t best = 0;
  double best_score = -INFINITY;
  for (std::size_t c = 0; c < o.classes.size(); ++c) {
    const auto a = solve(o.sw_reg, o.means[c]);
    double s = std::log(priors[c]);
    for (std::size_t j = 0; j < x.size(); ++j) s += x[j] * a[j] - 0.5 * o.means[c][j] * a[j];
    if (s > best_score) {
      best_score = s;
      best = c;
    }
  }
  return o.classes[best];
}

// Random labelled instance with every class present at least twice.
struct LdaInstance {
  Dense x;
  std::vector<int> y;
};

inline LdaInstance random_instance(std::mt19937_64& gen, std::size_t n, std::size_t b, std::size_t k) {
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  Dense centers = zeros(k, b);
  for (auto& row : centers)
    for (double& v : row) v = 2.0 * normal(gen);
  LdaInstance inst;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i < 2 * k ? i % k : pick(gen);
    std::vector<double> row(b);
    for (std::size_t j = 0; j < b; ++j) row[j] = centers[c][j] + normal(gen);
    inst.x.push_back(std::move(row));
    inst.y.push_back(static_cast<int>(c));
  }
  return inst;
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("skinspec-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  f << content;
}

inline HsiCube random_cube(std::mt19937_64& gen, std::size_t w, std::size_t h, std::size_t b) {
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  std::vector<float> v(w * h * b);
  for (auto& x : v) x = u(gen);
  return HsiCube(w, h, WavelengthGrid::uniform(500, 1000, b), std::move(v));
}

inline AnnotationMask random_mask(std::mt19937_64& gen, std::size_t w, std::size_t h) {
  std::bernoulli_distribution coin(0.4);
  std::vector<std::uint8_t> bits(w * h);
  for (auto& b : bits) b = coin(gen);
  bits[std::uniform_int_distribution<std::size_t>(0, bits.size() - 1)(gen)] = 1;
  return AnnotationMask(w, h, std::move(bits));
}

// Per-band median by full sort, even counts averaged in double.
inline std::vector<double> sort_median(const HsiCube& cube, const AnnotationMask& mask) {
  std::vector<double> out;
  for (std::size_t b = 0; b < cube.bands(); ++b) {
    std::vector<float> vals;
    for (std::size_t r = 0; r < cube.height(); ++r)
      for (std::size_t c = 0; c < cube.width(); ++c)
        if (mask.included(r, c)) vals.push_back(cube.at(b, r, c));
    std::sort(vals.begin(), vals.end());
    const std::size_t n = vals.size();
    out.push_back(n % 2 ? vals[n / 2] : (static_cast<double>(vals[n / 2 - 1]) + static_cast<double>(vals[n / 2])) / 2.0);
  }
  return out;
}

// Spectrum helper for hand-built cohorts.
inline MedianSpectrum spectrum(std::string id, Group g, std::vector<double> values, Site site = Site::hand,
                               int tp = 0) {
  MedianSpectrum s;
  s.values = std::move(values);
  s.meta.subject_id = std::move(id);
  s.meta.group = g;
  s.meta.site = site;
  s.meta.timepoint_index = tp;
  return s;
}

}  // namespace skinspec::test
