#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dust/graph.hpp"
#include "dust/ust.hpp"

namespace dust {

class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> samples);

  std::size_t size() const noexcept { return sorted_.size(); }
  std::span<const double> sorted() const noexcept { return sorted_; }
  /// Fraction of samples <= x.
  double cdf(double x) const;
  /// Lower empirical quantile: smallest sample s with cdf(s) >= p.
  double quantile(double p) const;
  double mean() const;
  /// Unbiased sample standard deviation (0 for a single sample).
  double stddev() const;

 private:
  std::vector<double> sorted_;
};

/// sup_x |F_n(x) - F(x)| against a continuous reference CDF.
double ks_distance(std::span<const double> samples,
                   const std::function<double(double)>& cdf);
double ks_distance(const EmpiricalDistribution& sample,
                   const std::function<double(double)>& cdf);

/// sup_x |F_a(x) - F_b(x)|.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Asymptotic Kolmogorov p-value for a two-sample statistic.
double ks_two_sample_pvalue(double statistic, std::size_t n_a,
                            std::size_t n_b);

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 0.0;
};

/// Pearson goodness of fit of observed counts against expected
/// probabilities (which must sum to 1).
ChiSquareResult chi_square_test(std::span<const std::size_t> observed,
                                std::span<const double> expected);

/// 1 - exp(-x^2 / 2): the law of the CRT distance between two uniform
/// points.
double crt_two_point_cdf(double x);

enum class RescalingMode { alpha_tilde, alpha_mc, fixed, alpha_w };

std::string to_string(RescalingMode mode);
RescalingMode rescaling_mode_from_string(const std::string& name);

struct ExperimentConfig {
  std::size_t k = 2;
  std::size_t replicates = 2000;
  RescalingMode rescaling = RescalingMode::alpha_tilde;
  /// Used by `fixed` and `alpha_w` (the caller evaluates alpha_w).
  double alpha_value = 1.0;
  /// alpha_mc settings.
  double kappa = 0.02;
  std::size_t alpha_outer = 2000;
  std::size_t alpha_inner = 2000;
  /// Reference CRT matrices drawn for the k >= 3 comparison.
  std::size_t crt_samples = 20000;
  double ks_threshold = 0.08;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

/// Distance matrices among k sampled vertices per replicate, with the
/// rescaling metadata needed to reproduce the scaled values.
struct DistanceSample {
  std::size_t n = 0;
  std::size_t k = 0;
  double alpha = 1.0;
  /// sqrt(alpha / n); rescaled = raw * factor.
  double factor = 0.0;
  std::vector<Vertex> points;        // replicates x k
  std::vector<std::size_t> raw;      // replicates x k x k
  std::size_t replicates() const noexcept { return k == 0 ? 0 : points.size() / k; }
  /// All i < j rescaled distances, replicate-major.
  std::vector<double> pooled_rescaled() const;
};

struct ScalingReport {
  ExperimentConfig config;
  std::size_t n = 0;
  double alpha = 1.0;
  std::string alpha_source;
  double alpha_stderr = 0.0;
  /// KS of every rescaled pair distance against 1 - exp(-x^2/2).
  double ks_two_point = 0.0;
  /// k >= 3: two-sample KS against pooled CRT k-point distances.
  std::optional<double> ks_joint;
  double mean = 0.0;
  double stddev = 0.0;
  double crt_mean = 0.0;  // sqrt(pi/2)
  bool pass = false;
  std::vector<std::string> notes;
  DistanceSample sample;
};

/// Samples `replicates` Wilson runs spanning k i.i.d. uniform vertices each
/// and compares the rescaled distances with the CRT. Only the subtree
/// spanned by the k points is sampled, which has the law of the
/// corresponding subtree of a full UST.
ScalingReport verify_scaling(const WeightedGraph& g,
                             const ExperimentConfig& config);

/// CSV rows replicate,i,j,raw_distance,rescaled_distance (i < j).
std::string distance_csv(const DistanceSample& sample);

/// min_v |B_T(v, floor(c sqrt(n)))| / n by truncated BFS from every vertex,
/// stopping a search once its ball is no smaller than the current minimum.
double lower_mass_bound(const SpanningTree& t, double c);

struct LmbReport {
  double c = 0.0;
  std::size_t replicates = 0;
  std::vector<double> values;
  double q05 = 0.0;
  double q50 = 0.0;
  double q95 = 0.0;
  double epsilon = 0.0;
  double fraction_below = 0.0;
};

LmbReport lmb_experiment(const WeightedGraph& g, double c,
                         std::size_t replicates, std::uint64_t seed,
                         double epsilon = 0.02, unsigned threads = 0);

}  // namespace dust
