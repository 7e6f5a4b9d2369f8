#include "dust/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>

#include "dust/crt.hpp"
#include "dust/error.hpp"
#include "dust/walk.hpp"

namespace dust {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : sorted_(std::move(samples)) {
  detail::require(!sorted_.empty(), "empirical distribution needs samples");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalDistribution::cdf(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) /
         static_cast<double>(sorted_.size());
}

double EmpiricalDistribution::quantile(double p) const {
  detail::require(p >= 0.0 && p <= 1.0, "quantile level must lie in [0, 1]");
  const double pos = std::ceil(p * static_cast<double>(sorted_.size()));
  const auto idx = static_cast<std::size_t>(std::max(pos, 1.0)) - 1;
  return sorted_[std::min(idx, sorted_.size() - 1)];
}

double EmpiricalDistribution::mean() const {
  long double acc = 0.0L;
  for (double x : sorted_) acc += x;
  return static_cast<double>(acc / sorted_.size());
}

double EmpiricalDistribution::stddev() const {
  if (sorted_.size() < 2) return 0.0;
  const double m = mean();
  long double ss = 0.0L;
  for (double x : sorted_) ss += (x - m) * (x - m);
  return std::sqrt(static_cast<double>(ss / (sorted_.size() - 1)));
}

double ks_distance(const EmpiricalDistribution& sample,
                   const std::function<double(double)>& cdf) {
  const auto xs = sample.sorted();
  const double count = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, std::max(static_cast<double>(i + 1) / count - f,
                             f - static_cast<double>(i) / count));
  }
  return std::clamp(d, 0.0, 1.0);
}

double ks_distance(std::span<const double> samples,
                   const std::function<double(double)>& cdf) {
  return ks_distance(
      EmpiricalDistribution(std::vector<double>(samples.begin(), samples.end())),
      cdf);
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  detail::require(!a.empty() && !b.empty(), "KS needs nonempty samples");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size());
  const double nb = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= t) ++i;
    while (j < y.size() && y[j] <= t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

double ks_two_sample_pvalue(double statistic, std::size_t n_a,
                            std::size_t n_b) {
  const double ne = static_cast<double>(n_a) * static_cast<double>(n_b) /
                    static_cast<double>(n_a + n_b);
  const double root = std::sqrt(ne);
  const double lambda = (root + 0.12 + 0.11 / root) * statistic;
  if (lambda < 1e-3) return 1.0;
  if (lambda < 1.18) {
    // Jacobi-transformed series, fast for small lambda.
    const double y = -std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double cdf = 0.0;
    for (int j = 1; j <= 20; ++j) {
      const double odd = 2.0 * j - 1.0;
      cdf += std::exp(odd * odd * y);
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = sign * std::exp(-2.0 * j * j * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

ChiSquareResult chi_square_test(std::span<const std::size_t> observed,
                                std::span<const double> expected) {
  detail::require(observed.size() == expected.size() && observed.size() >= 2,
                  "chi-square needs matching cell counts (at least 2)");
  std::size_t total = 0;
  for (auto c : observed) total += c;
  detail::require(total > 0, "chi-square needs observations");
  ChiSquareResult out;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    detail::require(expected[i] > 0.0, "expected probabilities must be positive");
    const double e = expected[i] * static_cast<double>(total);
    const double diff = static_cast<double>(observed[i]) - e;
    out.statistic += diff * diff / e;
  }
  out.dof = observed.size() - 1;
  const boost::math::chi_squared dist(static_cast<double>(out.dof));
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  return out;
}

double crt_two_point_cdf(double x) {
  return x <= 0.0 ? 0.0 : -std::expm1(-0.5 * x * x);
}

std::string to_string(RescalingMode mode) {
  switch (mode) {
    case RescalingMode::alpha_tilde: return "alpha_tilde";
    case RescalingMode::alpha_mc: return "alpha_mc";
    case RescalingMode::fixed: return "fixed";
    case RescalingMode::alpha_w: return "alpha_w";
  }
  return "alpha_tilde";
}

RescalingMode rescaling_mode_from_string(const std::string& name) {
  if (name == "alpha_tilde") return RescalingMode::alpha_tilde;
  if (name == "alpha_mc") return RescalingMode::alpha_mc;
  if (name == "fixed") return RescalingMode::fixed;
  if (name == "alpha_w") return RescalingMode::alpha_w;
  throw ValidationError("unknown rescaling mode: " + name);
}

std::vector<double> DistanceSample::pooled_rescaled() const {
  std::vector<double> out;
  const std::size_t reps = replicates();
  out.reserve(reps * k * (k - 1) / 2);
  for (std::size_t r = 0; r < reps; ++r) {
    const std::size_t* m = raw.data() + r * k * k;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        out.push_back(static_cast<double>(m[i * k + j]) * factor);
      }
    }
  }
  return out;
}

ScalingReport verify_scaling(const WeightedGraph& g,
                             const ExperimentConfig& config) {
  const std::size_t n = g.size();
  detail::require(config.k >= 2, "k must be at least 2");
  detail::require(config.k <= n, "k exceeds the number of vertices");
  detail::require(config.replicates >= 1, "replicates must be positive");
  detail::require(g.is_connected(), "scaling experiment needs a connected graph");

  ScalingReport report;
  report.config = config;
  report.n = n;
  switch (config.rescaling) {
    case RescalingMode::alpha_tilde:
      report.alpha = alpha_tilde(g);
      report.alpha_source = "alpha_tilde";
      break;
    case RescalingMode::alpha_mc: {
      AlphaNConfig ac;
      ac.kappa = config.kappa;
      ac.outer = config.alpha_outer;
      ac.inner = config.alpha_inner;
      ac.seed = config.seed;
      ac.threads = config.threads;
      const auto est = alpha_n_capacity(g, ac);
      report.alpha = est.value;
      report.alpha_stderr = est.stderr_;
      report.alpha_source = "alpha_mc";
      break;
    }
    case RescalingMode::fixed:
    case RescalingMode::alpha_w:
      detail::require(config.alpha_value > 0.0, "alpha must be positive");
      report.alpha = config.alpha_value;
      report.alpha_source = to_string(config.rescaling);
      break;
  }
  detail::require(report.alpha > 0.0, "estimated alpha is not positive");

  const std::size_t k = config.k;
  auto& sample = report.sample;
  sample.n = n;
  sample.k = k;
  sample.alpha = report.alpha;
  sample.factor = std::sqrt(report.alpha / static_cast<double>(n));
  sample.points.assign(config.replicates * k, 0);
  sample.raw.assign(config.replicates * k * k, 0);

  const WalkSampler walk(g);
  parallel_for(config.replicates, config.threads, [&](std::size_t r) {
    Rng point_rng = make_rng(config.seed, r, Stream::points);
    Vertex* pts = sample.points.data() + r * k;
    std::vector<Vertex> order;
    for (std::size_t i = 0; i < k; ++i) {
      pts[i] = static_cast<Vertex>(uniform_index(point_rng, n));
      if (std::find(order.begin(), order.end(), pts[i]) == order.end()) {
        order.push_back(pts[i]);
      }
    }
    Rng rng = make_rng(config.seed, r, Stream::ust);
    const auto tree = wilson_partial(walk, order, rng);
    const auto d = distance_matrix(tree, std::span<const Vertex>(pts, k));
    std::copy(d.begin(), d.end(), sample.raw.begin() + r * k * k);
  });

  const auto pooled = sample.pooled_rescaled();
  const EmpiricalDistribution ecdf(pooled);
  report.ks_two_point = ks_distance(ecdf, crt_two_point_cdf);
  report.mean = ecdf.mean();
  report.stddev = ecdf.stddev();
  report.crt_mean = std::sqrt(std::numbers::pi / 2.0);

  if (k >= 3) {
    std::vector<double> reference;
    reference.reserve(config.crt_samples * k * (k - 1) / 2);
    Rng crt_rng = make_rng(config.seed, 0, Stream::crt);
    for (std::size_t s = 0; s < config.crt_samples; ++s) {
      const auto m = crt_distance_matrix(k, crt_rng);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) reference.push_back(m[i * k + j]);
      }
    }
    report.ks_joint = ks_two_sample(pooled, reference);
  }
  report.pass = report.ks_two_point <= config.ks_threshold &&
                (!report.ks_joint || *report.ks_joint <= config.ks_threshold);
  report.notes.push_back(
      "no convergence rate is known for the scaling limit; the KS threshold "
      "is an empirical finite-n tolerance");
  if (k >= 3) {
    report.notes.push_back(
        "ks_joint pools all pair distances of each replicate; pairs within a "
        "replicate are dependent");
  }
  return report;
}

std::string distance_csv(const DistanceSample& sample) {
  std::ostringstream out;
  out.precision(17);
  out << "replicate,i,j,raw_distance,rescaled_distance\n";
  const std::size_t k = sample.k;
  for (std::size_t r = 0; r < sample.replicates(); ++r) {
    const std::size_t* m = sample.raw.data() + r * k * k;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        const std::size_t raw = m[i * k + j];
        out << r << ',' << i << ',' << j << ',' << raw << ','
            << static_cast<double>(raw) * sample.factor << '\n';
      }
    }
  }
  return out.str();
}

double lower_mass_bound(const SpanningTree& t, double c) {
  detail::require(c > 0.0, "c must be positive");
  detail::require(t.is_spanning(), "lower mass bound needs a spanning tree");
  const std::size_t n = t.size();
  const auto radius = static_cast<std::size_t>(
      std::floor(c * std::sqrt(static_cast<double>(n))));
  const auto adj = t.adjacency();
  std::vector<std::size_t> stamp(n, 0);
  std::vector<std::size_t> dist(n, 0);
  std::vector<Vertex> queue;
  queue.reserve(n);
  std::size_t best = n;
  for (std::size_t s = 0; s < n && best > 1; ++s) {
    const std::size_t epoch = s + 1;
    queue.clear();
    queue.push_back(static_cast<Vertex>(s));
    stamp[s] = epoch;
    dist[s] = 0;
    std::size_t head = 0;
    while (head < queue.size() && queue.size() < best) {
      const Vertex u = queue[head++];
      if (dist[u] == radius) continue;
      for (Vertex w : adj[u]) {
        if (stamp[w] != epoch) {
          stamp[w] = epoch;
          dist[w] = dist[u] + 1;
          queue.push_back(w);
        }
      }
    }
    best = std::min(best, queue.size());
  }
  return static_cast<double>(best) / static_cast<double>(n);
}

LmbReport lmb_experiment(const WeightedGraph& g, double c,
                         std::size_t replicates, std::uint64_t seed,
                         double epsilon, unsigned threads) {
  detail::require(replicates >= 1, "replicates must be positive");
  detail::require(c > 0.0, "c must be positive");
  detail::require(g.is_connected(), "lower mass bound needs a connected graph");
  LmbReport report;
  report.c = c;
  report.replicates = replicates;
  report.epsilon = epsilon;
  report.values.resize(replicates);
  const WalkSampler walk(g);
  parallel_for(replicates, threads, [&](std::size_t r) {
    Rng rng = make_rng(seed, r, Stream::ust);
    const auto order = random_ordering(g.size(), rng);
    report.values[r] = lower_mass_bound(wilson_ust(walk, order, rng), c);
  });
  const EmpiricalDistribution dist(report.values);
  report.q05 = dist.quantile(0.05);
  report.q50 = dist.quantile(0.5);
  report.q95 = dist.quantile(0.95);
  std::size_t below = 0;
  for (double v : report.values) below += v < epsilon ? 1 : 0;
  report.fraction_below =
      static_cast<double>(below) / static_cast<double>(replicates);
  return report;
}

}  // namespace dust
