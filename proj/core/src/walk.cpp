#include "dust/walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "dust/error.hpp"

namespace dust {

namespace {

std::vector<char> membership(std::size_t n, std::span<const Vertex> set,
                             const char* what) {
  std::vector<char> mask(n, 0);
  for (Vertex v : set) {
    detail::require(v < n, std::string(what) + " vertex out of range");
    mask[v] = 1;
  }
  return mask;
}

Eigen::MatrixXd transition_eigen(const WeightedGraph& g, Laziness lazy) {
  const auto flat = transition_matrix(g, lazy);
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd p(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) p(i, j) = flat[i * n + j];
  }
  return p;
}

double binomial_stderr(double p, std::size_t reps) {
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(reps));
}

}  // namespace

WalkSampler::WalkSampler(const WeightedGraph& g) : graph_(&g) {
  const std::size_t n = g.size();
  cumulative_.resize(n * n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto r = g.row(static_cast<Vertex>(v));
    std::partial_sum(r.begin(), r.end(), cumulative_.begin() + v * n);
  }
  stationary_cumulative_.resize(n);
  const auto deg = g.degrees();
  std::partial_sum(deg.begin(), deg.end(), stationary_cumulative_.begin());
}

Vertex WalkSampler::step(Vertex v, Rng& rng) const {
  const std::size_t n = size();
  const double* row = cumulative_.data() + static_cast<std::size_t>(v) * n;
  const double total = row[n - 1];
  if (!(total > 0.0)) throw ValidationError("walk reached an isolated vertex");
  const double r = uniform01(rng) * total;
  const double* it = std::upper_bound(row, row + n, r);
  if (it == row + n) it = std::lower_bound(row, row + n, total);
  return static_cast<Vertex>(it - row);
}

Vertex WalkSampler::stationary_draw(Rng& rng) const {
  const double total = stationary_cumulative_.back();
  if (!(total > 0.0)) throw ValidationError("graph has no edges");
  const double r = uniform01(rng) * total;
  auto it = std::upper_bound(stationary_cumulative_.begin(),
                             stationary_cumulative_.end(), r);
  if (it == stationary_cumulative_.end()) {
    it = std::lower_bound(stationary_cumulative_.begin(),
                          stationary_cumulative_.end(), total);
  }
  return static_cast<Vertex>(it - stationary_cumulative_.begin());
}

std::vector<double> stationary(const WeightedGraph& g) {
  detail::require(g.total_degree() > 0.0,
                  "stationary law needs positive total weight");
  std::vector<double> pi(g.size());
  const long double total = g.total_degree();
  for (std::size_t v = 0; v < g.size(); ++v) {
    pi[v] = static_cast<double>(g.degree(static_cast<Vertex>(v)) / total);
  }
  return pi;
}

std::vector<double> transition_matrix(const WeightedGraph& g, Laziness lazy) {
  const std::size_t n = g.size();
  const double keep = lazy == Laziness::half ? 0.5 : 0.0;
  std::vector<double> p(n * n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    const double deg = g.degree(static_cast<Vertex>(v));
    if (deg <= 0.0) {
      p[v * n + v] = 1.0;
      continue;
    }
    const auto r = g.row(static_cast<Vertex>(v));
    for (std::size_t u = 0; u < n; ++u) {
      p[v * n + u] = (1.0 - keep) * r[u] / deg;
    }
    p[v * n + v] += keep;
  }
  return p;
}

std::size_t mixing_time_exact(const WeightedGraph& g, Laziness lazy,
                              std::size_t max_steps) {
  const std::size_t n = g.size();
  detail::require(n <= kMixingMaxVertices,
                  "mixing_time_exact is limited to 2000 vertices");
  if (n == 1) return 0;
  const auto pi_vec = stationary(g);
  const Eigen::RowVectorXd pi =
      Eigen::Map<const Eigen::RowVectorXd>(pi_vec.data(), n);
  const Eigen::MatrixXd p = transition_eigen(g, lazy);
  Eigen::MatrixXd pt = Eigen::MatrixXd::Identity(n, n);
  for (std::size_t t = 0; t <= max_steps; ++t) {
    const double gap = 0.5 * (pt.rowwise() - pi).cwiseAbs().rowwise().sum().maxCoeff();
    if (gap <= 0.25) return t;
    pt = pt * p;
  }
  throw BudgetExceeded("walk did not mix within " + std::to_string(max_steps) +
                       " steps");
}

double max_tv_distance(const WeightedGraph& g, Laziness lazy, std::size_t t) {
  const std::size_t n = g.size();
  detail::require(n <= kMixingMaxVertices,
                  "max_tv_distance is limited to 2000 vertices");
  const auto pi_vec = stationary(g);
  const Eigen::RowVectorXd pi =
      Eigen::Map<const Eigen::RowVectorXd>(pi_vec.data(), n);
  const Eigen::MatrixXd p = transition_eigen(g, lazy);
  Eigen::MatrixXd pt = Eigen::MatrixXd::Identity(n, n);
  for (std::size_t s = 0; s < t; ++s) pt = pt * p;
  return 0.5 * (pt.rowwise() - pi).cwiseAbs().rowwise().sum().maxCoeff();
}

MixingBoundReport check_mixing_bound(const WeightedGraph& g, std::uint64_t seed,
                                     std::size_t mc_trials) {
  MixingBoundReport report;
  report.t_mix = mixing_time_exact(g, Laziness::half);
  if (g.size() <= kExactExpanderMaxVertices) {
    report.gamma = expander_gamma_exact(g);
    report.gamma_source = "exact";
  } else {
    report.gamma = expander_gamma_mc(g, seed, mc_trials).gamma_upper;
    report.gamma_source = "mc-upper-bound";
  }
  const double log_n = std::log(static_cast<double>(g.size()));
  report.bound = report.gamma > 0.0
                     ? 64.0 * std::pow(report.gamma, -4.0) * log_n
                     : std::numeric_limits<double>::infinity();
  report.holds = report.gamma > 0.0 &&
                 static_cast<double>(report.t_mix) <= report.bound;
  return report;
}

std::vector<double> hitting_function(const WeightedGraph& g,
                                     std::span<const Vertex> a,
                                     std::span<const Vertex> b) {
  const std::size_t n = g.size();
  detail::require(!a.empty() && !b.empty(), "A and B must be nonempty");
  const auto in_a = membership(n, a, "A");
  const auto in_b = membership(n, b, "B");
  for (std::size_t v = 0; v < n; ++v) {
    detail::require(!(in_a[v] && in_b[v]), "A and B must be disjoint");
  }

  // Vertices that can reach A u B.
  std::vector<char> reach(n, 0);
  std::vector<Vertex> stack;
  for (std::size_t v = 0; v < n; ++v) {
    if (in_a[v] || in_b[v]) {
      reach[v] = 1;
      stack.push_back(static_cast<Vertex>(v));
    }
  }
  while (!stack.empty()) {
    const Vertex u = stack.back();
    stack.pop_back();
    const auto r = g.row(u);
    for (std::size_t v = 0; v < n; ++v) {
      if (r[v] > 0.0 && !reach[v]) {
        reach[v] = 1;
        stack.push_back(static_cast<Vertex>(v));
      }
    }
  }
  if (std::find(reach.begin(), reach.end(), 0) != reach.end()) {
    throw NumericalError("A u B is unreachable from part of the graph");
  }

  std::vector<std::size_t> interior;
  std::vector<std::size_t> slot(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (!in_a[v] && !in_b[v]) {
      slot[v] = interior.size();
      interior.push_back(v);
    }
  }
  std::vector<double> h(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) h[v] = in_a[v] ? 1.0 : 0.0;
  if (interior.empty()) return h;

  const auto m = static_cast<Eigen::Index>(interior.size());
  Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto v = static_cast<Vertex>(interior[i]);
    const double deg = g.degree(v);
    const auto r = g.row(v);
    for (std::size_t u = 0; u < n; ++u) {
      if (r[u] <= 0.0) continue;
      const double p = r[u] / deg;
      if (in_a[u]) {
        rhs(i) += p;
      } else if (!in_b[u]) {
        lhs(i, static_cast<Eigen::Index>(slot[u])) -= p;
      }
    }
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);
  const Eigen::VectorXd sol = lu.solve(rhs);
  const double residual = (lhs * sol - rhs).cwiseAbs().maxCoeff();
  if (!std::isfinite(residual) || residual > 1e-8) {
    throw NumericalError("harmonic solve residual too large");
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    h[interior[i]] = std::clamp(sol(i), 0.0, 1.0);
  }
  return h;
}

double hitting_prob_exact(const WeightedGraph& g, std::span<const Vertex> a,
                          std::span<const Vertex> b, Vertex start) {
  detail::require(start < g.size(), "start vertex out of range");
  return hitting_function(g, a, b)[start];
}

double hitting_prob_stationary(const WeightedGraph& g,
                               std::span<const Vertex> a,
                               std::span<const Vertex> b) {
  const auto h = hitting_function(g, a, b);
  const auto pi = stationary(g);
  long double acc = 0.0L;
  for (std::size_t v = 0; v < h.size(); ++v) acc += pi[v] * h[v];
  return static_cast<double>(acc);
}

double hitting_prob_plus_exact(const WeightedGraph& g,
                               std::span<const Vertex> a,
                               std::span<const Vertex> b, Vertex start) {
  detail::require(start < g.size(), "start vertex out of range");
  if (std::find(a.begin(), a.end(), start) != a.end()) {
    detail::require(std::find(b.begin(), b.end(), start) == b.end(),
                    "A and B must be disjoint");
    return 1.0;
  }
  const auto h = hitting_function(g, a, b);
  const double deg = g.degree(start);
  if (deg <= 0.0) throw NumericalError("start vertex is isolated");
  const auto r = g.row(start);
  long double acc = 0.0L;
  for (std::size_t u = 0; u < g.size(); ++u) acc += r[u] * h[u];
  return static_cast<double>(acc / deg);
}

std::vector<double> hit_within(const WeightedGraph& g,
                               std::span<const Vertex> u, std::size_t k) {
  const std::size_t n = g.size();
  const auto in_u = membership(n, u, "U");
  std::vector<double> f(n), next(n);
  for (std::size_t v = 0; v < n; ++v) f[v] = in_u[v] ? 1.0 : 0.0;
  if (u.empty()) return f;
  for (std::size_t t = 0; t < k; ++t) {
    for (std::size_t v = 0; v < n; ++v) {
      if (in_u[v]) {
        next[v] = 1.0;
        continue;
      }
      const double deg = g.degree(static_cast<Vertex>(v));
      if (deg <= 0.0) {
        next[v] = 0.0;
        continue;
      }
      const auto r = g.row(static_cast<Vertex>(v));
      double acc = 0.0;
      for (std::size_t w = 0; w < n; ++w) acc += r[w] * f[w];
      next[v] = acc / deg;
    }
    std::swap(f, next);
  }
  return f;
}

double capacity_exact(const WeightedGraph& g, std::span<const Vertex> u,
                      std::size_t k) {
  const auto f = hit_within(g, u, k);
  const auto pi = stationary(g);
  long double acc = 0.0L;
  for (std::size_t v = 0; v < f.size(); ++v) acc += pi[v] * f[v];
  return std::min(1.0, static_cast<double>(acc));
}

Estimate window_capacity_mc(const WalkSampler& walk, std::span<const Vertex> u,
                            std::size_t positions, std::size_t reps, Rng& rng) {
  detail::require(reps >= 1, "reps must be positive");
  Estimate est;
  est.samples = reps;
  if (u.empty() || positions == 0) return est;
  const auto in_u = membership(walk.size(), u, "U");
  std::size_t hits = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    Vertex x = walk.stationary_draw(rng);
    for (std::size_t t = 0;; ++t) {
      if (in_u[x]) {
        ++hits;
        break;
      }
      if (t + 1 == positions) break;
      x = walk.step(x, rng);
    }
  }
  est.value = static_cast<double>(hits) / static_cast<double>(reps);
  est.stderr_ = binomial_stderr(est.value, reps);
  return est;
}

Estimate capacity_mc(const WalkSampler& walk, std::span<const Vertex> u,
                     std::size_t k, std::size_t reps, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0, Stream::capacity);
  return window_capacity_mc(walk, u, k + 1, reps, rng);
}

Estimate closeness_mc(const WalkSampler& walk, std::span<const Vertex> u,
                      std::span<const Vertex> w, std::size_t k,
                      std::size_t reps, std::uint64_t seed) {
  detail::require(reps >= 1, "reps must be positive");
  const std::size_t n = walk.size();
  const auto in_u = membership(n, u, "U");
  const auto in_w = membership(n, w, "W");
  for (std::size_t v = 0; v < n; ++v) {
    detail::require(!(in_u[v] && in_w[v]), "U and W must be disjoint");
  }
  Estimate est;
  est.samples = reps;
  if (u.empty() || w.empty() || k == 0) return est;
  Rng rng = make_rng(seed, 0, Stream::capacity);
  std::size_t hits = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    Vertex x = walk.stationary_draw(rng);
    bool seen_u = false;
    bool seen_w = false;
    for (std::size_t t = 0;; ++t) {
      seen_u = seen_u || in_u[x];
      seen_w = seen_w || in_w[x];
      if (seen_u && seen_w) {
        ++hits;
        break;
      }
      if (t + 1 == k) break;
      x = walk.step(x, rng);
    }
  }
  est.value = static_cast<double>(hits) / static_cast<double>(reps);
  est.stderr_ = binomial_stderr(est.value, reps);
  return est;
}

double closeness_exact(const WeightedGraph& g, std::span<const Vertex> u,
                       std::span<const Vertex> w, std::size_t k) {
  const std::size_t n = g.size();
  const auto in_u = membership(n, u, "U");
  const auto in_w = membership(n, w, "W");
  if (u.empty() || w.empty() || k == 0) return 0.0;
  const auto pi = stationary(g);
  const auto p = transition_matrix(g, Laziness::none);
  auto flags = [&](std::size_t v) {
    return (in_u[v] ? 1u : 0u) | (in_w[v] ? 2u : 0u);
  };
  // mass[s][v]: probability of being at v with hit-flags s.
  std::vector<std::vector<double>> mass(4, std::vector<double>(n, 0.0));
  for (std::size_t v = 0; v < n; ++v) mass[flags(v)][v] = pi[v];
  for (std::size_t t = 1; t < k; ++t) {
    std::vector<std::vector<double>> next(4, std::vector<double>(n, 0.0));
    for (unsigned s = 0; s < 4; ++s) {
      for (std::size_t v = 0; v < n; ++v) {
        const double m = mass[s][v];
        if (m == 0.0) continue;
        for (std::size_t x = 0; x < n; ++x) {
          const double q = p[v * n + x];
          if (q != 0.0) next[s | flags(x)][x] += m * q;
        }
      }
    }
    mass = std::move(next);
  }
  long double total = 0.0L;
  for (double m : mass[3]) total += m;
  return static_cast<double>(total);
}

double closeness_upper_bound(const WeightedGraph& g, std::size_t u_size,
                             std::size_t w_size, std::size_t k) {
  const double delta = min_degree_density(g);
  const double n = static_cast<double>(g.size());
  if (delta <= 0.0) return std::numeric_limits<double>::infinity();
  const double kd = static_cast<double>(k);
  return 2.0 * kd * kd * static_cast<double>(u_size) *
         static_cast<double>(w_size) / (delta * n * delta * n);
}

AlphaNEstimate alpha_n_capacity(const WeightedGraph& g,
                                const AlphaNConfig& config) {
  detail::require(config.kappa > 0.0 && config.kappa <= 1.0 / 32.0,
                  "kappa must lie in (0, 1/32]");
  detail::require(config.outer >= 2 && config.inner >= 1,
                  "alpha-n needs outer >= 2 and inner >= 1");
  detail::require(g.total_degree() > 0.0, "graph has no edges");
  const double n = static_cast<double>(g.size());
  AlphaNEstimate out;
  out.config = config;
  out.horizon = static_cast<std::size_t>(std::ceil(std::pow(n, config.kappa)));
  out.segment =
      static_cast<std::size_t>(std::ceil(std::pow(n, config.kappa / 2.0)));
  detail::require(out.horizon >= 2,
                  "graph too small for the requested kappa (M < 2)");

  const WalkSampler walk(g);
  std::vector<double> per_outer(config.outer);
  const double scale =
      n / (static_cast<double>(out.horizon) * static_cast<double>(out.segment));
  parallel_for(config.outer, config.threads, [&](std::size_t i) {
    Rng rng = make_rng(config.seed, i, Stream::alpha);
    std::vector<Vertex> visited;
    visited.reserve(out.segment);
    Vertex x = walk.stationary_draw(rng);
    visited.push_back(x);
    for (std::size_t t = 1; t < out.segment; ++t) {
      x = walk.step(x, rng);
      visited.push_back(x);
    }
    std::sort(visited.begin(), visited.end());
    visited.erase(std::unique(visited.begin(), visited.end()), visited.end());
    const auto cap =
        window_capacity_mc(walk, visited, out.horizon, config.inner, rng);
    per_outer[i] = scale * cap.value;
  });

  const double count = static_cast<double>(config.outer);
  long double sum = 0.0L;
  for (double v : per_outer) sum += v;
  const double mean = static_cast<double>(sum / count);
  long double ss = 0.0L;
  for (double v : per_outer) ss += (v - mean) * (v - mean);
  out.value = mean;
  out.stderr_ = std::sqrt(static_cast<double>(ss / (count - 1.0)) / count);
  return out;
}

}  // namespace dust
