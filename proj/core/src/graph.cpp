#include "dust/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "dust/error.hpp"
#include "dust/graphon.hpp"

namespace dust {

WeightedGraph::WeightedGraph(std::size_t n)
    : WeightedGraph(n, std::vector<double>(n * n, 0.0)) {}

WeightedGraph::WeightedGraph(std::size_t n, std::vector<double> weights,
                             std::vector<double> latent)
    : n_(n), weights_(std::move(weights)), latent_(std::move(latent)) {
  detail::require(n_ >= 1, "graph must have at least one vertex");
  detail::require(n_ <= std::numeric_limits<Vertex>::max(), "graph too large");
  detail::require(weights_.size() == n_ * n_, "weight matrix must be n x n");
  detail::require(latent_.empty() || latent_.size() == n_,
                  "latent coordinates must have one entry per vertex");
  degrees_.assign(n_, 0.0);
  long double total = 0.0L;
  for (std::size_t u = 0; u < n_; ++u) {
    detail::require(weights_[u * n_ + u] == 0.0, "diagonal weights must be 0");
    long double deg = 0.0L;
    for (std::size_t v = 0; v < n_; ++v) {
      const double w = weights_[u * n_ + v];
      detail::require(std::isfinite(w) && w >= 0.0 && w <= 1.0,
                      "edge weights must lie in [0, 1]");
      detail::require(w == weights_[v * n_ + u], "weights must be symmetric");
      deg += w;
    }
    degrees_[u] = static_cast<double>(deg);
    total += deg;
  }
  total_degree_ = static_cast<double>(total);
}

WeightedGraph WeightedGraph::from_edges(std::size_t n,
                                        std::span<const Edge> edges) {
  detail::require(n >= 1, "graph must have at least one vertex");
  std::vector<double> w(n * n, 0.0);
  for (const auto& e : edges) {
    detail::require(e.u < n && e.v < n, "edge endpoint out of range");
    detail::require(e.u != e.v, "self-loops are not allowed");
    detail::require(w[e.u * n + e.v] == 0.0, "duplicate edge");
    w[e.u * n + e.v] = e.weight;
    w[e.v * n + e.u] = e.weight;
  }
  return WeightedGraph(n, std::move(w));
}

std::vector<Edge> WeightedGraph::edges() const {
  std::vector<Edge> out;
  for (Vertex u = 0; u < n_; ++u) {
    for (Vertex v = u + 1; v < n_; ++v) {
      if (weight(u, v) > 0.0) out.push_back({u, v, weight(u, v)});
    }
  }
  return out;
}

std::vector<std::size_t> WeightedGraph::components() const {
  constexpr auto unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> label(n_, unset);
  std::size_t next = 0;
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < n_; ++s) {
    if (label[s] != unset) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const Vertex u = stack.back();
      stack.pop_back();
      const auto r = row(u);
      for (Vertex v = 0; v < n_; ++v) {
        if (r[v] > 0.0 && label[v] == unset) {
          label[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return label;
}

bool WeightedGraph::is_connected() const {
  const auto label = components();
  return std::all_of(label.begin(), label.end(),
                     [](std::size_t l) { return l == 0; });
}

// ---------------------------------------------------------------- families

WeightedGraph complete(std::size_t n) {
  std::vector<double> w(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) w[i * n + i] = 0.0;
  return WeightedGraph(n, std::move(w));
}

WeightedGraph complete_bipartite(std::size_t a, std::size_t b) {
  detail::require(a >= 1 && b >= 1, "both parts must be nonempty");
  const std::size_t n = a + b;
  std::vector<double> w(n * n, 0.0);
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = a; j < n; ++j) {
      w[i * n + j] = 1.0;
      w[j * n + i] = 1.0;
    }
  }
  return WeightedGraph(n, std::move(w));
}

WeightedGraph path_graph(std::size_t n) {
  std::vector<double> w(n * n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    w[i * n + i + 1] = 1.0;
    w[(i + 1) * n + i] = 1.0;
  }
  return WeightedGraph(n, std::move(w));
}

WeightedGraph star_graph(std::size_t n) {
  std::vector<double> w(n * n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    w[i] = 1.0;
    w[i * n] = 1.0;
  }
  return WeightedGraph(n, std::move(w));
}

WeightedGraph barbell(std::size_t m) {
  detail::require(m >= 1, "clique size must be positive");
  const std::size_t n = 2 * m;
  std::vector<double> w(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && (i < m) == (j < m)) w[i * n + j] = 1.0;
    }
  }
  w[(m - 1) * n + m] = 1.0;
  w[m * n + m - 1] = 1.0;
  return WeightedGraph(n, std::move(w));
}

// ---------------------------------------------------------------- samplers

namespace {

std::vector<double> latent_uniforms(std::size_t n, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0, Stream::graph);
  std::vector<double> x(n);
  for (auto& xi : x) xi = uniform01(rng);
  return x;
}

}  // namespace

WeightedGraph sample_g(std::size_t n, const StepGraphon& w, std::uint64_t seed) {
  detail::require(n >= 1, "n must be positive");
  auto x = latent_uniforms(n, seed);
  Rng coins = make_rng(seed, 1, Stream::graph);
  std::vector<double> weights(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = w(x[i], x[j]);
      if (uniform01(coins) < p) {
        weights[i * n + j] = 1.0;
        weights[j * n + i] = 1.0;
      }
    }
  }
  return WeightedGraph(n, std::move(weights), std::move(x));
}

WeightedGraph sample_h(std::size_t n, const StepGraphon& w, std::uint64_t seed) {
  detail::require(n >= 1, "n must be positive");
  auto x = latent_uniforms(n, seed);
  std::vector<double> weights(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = w(x[i], x[j]);
      weights[i * n + j] = p;
      weights[j * n + i] = p;
    }
  }
  return WeightedGraph(n, std::move(weights), std::move(x));
}

// ---------------------------------------------------------------- statistics

double min_degree_density(const WeightedGraph& g) {
  const auto deg = g.degrees();
  return *std::min_element(deg.begin(), deg.end()) /
         static_cast<double>(g.size());
}

double alpha_tilde(const WeightedGraph& g) {
  long double sum = 0.0L;
  long double sum_sq = 0.0L;
  for (double d : g.degrees()) {
    sum += d;
    sum_sq += static_cast<long double>(d) * d;
  }
  if (sum <= 0.0L) {
    throw ValidationError("alpha_tilde undefined: graph has no edges");
  }
  return static_cast<double>(static_cast<long double>(g.size()) * sum_sq /
                             (sum * sum));
}

double expander_gamma_exact(const WeightedGraph& g) {
  const std::size_t n = g.size();
  if (n > kExactExpanderMaxVertices) {
    throw BudgetExceeded("exact expansion refused for n = " +
                         std::to_string(n) + " (limit " +
                         std::to_string(kExactExpanderMaxVertices) + ")");
  }
  detail::require(n >= 2, "expansion needs at least two vertices");
  // U and its complement give the same ratio; enumerate sets avoiding the
  // last vertex.
  const std::size_t free = n - 1;
  std::vector<double> into_u(n, 0.0);  // w(x, U) for every x
  double cut = 0.0;
  std::size_t size = 0;
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t gray = 0;
  const std::uint64_t total = std::uint64_t{1} << free;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto v = static_cast<Vertex>(std::countr_zero(step));
    gray ^= std::uint64_t{1} << v;
    const bool added = (gray >> v) & 1U;
    const auto r = g.row(v);
    if (added) {
      cut += g.degree(v) - 2.0 * into_u[v];
      ++size;
    } else {
      cut -= g.degree(v) - 2.0 * into_u[v];
      --size;
    }
    const double sign = added ? 1.0 : -1.0;
    for (std::size_t x = 0; x < n; ++x) into_u[x] += sign * r[x];
    const double ratio =
        std::max(cut, 0.0) / (static_cast<double>(size) *
                              static_cast<double>(n - size));
    best = std::min(best, ratio);
  }
  return best;
}

ExpanderEstimate expander_gamma_mc(const WeightedGraph& g, std::uint64_t seed,
                                   std::size_t trials) {
  detail::require(trials >= 1, "trials must be positive");
  const std::size_t n = g.size();
  detail::require(n >= 2, "expansion needs at least two vertices");
  ExpanderEstimate est;
  est.trials = trials;

  const auto label = g.components();
  if (std::any_of(label.begin(), label.end(),
                  [](std::size_t l) { return l != 0; })) {
    est.disconnected = true;
    est.gamma_upper = 0.0;
    for (Vertex v = 0; v < n; ++v) {
      if (label[v] == 0) est.witness.push_back(v);
    }
    return est;
  }

  auto evaluate = [&](const std::vector<char>& in, std::size_t size) {
    if (size == 0 || size == n) return std::numeric_limits<double>::infinity();
    double cut = 0.0;
    for (Vertex u = 0; u < n; ++u) {
      if (!in[u]) continue;
      const auto r = g.row(u);
      for (Vertex v = 0; v < n; ++v) {
        if (!in[v]) cut += r[v];
      }
    }
    return cut / (static_cast<double>(size) * static_cast<double>(n - size));
  };

  est.gamma_upper = std::numeric_limits<double>::infinity();
  auto record = [&](const std::vector<char>& in, double ratio) {
    if (ratio < est.gamma_upper) {
      est.gamma_upper = ratio;
      est.witness.clear();
      for (Vertex v = 0; v < n; ++v) {
        if (in[v]) est.witness.push_back(v);
      }
    }
  };

  // Singletons: w(v, V - v) / (n - 1).
  for (Vertex v = 0; v < n; ++v) {
    std::vector<char> in(n, 0);
    in[v] = 1;
    record(in, g.degree(v) / static_cast<double>(n - 1));
  }

  Rng rng = make_rng(seed, 0, Stream::expander);
  std::vector<double> into_u(n);
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<char> in(n, 0);
    const std::size_t target = 1 + uniform_index(rng, n - 1);
    std::vector<Vertex> perm(n);
    std::iota(perm.begin(), perm.end(), Vertex{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < target; ++i) in[perm[i]] = 1;
    std::size_t size = target;

    // Local search: move single vertices while the ratio decreases.
    double cut = 0.0;
    std::fill(into_u.begin(), into_u.end(), 0.0);
    for (Vertex u = 0; u < n; ++u) {
      if (!in[u]) continue;
      const auto r = g.row(u);
      for (Vertex x = 0; x < n; ++x) into_u[x] += r[x];
    }
    for (Vertex u = 0; u < n; ++u) {
      if (!in[u]) cut += into_u[u];
    }
    double ratio = cut / (static_cast<double>(size) * static_cast<double>(n - size));
    bool improved = true;
    while (improved) {
      improved = false;
      for (Vertex v = 0; v < n; ++v) {
        const bool adding = !in[v];
        const std::size_t new_size = adding ? size + 1 : size - 1;
        if (new_size == 0 || new_size == n) continue;
        const double delta = adding ? g.degree(v) - 2.0 * into_u[v]
                                    : 2.0 * into_u[v] - g.degree(v);
        const double new_ratio =
            (cut + delta) / (static_cast<double>(new_size) *
                             static_cast<double>(n - new_size));
        if (new_ratio < ratio - 1e-15) {
          in[v] = adding ? 1 : 0;
          const auto r = g.row(v);
          const double sign = adding ? 1.0 : -1.0;
          for (Vertex x = 0; x < n; ++x) into_u[x] += sign * r[x];
          cut += delta;
          size = new_size;
          ratio = new_ratio;
          improved = true;
        }
      }
    }
    record(in, evaluate(in, size));
  }
  return est;
}

GraphStats graph_stats(const WeightedGraph& g) {
  GraphStats s;
  s.min_degree_density = min_degree_density(g);
  s.alpha_tilde = g.total_degree() > 0.0 ? alpha_tilde(g) : 0.0;
  if (g.size() >= 2 && g.size() <= kExactExpanderMaxVertices) {
    s.gamma_exact = expander_gamma_exact(g);
  }
  return s;
}

}  // namespace dust
