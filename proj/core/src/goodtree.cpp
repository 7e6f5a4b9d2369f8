#include "dust/goodtree.hpp"

#include <algorithm>
#include <cmath>

#include "dust/error.hpp"
#include "dust/walk.hpp"

namespace dust {

namespace {

std::vector<Vertex> random_connected_subset(
    const std::vector<std::vector<Vertex>>& adj,
    const std::vector<Vertex>& tree_vertices, std::size_t size, Rng& rng) {
  std::vector<char> taken(adj.size(), 0);
  std::vector<Vertex> subset;
  std::vector<Vertex> frontier;
  auto take = [&](Vertex v) {
    taken[v] = 1;
    subset.push_back(v);
    for (Vertex w : adj[v]) {
      if (!taken[w]) frontier.push_back(w);
    }
  };
  take(tree_vertices[uniform_index(rng, tree_vertices.size())]);
  while (subset.size() < size && !frontier.empty()) {
    const std::size_t i = uniform_index(rng, frontier.size());
    const Vertex v = frontier[i];
    frontier[i] = frontier.back();
    frontier.pop_back();
    if (!taken[v]) take(v);
  }
  return subset;
}

}  // namespace

GoodTreeReport goodtree_check(const WeightedGraph& g, const SpanningTree& t,
                              const GoodTreeConfig& config) {
  detail::require(config.kappa > 0.0 && config.kappa <= 1.0 / 32.0,
                  "kappa must lie in (0, 1/32]");
  detail::require(config.inner >= 1, "inner must be positive");
  detail::require(t.size() == g.size(), "tree and graph sizes differ");

  GoodTreeReport report;
  const double n = static_cast<double>(g.size());
  report.n = g.size();
  report.tree_size = t.vertex_count();
  report.horizon = static_cast<std::size_t>(std::ceil(std::pow(n, config.kappa)));
  report.alpha_tilde = alpha_tilde(g);
  report.is_tree = true;
  for (const auto& [c, p] : t.edges()) {
    report.is_tree = report.is_tree && g.weight(c, p) > 0.0;
  }
  report.size_limit = std::pow(n, 0.5 + config.kappa);
  report.size_ok = static_cast<double>(report.tree_size) <= report.size_limit;
  report.min_subset = static_cast<std::size_t>(std::ceil(std::pow(n, 3.0 * config.kappa)));

  if (report.tree_size >= report.min_subset) {
    const auto adj = t.adjacency();
    std::vector<Vertex> tree_vertices;
    for (std::size_t v = 0; v < t.size(); ++v) {
      if (t.contains(static_cast<Vertex>(v))) tree_vertices.push_back(static_cast<Vertex>(v));
    }
    const WalkSampler walk(g);
    const double shrink = std::pow(n, -config.kappa / 16.0);
    for (std::size_t s = 0; s < config.subsets; ++s) {
      Rng rng = make_rng(config.seed, s, Stream::goodtree);
      const std::size_t span = report.tree_size - report.min_subset + 1;
      const std::size_t size = report.min_subset + uniform_index(rng, span);
      const auto subset = random_connected_subset(adj, tree_vertices, size, rng);
      const auto cap =
          window_capacity_mc(walk, subset, report.horizon, config.inner, rng);
      SubsetVerdict v;
      v.size = subset.size();
      v.capacity = cap.value;
      v.stderr_ = cap.stderr_;
      v.centre = report.alpha_tilde * static_cast<double>(report.horizon) *
                 static_cast<double>(v.size) / n;
      v.half_width = v.centre * shrink;
      v.within = std::abs(v.capacity - v.centre) <= v.half_width + 3.0 * v.stderr_;
      report.within_band += v.within ? 1 : 0;
      report.subsets.push_back(v);
    }
  }
  report.good = report.is_tree && report.size_ok &&
                report.within_band == report.subsets.size();
  return report;
}

}  // namespace dust
