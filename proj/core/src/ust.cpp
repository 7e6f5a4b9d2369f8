#include "dust/ust.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>
#include <unordered_map>

#include <Eigen/Dense>

#include "dust/error.hpp"

namespace dust {

Path loop_erase(std::span<const Vertex> walk) {
  detail::require(!walk.empty(), "loop_erase needs a nonempty walk");
  std::unordered_map<Vertex, std::size_t> last;
  last.reserve(walk.size());
  for (std::size_t t = 0; t < walk.size(); ++t) last[walk[t]] = t;
  Path out;
  std::size_t pos = 0;
  while (pos < walk.size()) {
    const Vertex y = walk[pos];
    out.push_back(y);
    pos = last[y] + 1;
  }
  return out;
}

Path lerw_to_set(const WalkSampler& walk, Vertex start,
                 std::span<const Vertex> target, Rng& rng,
                 std::uint64_t step_cap) {
  const std::size_t n = walk.size();
  detail::require(start < n, "start vertex out of range");
  detail::require(!target.empty(), "target set must be nonempty");
  std::vector<char> in_target(n, 0);
  for (Vertex v : target) {
    detail::require(v < n, "target vertex out of range");
    in_target[v] = 1;
  }
  detail::require(!in_target[start], "start must lie outside the target");
  Path trace{start};
  Vertex x = start;
  std::uint64_t steps = 0;
  while (!in_target[x]) {
    if (++steps > step_cap) {
      throw BudgetExceeded("LERW exceeded the step cap of " +
                           std::to_string(step_cap));
    }
    x = walk.step(x, rng);
    trace.push_back(x);
  }
  return loop_erase(trace);
}

SpanningTree::SpanningTree(Vertex root, std::vector<Vertex> parent)
    : root_(root), parent_(std::move(parent)) {
  validate();
}

SpanningTree::SpanningTree(Vertex root, std::vector<Vertex> parent,
                           std::vector<std::size_t> branch_step,
                           std::vector<std::size_t> branch_pos,
                           std::vector<Branch> branches)
    : root_(root),
      parent_(std::move(parent)),
      branch_step_(std::move(branch_step)),
      branch_pos_(std::move(branch_pos)),
      branches_(std::move(branches)) {
  detail::require(branch_step_.size() == parent_.size() &&
                      branch_pos_.size() == parent_.size(),
                  "provenance arrays must have one entry per vertex");
  validate();
  for (std::size_t v = 0; v < parent_.size(); ++v) {
    const bool in = contains(static_cast<Vertex>(v));
    detail::require(in == (branch_step_[v] != kNoStep),
                    "branch_step must be set exactly on tree vertices");
    if (in) {
      detail::require(branch_step_[v] < branches_.size(),
                      "branch_step refers to a missing branch");
    }
  }
}

void SpanningTree::validate() {
  const std::size_t n = parent_.size();
  detail::require(n >= 1, "tree must have at least one vertex slot");
  detail::require(root_ < n, "root out of range");
  detail::require(parent_[root_] == kNoVertex, "root must have no parent");
  constexpr std::size_t unset = kNoStep;
  depth_.assign(n, unset);
  depth_[root_] = 0;
  covered_ = 0;
  std::vector<Vertex> chain;
  for (std::size_t s = 0; s < n; ++s) {
    if (!contains(static_cast<Vertex>(s))) continue;
    ++covered_;
    Vertex v = static_cast<Vertex>(s);
    chain.clear();
    while (depth_[v] == unset) {
      chain.push_back(v);
      const Vertex p = parent_[v];
      detail::require(p < n, "parent out of range");
      detail::require(contains(p), "parent is not a tree vertex");
      detail::require(chain.size() <= n, "parent pointers contain a cycle");
      v = p;
    }
    std::size_t d = depth_[v];
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) depth_[*it] = ++d;
  }
}

std::vector<std::pair<Vertex, Vertex>> SpanningTree::edges() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  for (std::size_t v = 0; v < parent_.size(); ++v) {
    if (parent_[v] != kNoVertex) out.emplace_back(static_cast<Vertex>(v), parent_[v]);
  }
  return out;
}

std::vector<std::vector<Vertex>> SpanningTree::adjacency() const {
  std::vector<std::vector<Vertex>> adj(parent_.size());
  for (const auto& [c, p] : edges()) {
    adj[c].push_back(p);
    adj[p].push_back(c);
  }
  return adj;
}

void SpanningTree::check_edges(const WeightedGraph& g) const {
  detail::require(g.size() == size(), "tree and graph sizes differ");
  for (const auto& [c, p] : edges()) {
    detail::require(g.weight(c, p) > 0.0, "tree edge has zero weight in graph");
  }
}

SpanningTree wilson_partial(const WalkSampler& walk,
                            std::span<const Vertex> ordering, Rng& rng,
                            std::uint64_t step_cap) {
  const std::size_t n = walk.size();
  detail::require(!ordering.empty(), "ordering must be nonempty");
  std::vector<char> seen(n, 0);
  for (Vertex v : ordering) {
    detail::require(v < n, "ordering vertex out of range");
    detail::require(!seen[v], "ordering must not repeat vertices");
    seen[v] = 1;
  }

  std::vector<Vertex> parent(n, kNoVertex);
  std::vector<std::size_t> step(n, kNoStep);
  std::vector<std::size_t> pos(n, kNoStep);
  std::vector<char> in_tree(n, 0);
  std::vector<Vertex> next(n, kNoVertex);
  std::vector<Branch> branches;
  branches.reserve(ordering.size());

  const Vertex root = ordering[0];
  in_tree[root] = 1;
  step[root] = 0;
  pos[root] = 0;
  branches.push_back({root, root, 0});

  std::uint64_t steps = 0;
  for (std::size_t i = 1; i < ordering.size(); ++i) {
    const Vertex u = ordering[i];
    if (in_tree[u]) {
      branches.push_back({u, u, 0});
      continue;
    }
    Vertex v = u;
    while (!in_tree[v]) {
      if (++steps > step_cap) {
        throw BudgetExceeded("Wilson walk exceeded the step cap of " +
                             std::to_string(step_cap));
      }
      next[v] = walk.step(v, rng);
      v = next[v];
    }
    const Vertex hit = v;
    std::size_t len = 0;
    for (v = u; !in_tree[v]; v = next[v]) {
      in_tree[v] = 1;
      parent[v] = next[v];
      step[v] = i;
      pos[v] = len++;
    }
    branches.push_back({u, hit, len});
  }
  return SpanningTree(root, std::move(parent), std::move(step), std::move(pos),
                      std::move(branches));
}

SpanningTree wilson_ust(const WalkSampler& walk,
                        std::span<const Vertex> ordering, Rng& rng,
                        std::uint64_t step_cap) {
  detail::require(ordering.size() == walk.size(),
                  "ordering must be a permutation of all vertices");
  return wilson_partial(walk, ordering, rng, step_cap);
}

std::vector<Vertex> random_ordering(std::size_t n, Rng& rng) {
  std::vector<Vertex> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<Vertex>(i);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[uniform_index(rng, i)]);
  }
  return order;
}

SpanningTree wilson_ust(const WeightedGraph& g, std::uint64_t seed) {
  detail::require(g.is_connected(), "UST needs a connected graph");
  const WalkSampler walk(g);
  Rng rng = make_rng(seed, 0, Stream::ust);
  const auto order = random_ordering(g.size(), rng);
  return wilson_ust(walk, order, rng);
}

double effective_resistance(const WeightedGraph& g, Vertex u, Vertex v) {
  const std::size_t n = g.size();
  detail::require(u < n && v < n, "vertex out of range");
  if (u == v) return 0.0;
  detail::require(g.is_connected(), "effective resistance needs a connected graph");
  // Ground v and inject a unit current at u.
  const auto m = static_cast<Eigen::Index>(n - 1);
  auto idx = [v](std::size_t x) {
    return static_cast<Eigen::Index>(x < v ? x : x - 1);
  };
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t a = 0; a < n; ++a) {
    if (a == v) continue;
    lap(idx(a), idx(a)) = g.degree(static_cast<Vertex>(a));
    for (std::size_t b = 0; b < n; ++b) {
      if (b == v || b == a) continue;
      lap(idx(a), idx(b)) = -g.weight(static_cast<Vertex>(a), static_cast<Vertex>(b));
    }
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  rhs(idx(u)) = 1.0;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(lap);
  const Eigen::VectorXd phi = lu.solve(rhs);
  const double residual = (lap * phi - rhs).cwiseAbs().maxCoeff();
  if (!std::isfinite(residual) || residual > 1e-8) {
    throw NumericalError("Laplacian solve residual too large");
  }
  return phi(idx(u));
}

double edge_prob_exact(const WeightedGraph& g, Vertex u, Vertex v) {
  detail::require(u < g.size() && v < g.size() && u != v,
                  "edge endpoints must be distinct vertices");
  const double w = g.weight(u, v);
  detail::require(w > 0.0, "edge must have positive weight");
  return std::min(1.0, w * effective_resistance(g, u, v));
}

std::vector<double> laplacian_next_step_dist(const WeightedGraph& g,
                                             std::span<const Vertex> target,
                                             std::span<const Vertex> path) {
  detail::require(!path.empty(), "path must contain the current vertex");
  const Vertex current = path.back();
  detail::require(current < g.size(), "current vertex out of range");
  const auto h = hitting_function(g, target, path);
  const auto r = g.row(current);
  std::vector<double> out(g.size(), 0.0);
  long double total = 0.0L;
  for (std::size_t v = 0; v < g.size(); ++v) {
    out[v] = r[v] * h[v];
    total += out[v];
  }
  if (!(total > 0.0L)) {
    throw NumericalError("the walk cannot reach the target before the path");
  }
  for (double& x : out) x = static_cast<double>(x / total);
  return out;
}

PathFactorisation lerw_path_factorisation(
    const WeightedGraph& g, std::span<const Vertex> target,
    std::span<const Vertex> prefix, std::span<const Vertex> continuation) {
  detail::require(!prefix.empty(), "prefix must contain u_0");
  PathFactorisation out{1.0, 1.0};
  std::vector<Vertex> avoided(prefix.begin(), prefix.end());
  Vertex prev = prefix.back();
  for (Vertex u : continuation) {
    detail::require(u < g.size(), "continuation vertex out of range");
    const double deg = g.degree(prev);
    if (deg <= 0.0) throw NumericalError("path passes an isolated vertex");
    out.walk_probability *= g.weight(prev, u) / deg;
    const auto h = hitting_function(g, target, avoided);
    long double den = 0.0L;
    const auto r = g.row(prev);
    for (std::size_t x = 0; x < g.size(); ++x) den += r[x] * h[x];
    den /= deg;
    if (!(den > 0.0L)) {
      throw NumericalError("the walk cannot reach the target before the path");
    }
    out.c *= static_cast<double>(h[u] / den);
    avoided.push_back(u);
    prev = u;
  }
  return out;
}

std::size_t tree_distance(const SpanningTree& t, Vertex u, Vertex v) {
  detail::require(u < t.size() && v < t.size(), "vertex out of range");
  detail::require(t.contains(u) && t.contains(v), "vertex is not in the tree");
  std::size_t d = 0;
  while (t.depth(u) > t.depth(v)) {
    u = t.parent(u);
    ++d;
  }
  while (t.depth(v) > t.depth(u)) {
    v = t.parent(v);
    ++d;
  }
  while (u != v) {
    u = t.parent(u);
    v = t.parent(v);
    d += 2;
  }
  return d;
}

std::vector<std::size_t> distance_matrix(const SpanningTree& t,
                                         std::span<const Vertex> vertices) {
  const std::size_t k = vertices.size();
  std::vector<std::size_t> out(k * k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const std::size_t d = tree_distance(t, vertices[i], vertices[j]);
      out[i * k + j] = d;
      out[j * k + i] = d;
    }
  }
  return out;
}

namespace {

std::vector<std::size_t> bfs(const std::vector<std::vector<Vertex>>& adj,
                             Vertex source) {
  std::vector<std::size_t> dist(adj.size(), kNoStep);
  std::deque<Vertex> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const Vertex u = queue.front();
    queue.pop_front();
    for (Vertex w : adj[u]) {
      if (dist[w] == kNoStep) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

Vertex farthest(const std::vector<std::size_t>& dist) {
  Vertex best = 0;
  std::size_t best_d = 0;
  for (std::size_t v = 0; v < dist.size(); ++v) {
    if (dist[v] != kNoStep && dist[v] >= best_d) {
      best_d = dist[v];
      best = static_cast<Vertex>(v);
    }
  }
  return best;
}

}  // namespace

std::vector<std::size_t> distances_from(const SpanningTree& t, Vertex source) {
  detail::require(source < t.size() && t.contains(source),
                  "source is not a tree vertex");
  return bfs(t.adjacency(), source);
}

std::size_t diameter(const SpanningTree& t) {
  const auto adj = t.adjacency();
  const Vertex a = farthest(bfs(adj, t.root()));
  const auto from_a = bfs(adj, a);
  return from_a[farthest(from_a)];
}

std::size_t height(const SpanningTree& t, Vertex root) {
  const auto dist = distances_from(t, root);
  return dist[farthest(dist)];
}

}  // namespace dust
