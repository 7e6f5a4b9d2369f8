#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "dust/graph.hpp"
#include "dust/random.hpp"
#include "dust/walk.hpp"

namespace dust {

using Path = std::vector<Vertex>;

inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();
inline constexpr std::size_t kNoStep = std::numeric_limits<std::size_t>::max();
inline constexpr std::uint64_t kDefaultStepCap = 1'000'000'000;

/// Chronological loop erasure by the last-exit recursion: Y_0 = X_0 and each
/// next vertex is the one right after the last visit to the current one.
Path loop_erase(std::span<const Vertex> walk);

/// Runs a walk from `start` until it enters `target` and returns its loop
/// erasure. The final vertex is in the target, no other one is. Throws
/// BudgetExceeded after step_cap steps.
Path lerw_to_set(const WalkSampler& walk, Vertex start,
                 std::span<const Vertex> target, Rng& rng,
                 std::uint64_t step_cap = kDefaultStepCap);

/// One Wilson step: the loop-erased branch from `start` to the current tree.
struct Branch {
  Vertex start = 0;
  /// Tree vertex where the branch attached (start itself if it was already
  /// covered, the root for step 0).
  Vertex hit = 0;
  /// Number of edges in the branch; 0 when the start was already covered.
  std::size_t length = 0;
};

/// Rooted tree over a subset of the vertices, with optional Wilson
/// provenance. Vertices outside the tree have parent kNoVertex and
/// branch_step kNoStep. Validated on construction (acyclic, connected,
/// exactly one root).
class SpanningTree {
 public:
  SpanningTree(Vertex root, std::vector<Vertex> parent);
  SpanningTree(Vertex root, std::vector<Vertex> parent,
               std::vector<std::size_t> branch_step,
               std::vector<std::size_t> branch_pos,
               std::vector<Branch> branches);

  std::size_t size() const noexcept { return parent_.size(); }
  Vertex root() const noexcept { return root_; }
  Vertex parent(Vertex v) const { return parent_[v]; }
  std::span<const Vertex> parents() const noexcept { return parent_; }
  std::size_t depth(Vertex v) const { return depth_[v]; }
  bool contains(Vertex v) const {
    return v == root_ || parent_[v] != kNoVertex;
  }
  std::size_t vertex_count() const noexcept { return covered_; }
  bool is_spanning() const noexcept { return covered_ == parent_.size(); }

  bool has_provenance() const noexcept { return !branches_.empty(); }
  /// Wilson step that added v (0 for the root).
  std::size_t branch_step(Vertex v) const { return branch_step_[v]; }
  std::span<const std::size_t> branch_steps() const noexcept {
    return branch_step_;
  }
  /// Position of v along its branch, 0 at the branch start.
  std::size_t branch_pos(Vertex v) const { return branch_pos_[v]; }
  std::span<const Branch> branches() const noexcept { return branches_; }

  /// Tree edges as (child, parent) pairs.
  std::vector<std::pair<Vertex, Vertex>> edges() const;
  /// Neighbour lists of the tree.
  std::vector<std::vector<Vertex>> adjacency() const;

  /// Throws ValidationError unless every tree edge has positive weight in g.
  void check_edges(const WeightedGraph& g) const;

 private:
  void validate();

  Vertex root_;
  std::vector<Vertex> parent_;
  std::vector<std::size_t> depth_;
  std::vector<std::size_t> branch_step_;
  std::vector<std::size_t> branch_pos_;
  std::vector<Branch> branches_;
  std::size_t covered_ = 0;
};

/// Wilson's algorithm with cycle popping. ordering[0] is the root; step i
/// attaches the loop-erased walk from ordering[i]. Processing only a prefix
/// of the ordering gives the subtree spanned by those vertices, which has
/// the law of the corresponding subtree of a UST.
SpanningTree wilson_partial(const WalkSampler& walk,
                            std::span<const Vertex> ordering, Rng& rng,
                            std::uint64_t step_cap = kDefaultStepCap);

/// Full UST. `ordering` must be a permutation of all vertices.
SpanningTree wilson_ust(const WalkSampler& walk,
                        std::span<const Vertex> ordering, Rng& rng,
                        std::uint64_t step_cap = kDefaultStepCap);

/// Checks connectivity first, then samples with a uniformly random ordering.
SpanningTree wilson_ust(const WeightedGraph& g, std::uint64_t seed);

/// Uniform random permutation of 0..n-1.
std::vector<Vertex> random_ordering(std::size_t n, Rng& rng);

/// Resistance between u and v with edge conductances w_e.
double effective_resistance(const WeightedGraph& g, Vertex u, Vertex v);

/// P(uv in UST) = w_uv * R_eff(u, v).
double edge_prob_exact(const WeightedGraph& g, Vertex u, Vertex v);

/// Law of the next LERW vertex toward `target` given the current simple
/// path (its last vertex is the current position). Returned as a
/// probability vector over all vertices.
std::vector<double> laplacian_next_step_dist(const WeightedGraph& g,
                                             std::span<const Vertex> target,
                                             std::span<const Vertex> path);

struct PathFactorisation {
  /// P_{u_0}(X_1..X_H = u_1..u_H).
  double walk_probability = 0.0;
  /// The hitting-probability product C.
  double c = 0.0;
};

/// Factorises P(next LERW vertices = continuation | prefix) into the plain
/// walk probability times the product C of hitting-probability ratios.
/// prefix.back() is u_0.
PathFactorisation lerw_path_factorisation(const WeightedGraph& g,
                                          std::span<const Vertex> target,
                                          std::span<const Vertex> prefix,
                                          std::span<const Vertex> continuation);

std::size_t tree_distance(const SpanningTree& t, Vertex u, Vertex v);

/// Row-major |vertices| x |vertices| hop-distance matrix.
std::vector<std::size_t> distance_matrix(const SpanningTree& t,
                                         std::span<const Vertex> vertices);

/// Hop distances from `source` to every tree vertex (kNoStep outside).
std::vector<std::size_t> distances_from(const SpanningTree& t, Vertex source);

std::size_t diameter(const SpanningTree& t);
std::size_t height(const SpanningTree& t, Vertex root);

}  // namespace dust
