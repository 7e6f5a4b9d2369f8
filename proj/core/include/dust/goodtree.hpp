#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dust/graph.hpp"
#include "dust/ust.hpp"

namespace dust {

struct GoodTreeConfig {
  double kappa = 0.02;
  /// Connected subsets of the tree that are tested.
  std::size_t subsets = 20;
  /// Stationary walks per capacity estimate.
  std::size_t inner = 20000;
  std::uint64_t seed = 0;
};

struct SubsetVerdict {
  std::size_t size = 0;
  double capacity = 0.0;
  double stderr_ = 0.0;
  /// alpha_tilde * M * |A| / n.
  double centre = 0.0;
  /// centre * n^(-kappa/16).
  double half_width = 0.0;
  /// |capacity - centre| <= half_width + 3 stderr.
  bool within = false;
};

struct GoodTreeReport {
  std::size_t n = 0;
  std::size_t tree_size = 0;
  /// M = ceil(n^kappa).
  std::size_t horizon = 0;
  double alpha_tilde = 0.0;
  bool is_tree = false;
  /// |T| <= n^(1/2 + kappa).
  bool size_ok = false;
  double size_limit = 0.0;
  /// Subsets need |A| >= n^(3 kappa).
  std::size_t min_subset = 0;
  std::vector<SubsetVerdict> subsets;
  std::size_t within_band = 0;
  /// All three conditions hold (the capacity condition on every tested
  /// subset, up to Monte-Carlo error).
  bool good = false;
};

/// Tests the three good-tree conditions on the tree vertices of T inside G.
/// Capacities use the M-position window P_pi(tau_A < M), the same one as
/// alpha_n_capacity.
GoodTreeReport goodtree_check(const WeightedGraph& g, const SpanningTree& t,
                              const GoodTreeConfig& config);

}  // namespace dust
