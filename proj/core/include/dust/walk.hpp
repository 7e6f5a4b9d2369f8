#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dust/graph.hpp"
#include "dust/random.hpp"

namespace dust {

enum class Laziness { none, half };

/// Monte-Carlo estimate with its standard error.
struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::size_t samples = 0;
};

/// Draws random-walk steps from per-vertex cumulative weight tables
/// (binary search, O(log n) per step). Holds a reference to the graph.
class WalkSampler {
 public:
  explicit WalkSampler(const WeightedGraph& g);

  const WeightedGraph& graph() const noexcept { return *graph_; }
  std::size_t size() const noexcept { return graph_->size(); }

  /// One non-lazy step from v.
  Vertex step(Vertex v, Rng& rng) const;
  /// A vertex drawn from the stationary law deg(v) / sum deg.
  Vertex stationary_draw(Rng& rng) const;

 private:
  const WeightedGraph* graph_;
  std::vector<double> cumulative_;
  std::vector<double> stationary_cumulative_;
};

/// pi(v) = deg(v) / sum deg.
std::vector<double> stationary(const WeightedGraph& g);

/// Row-major transition matrix of the (lazy) walk.
std::vector<double> transition_matrix(const WeightedGraph& g, Laziness lazy);

inline constexpr std::size_t kMixingMaxVertices = 2000;

/// Smallest t with max_x ||p_t(x, .) - pi||_TV <= 1/4. Throws
/// BudgetExceeded if the walk has not mixed after max_steps.
std::size_t mixing_time_exact(const WeightedGraph& g, Laziness lazy,
                              std::size_t max_steps = 100000);

/// max_x of the total variation distance between p_t(x, .) and pi.
double max_tv_distance(const WeightedGraph& g, Laziness lazy, std::size_t t);

struct MixingBoundReport {
  std::size_t t_mix = 0;
  double gamma = 0.0;
  /// "exact" or "mc-upper-bound"
  std::string gamma_source;
  double bound = 0.0;  // 64 gamma^-4 log n
  bool holds = false;
  /// The inequality only holds for n large enough; a false `holds` on a
  /// small instance is informational.
  bool asymptotic = true;
};

/// Compares the lazy mixing time with 64 gamma^-4 log n. gamma is computed
/// exactly for n <= 22 and by expander_gamma_mc otherwise.
MixingBoundReport check_mixing_bound(const WeightedGraph& g,
                                     std::uint64_t seed = 0,
                                     std::size_t mc_trials = 200);

/// h(v) = P_v(tau_A < tau_B) for every v (1 on A, 0 on B) by a dense LU
/// solve of the harmonic system off A u B.
std::vector<double> hitting_function(const WeightedGraph& g,
                                     std::span<const Vertex> a,
                                     std::span<const Vertex> b);

double hitting_prob_exact(const WeightedGraph& g, std::span<const Vertex> a,
                          std::span<const Vertex> b, Vertex start);

/// P_pi(tau_A < tau_B).
double hitting_prob_stationary(const WeightedGraph& g,
                               std::span<const Vertex> a,
                               std::span<const Vertex> b);

/// P_start(tau_A < tau_B^+) where tau_B^+ only counts times >= 1. Equals 1
/// when start is in A.
double hitting_prob_plus_exact(const WeightedGraph& g,
                               std::span<const Vertex> a,
                               std::span<const Vertex> b, Vertex start);

/// P_v(tau_U <= k) for every start v (tau counts the start as time 0).
std::vector<double> hit_within(const WeightedGraph& g,
                               std::span<const Vertex> u, std::size_t k);

/// Cap_k(U) = P_pi(tau_U <= k). Cap_0(U) = pi(U).
double capacity_exact(const WeightedGraph& g, std::span<const Vertex> u,
                      std::size_t k);

/// Fraction of stationary-start walks X_0..X_k that visit U.
Estimate capacity_mc(const WalkSampler& walk, std::span<const Vertex> u,
                     std::size_t k, std::size_t reps, std::uint64_t seed);

/// Close_k(U, W) = P_pi(tau_U < k, tau_W < k): walks X_0..X_{k-1} that visit
/// both sets.
Estimate closeness_mc(const WalkSampler& walk, std::span<const Vertex> u,
                      std::span<const Vertex> w, std::size_t k,
                      std::size_t reps, std::uint64_t seed);

/// Exact Close_k by dynamic programming on (vertex, hit U, hit W).
double closeness_exact(const WeightedGraph& g, std::span<const Vertex> u,
                       std::span<const Vertex> w, std::size_t k);

/// 2 k^2 |U| |W| / (delta n)^2.
double closeness_upper_bound(const WeightedGraph& g, std::size_t u_size,
                             std::size_t w_size, std::size_t k);

struct AlphaNConfig {
  double kappa = 0.02;
  std::size_t outer = 2000;
  std::size_t inner = 2000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

struct AlphaNEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  /// Capacity horizon M = ceil(n^kappa).
  std::size_t horizon = 0;
  /// Outer walk length L = ceil(n^(kappa/2)).
  std::size_t segment = 0;
  AlphaNConfig config;
};

/// alpha_n = n E_pi[Cap_M(X[0, L))] / (M L) with M = ceil(n^kappa) and
/// L = ceil(n^(kappa/2)). Each outer stationary walk X_0..X_{L-1} gives a
/// visited set S; Cap_M(S) is estimated from `inner` independent stationary
/// walks X_0..X_{M-1}. The M-position window keeps the estimator unbiased
/// for alpha at the small horizons reachable on desk-sized graphs. The
/// standard error is the spread of the per-outer estimates.
AlphaNEstimate alpha_n_capacity(const WeightedGraph& g,
                                const AlphaNConfig& config);

/// Capacity over an M-position window, P_pi(tau_U < M), from stationary
/// walks. Shared by alpha_n_capacity and the good-tree diagnostic.
Estimate window_capacity_mc(const WalkSampler& walk, std::span<const Vertex> u,
                            std::size_t positions, std::size_t reps, Rng& rng);

}  // namespace dust
