#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dust/random.hpp"

namespace dust {

class StepGraphon;

using Vertex = std::uint32_t;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  double weight = 0.0;
};

/// Dense weighted graph: symmetric weights in [0, 1], zero diagonal.
/// Immutable after construction; degrees are cached at construction.
class WeightedGraph {
 public:
  /// Edgeless graph on n vertices.
  explicit WeightedGraph(std::size_t n);
  /// Row-major n x n weight matrix. `latent` holds the graphon coordinates
  /// when the graph was sampled from a graphon (empty otherwise).
  WeightedGraph(std::size_t n, std::vector<double> weights,
                std::vector<double> latent = {});

  static WeightedGraph from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t size() const noexcept { return n_; }
  double weight(Vertex u, Vertex v) const { return weights_[u * n_ + v]; }
  std::span<const double> row(Vertex v) const {
    return {weights_.data() + static_cast<std::size_t>(v) * n_, n_};
  }
  double degree(Vertex v) const { return degrees_[v]; }
  std::span<const double> degrees() const noexcept { return degrees_; }
  double total_degree() const noexcept { return total_degree_; }
  std::span<const double> latent() const noexcept { return latent_; }
  std::span<const double> weights() const noexcept { return weights_; }

  /// Edges with positive weight, u < v.
  std::vector<Edge> edges() const;
  bool is_connected() const;
  /// Component label per vertex (labels are 0-based, in order of first
  /// appearance).
  std::vector<std::size_t> components() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> weights_;
  std::vector<double> degrees_;
  std::vector<double> latent_;
  double total_degree_ = 0.0;
};

WeightedGraph complete(std::size_t n);
/// Parts {0..a-1} and {a..a+b-1}.
WeightedGraph complete_bipartite(std::size_t a, std::size_t b);
WeightedGraph path_graph(std::size_t n);
WeightedGraph star_graph(std::size_t n);
/// Two copies of K_m joined by a single unit edge between vertex m-1 and m.
WeightedGraph barbell(std::size_t m);

/// G(n, W): latent x_i uniform, each pair present with probability
/// W(x_i, x_j). Shares its latent draws with sample_h for the same seed.
WeightedGraph sample_g(std::size_t n, const StepGraphon& w, std::uint64_t seed);
/// H(n, W): latent x_i uniform, pair (i, j) weighted W(x_i, x_j).
WeightedGraph sample_h(std::size_t n, const StepGraphon& w, std::uint64_t seed);

/// min_v deg(v) / n.
double min_degree_density(const WeightedGraph& g);

/// n * sum deg^2 / (sum deg)^2 in extended precision.
double alpha_tilde(const WeightedGraph& g);

inline constexpr std::size_t kExactExpanderMaxVertices = 22;

/// min over nonempty proper U of w(U, U^c) / (|U| (n - |U|)).
double expander_gamma_exact(const WeightedGraph& g);

struct ExpanderEstimate {
  /// Smallest ratio found; an upper bound on the true expansion constant.
  double gamma_upper = 0.0;
  std::vector<Vertex> witness;
  /// The graph is disconnected and the witness is a component.
  bool disconnected = false;
  std::size_t trials = 0;
};

/// Random cuts improved by single-vertex moves, plus all singleton cuts.
ExpanderEstimate expander_gamma_mc(const WeightedGraph& g, std::uint64_t seed,
                                   std::size_t trials);

struct GraphStats {
  double min_degree_density = 0.0;
  double alpha_tilde = 0.0;
  std::optional<double> gamma_exact;
};

GraphStats graph_stats(const WeightedGraph& g);

}  // namespace dust
