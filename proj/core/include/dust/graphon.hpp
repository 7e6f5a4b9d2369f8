#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dust/random.hpp"

namespace dust {

class WeightedGraph;

/// Symmetric step function on [0,1]^2.
///
/// Block i covers [b_i, b_{i+1}); the last block also contains 1. Values are
/// stored row-major. StepKernel only requires entries in [-1, 1] so that
/// differences of graphons are representable; StepGraphon narrows that to
/// [0, 1].
class StepKernel {
 public:
  StepKernel(std::vector<double> breakpoints, std::vector<double> values);
  StepKernel(std::vector<double> breakpoints,
             const std::vector<std::vector<double>>& values);

  std::size_t block_count() const noexcept { return lengths_.size(); }
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  std::span<const double> lengths() const noexcept { return lengths_; }
  double block_length(std::size_t i) const { return lengths_.at(i); }
  double value(std::size_t i, std::size_t j) const {
    return values_[i * lengths_.size() + j];
  }
  std::span<const double> values() const noexcept { return values_; }

  /// Index of the block containing x (left-closed, right-open except last).
  std::size_t block_of(double x) const;
  double operator()(double x, double y) const;

  /// Same function expressed on a finer partition containing all current
  /// breakpoints.
  StepKernel refined(std::span<const double> breakpoints) const;

  /// Rearranges blocks: new block a is old block order[a]. The map is
  /// measure preserving, so cut norms and alpha are invariant.
  StepKernel rearranged(std::span<const std::size_t> order) const;

  StepKernel operator-() const;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> lengths_;
  std::vector<double> values_;
};

class StepGraphon {
 public:
  StepGraphon(std::vector<double> breakpoints,
              const std::vector<std::vector<double>>& values);
  explicit StepGraphon(StepKernel kernel);

  static StepGraphon constant(double p);
  /// Two blocks split at `split`; `within` on the diagonal blocks, `across`
  /// off the diagonal.
  static StepGraphon two_block(double split, double within, double across);

  const StepKernel& kernel() const noexcept { return kernel_; }
  std::size_t block_count() const noexcept { return kernel_.block_count(); }
  std::span<const double> breakpoints() const noexcept {
    return kernel_.breakpoints();
  }
  std::span<const double> lengths() const noexcept { return kernel_.lengths(); }
  double value(std::size_t i, std::size_t j) const {
    return kernel_.value(i, j);
  }
  double operator()(double x, double y) const { return kernel_(x, y); }
  std::size_t block_of(double x) const { return kernel_.block_of(x); }

  /// deg_W on each block: sum_j v_ij * len_j.
  std::vector<double> block_degrees() const;
  /// deg_W(x) = integral of W(x, y) dy.
  double degree(double x) const;
  /// Integral of W over the unit square.
  double edge_density() const;

  StepGraphon rearranged(std::span<const std::size_t> order) const {
    return StepGraphon(kernel_.rearranged(order));
  }

 private:
  StepKernel kernel_;
};

/// (integral over x of deg_W(x)^2) / (integral of W)^2. Always >= 1.
/// Throws ValidationError when W integrates to zero.
double alpha_w(const StepGraphon& w);

/// True iff every positive-measure A has a positive cut integral against its
/// complement. For step graphons: the block support graph is connected and
/// a lone block has a positive value.
bool is_connected(const StepGraphon& w);

/// Integral over A x A^c of W, where A is the union of the listed blocks.
double cut_integral(const StepGraphon& w, std::span<const std::size_t> blocks);

/// Equal-width step graphon of a graph: block i holds vertex i.
StepGraphon graphon_of_graph(const WeightedGraph& g);

/// Breakpoints of the coarsest common refinement.
std::vector<double> common_breakpoints(std::span<const double> a,
                                       std::span<const double> b);

/// a - b on the common refinement.
StepKernel difference(const StepKernel& a, const StepKernel& b);

enum class CutNormMode { exact, heuristic };

struct CutNormResult {
  double value = 0.0;
  std::vector<std::size_t> witness_s;
  std::vector<std::size_t> witness_t;
  /// True when `value` is the exact cut norm, false when it is a lower bound
  /// found by local search.
  bool exact = false;
};

inline constexpr std::size_t kExactCutNormMaxBlocks = 24;

/// sup over measurable S, T of |integral over S x T of U|. For step kernels
/// the supremum is attained on unions of blocks.
///
/// Exact mode enumerates every S (Gray code, O(2^m m)) and picks the best T
/// per sign of the S-restricted column sums. Heuristic mode alternates best
/// responses from random starts and finishes with single-block flips; its
/// value is achieved by the returned witnesses, so it is a certified lower
/// bound.
CutNormResult cut_norm(const StepKernel& u, CutNormMode mode,
                       std::uint64_t seed = 0, std::size_t restarts = 64);

/// Re-evaluates integral over S x T of U for block index sets.
double rectangle_integral(const StepKernel& u, std::span<const std::size_t> s,
                          std::span<const std::size_t> t);

/// Operator norm of U on L2[0,1]; bounds the cut norm from above.
double spectral_norm(const StepKernel& u);

enum class AlignmentStrategy { exact_permutation, degree_sort };

struct CutDistanceResult {
  /// Upper bound on the cut distance.
  double value = 0.0;
  /// "exact-cut-norm" when value is the exact cut norm of the aligned
  /// difference, "spectral-bound" when the aligned difference had too many
  /// blocks and its L2 operator norm was used instead.
  std::string method;
  std::size_t refined_blocks = 0;
};

inline constexpr std::size_t kExactPermutationMaxBlocks = 8;

/// Upper bound on the cut distance between two graphons. Any concrete
/// measure-preserving alignment gives an upper bound; exact-permutation takes
/// the best permutation of equal-length blocks of the common refinement,
/// degree-sort lines both graphons up by ascending block degree.
CutDistanceResult cut_distance_upper(const StepGraphon& a, const StepGraphon& b,
                                     AlignmentStrategy strategy);

}  // namespace dust
