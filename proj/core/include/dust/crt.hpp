#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dust/random.hpp"
#include "dust/ust.hpp"
#include "dust/walk.hpp"

namespace dust {

/// Cut points ys (ys[0] = 0, nondecreasing) and attachment points zs
/// (zs[0] = 0, 0 <= zs[i] <= ys[i]). A k-marked tree has k cut points and
/// k - 1 attachment points: stick i covers (ys[i-1], ys[i]] and its base is
/// glued to the point zs[i-1] of the tree built so far.
struct StickSequence {
  std::vector<double> ys;
  std::vector<double> zs;

  std::size_t marked_points() const noexcept { return ys.size(); }
};

/// Checks the sequence invariants. Zero-length sticks (ys[i] == ys[i-1]) are
/// rejected unless allow_zero_sticks is set; the discrete Wilson encoding
/// needs them when a branch starts inside the current tree.
void validate(const StickSequence& seq, bool allow_zero_sticks = false);

/// Tree built by stick breaking. A point x in [0, ys.back()] lies on the
/// stick j with ys[j-1] < x <= ys[j]; x = 0 is the root (base of stick 1).
class MarkedTree {
 public:
  std::size_t marked_points() const noexcept { return k_; }
  double distance(std::size_t i, std::size_t j) const {
    return distances_[i * k_ + j];
  }
  /// Row-major k x k distances between marked points.
  const std::vector<double>& distances() const noexcept { return distances_; }
  /// Distance between the tree points with coordinates x and y.
  double point_distance(double x, double y) const;
  /// Sum of all stick lengths.
  double total_length() const noexcept { return total_length_; }
  std::size_t sticks() const noexcept { return parent_.size() - 1; }
  /// Stick that stick s is glued to (0 for stick 1, which hangs off the
  /// root).
  std::size_t parent_stick(std::size_t s) const { return parent_[s]; }
  /// Offset from the parent stick's base at which stick s is glued.
  double attach_offset(std::size_t s) const { return attach_[s]; }

 private:
  friend MarkedTree sb_build(const StickSequence& seq, bool allow_zero_sticks);

  struct Location {
    std::size_t stick;
    double offset;
  };
  Location locate(double x) const;
  double location_distance(Location a, Location b) const;

  std::size_t k_ = 0;
  std::vector<double> ys_;
  std::vector<std::size_t> parent_;
  std::vector<double> attach_;
  std::vector<double> distances_;
  double total_length_ = 0.0;
};

MarkedTree sb_build(const StickSequence& seq, bool allow_zero_sticks = false);

/// Poisson process with intensity t dt for the cut points, Z_i uniform on
/// [0, Y_i). Returns k cut points.
StickSequence crt_sample_sticks(std::size_t k, Rng& rng);

/// Row-major k x k distances between k uniform points of the CRT.
std::vector<double> crt_distance_matrix(std::size_t k, Rng& rng);

/// P(Y_{i+1} - Y_i <= x | Y_i = L) = 1 - exp(-((x + L)^2 - L^2) / 2).
double stick_increment_cdf(double length, double x);

/// Inverse-CDF draw of the next increment given Y_i = L, using U in (0, 1).
double stick_increment_sample(double length, Rng& rng);

struct PerturbationReport {
  bool hypotheses_hold = false;
  double max_distance_gap = 0.0;
  /// 2 * steps * eps, where steps = marked points - 1.
  double bound = 0.0;
  /// Only meaningful when the hypotheses hold.
  bool bound_respected = true;
};

/// Compares two stick sequences with the same number of points. The
/// hypotheses are |y_i - y'_i| <= eps, |z_i - z'_i| <= eps and
/// |z_i - y_j| >= 3 eps for i >= 1; when they hold the marked distances of
/// the two trees differ by at most 2 * steps * eps.
PerturbationReport perturbation_check(const StickSequence& a,
                                      const StickSequence& b, double eps);

struct DiscreteEncoding {
  StickSequence sticks;
  /// I(v) for tree vertices, NaN elsewhere.
  std::vector<double> position;
  /// beta * sqrt(n).
  double scale = 0.0;
};

/// Encodes a (partial) Wilson run as a stick sequence. Step m >= 1 adds a
/// stick of length |branch m| / scale; a vertex added at step m at distance
/// d from the branch start sits at I(v) = Y_m - d / scale, the root at 0.
/// The attachment point of branch m is I(hit).
DiscreteEncoding discrete_stick_encoding(const SpanningTree& wilson_run,
                                         double beta);

struct AttachmentReport {
  std::size_t k = 0;
  std::size_t reps = 0;
  /// KS distance to uniform of (I(hit) * scale + U) / (I_max * scale + 1):
  /// each of the I_max * scale + 1 tree vertices is spread over a cell of
  /// equal width.
  double ks = 0.0;
  /// KS distance to uniform of the raw ratios I(hit) / I_max.
  double ks_raw = 0.0;
  std::vector<double> positions;
};

/// Runs `reps` Wilson runs on k uniform distinct vertices and records where
/// the last branch attaches to the tree spanned by the first k - 1.
AttachmentReport attachment_uniformity_test(const WalkSampler& walk,
                                            std::size_t k, std::size_t reps,
                                            std::uint64_t seed,
                                            unsigned threads = 0);

}  // namespace dust
