#include "dust/crt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dust/error.hpp"
#include "dust/stats.hpp"

namespace dust {

void validate(const StickSequence& seq, bool allow_zero_sticks) {
  const auto& ys = seq.ys;
  const auto& zs = seq.zs;
  detail::require(!ys.empty(), "stick sequence needs at least one cut point");
  detail::require(zs.size() + 1 == ys.size(),
                  "a k-point stick sequence has k - 1 attachment points");
  detail::require(ys[0] == 0.0, "ys must start at 0");
  detail::require(zs.empty() || zs[0] == 0.0, "zs must start at 0");
  for (std::size_t i = 1; i < ys.size(); ++i) {
    detail::require(std::isfinite(ys[i]), "ys must be finite");
    if (allow_zero_sticks) {
      detail::require(ys[i - 1] <= ys[i], "ys must be nondecreasing");
    } else {
      detail::require(ys[i - 1] < ys[i], "ys must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < zs.size(); ++i) {
    detail::require(std::isfinite(zs[i]) && zs[i] >= 0.0 && zs[i] <= ys[i],
                    "attachment points must satisfy 0 <= z_i <= y_i");
  }
}

MarkedTree::Location MarkedTree::locate(double x) const {
  if (sticks() == 0 || x <= 0.0) return {1, 0.0};
  x = std::min(x, ys_.back());
  const auto it = std::lower_bound(ys_.begin() + 1, ys_.end(), x);
  const auto j = static_cast<std::size_t>(it - ys_.begin());
  return {j, x - ys_[j - 1]};
}

double MarkedTree::location_distance(Location a, Location b) const {
  constexpr double unset = std::numeric_limits<double>::quiet_NaN();
  const std::size_t count = parent_.size();
  std::vector<double> enter(count, unset);
  std::vector<double> travelled(count, unset);
  double dist = 0.0;
  for (Location cur = a; cur.stick != 0;) {
    enter[cur.stick] = cur.offset;
    travelled[cur.stick] = dist;
    dist += cur.offset;
    cur = {parent_[cur.stick], attach_[cur.stick]};
  }
  dist = 0.0;
  Location cur = b;
  while (cur.stick != 0 && std::isnan(enter[cur.stick])) {
    dist += cur.offset;
    cur = {parent_[cur.stick], attach_[cur.stick]};
  }
  return dist + travelled[cur.stick] + std::abs(cur.offset - enter[cur.stick]);
}

double MarkedTree::point_distance(double x, double y) const {
  if (sticks() == 0) return 0.0;
  return location_distance(locate(x), locate(y));
}

MarkedTree sb_build(const StickSequence& seq, bool allow_zero_sticks) {
  validate(seq, allow_zero_sticks);
  MarkedTree t;
  t.k_ = seq.ys.size();
  t.ys_ = seq.ys;
  t.parent_.assign(t.k_, 0);
  t.attach_.assign(t.k_, 0.0);
  for (std::size_t s = 2; s < t.k_; ++s) {
    const auto base = t.locate(seq.zs[s - 1]);
    t.parent_[s] = base.stick;
    t.attach_[s] = base.offset;
  }
  t.total_length_ = t.k_ > 1 ? seq.ys.back() : 0.0;

  std::vector<MarkedTree::Location> marks(t.k_);
  marks[0] = {1, 0.0};
  for (std::size_t i = 1; i < t.k_; ++i) {
    const double len = seq.ys[i] - seq.ys[i - 1];
    marks[i] = len > 0.0 ? MarkedTree::Location{i, len} : t.locate(seq.zs[i - 1]);
  }
  t.distances_.assign(t.k_ * t.k_, 0.0);
  for (std::size_t i = 0; i < t.k_; ++i) {
    for (std::size_t j = i + 1; j < t.k_; ++j) {
      const double d = t.location_distance(marks[i], marks[j]);
      t.distances_[i * t.k_ + j] = d;
      t.distances_[j * t.k_ + i] = d;
    }
  }
  return t;
}

double stick_increment_cdf(double length, double x) {
  detail::require(length >= 0.0, "stick length must be nonnegative");
  if (x <= 0.0) return 0.0;
  return -std::expm1(-0.5 * x * (x + 2.0 * length));
}

double stick_increment_sample(double length, Rng& rng) {
  const double a = -std::log(uniform_open01(rng));
  // sqrt(L^2 + 2a) - L without cancellation.
  return 2.0 * a / (std::sqrt(length * length + 2.0 * a) + length);
}

StickSequence crt_sample_sticks(std::size_t k, Rng& rng) {
  detail::require(k >= 2, "CRT stick sampling needs k >= 2");
  StickSequence seq;
  seq.ys.assign(k, 0.0);
  seq.zs.assign(k - 1, 0.0);
  for (std::size_t i = 1; i < k; ++i) {
    seq.ys[i] = seq.ys[i - 1] + stick_increment_sample(seq.ys[i - 1], rng);
  }
  for (std::size_t i = 1; i + 1 < k; ++i) {
    seq.zs[i] = uniform01(rng) * seq.ys[i];
  }
  return seq;
}

std::vector<double> crt_distance_matrix(std::size_t k, Rng& rng) {
  return sb_build(crt_sample_sticks(k, rng)).distances();
}

PerturbationReport perturbation_check(const StickSequence& a,
                                      const StickSequence& b, double eps) {
  detail::require(eps >= 0.0, "eps must be nonnegative");
  detail::require(a.ys.size() == b.ys.size(),
                  "sequences must have the same number of points");
  const auto ta = sb_build(a);
  const auto tb = sb_build(b);
  const std::size_t k = a.ys.size();

  PerturbationReport report;
  report.bound = 2.0 * static_cast<double>(k - 1) * eps;
  bool close = true;
  for (std::size_t i = 0; i < k; ++i) {
    close = close && std::abs(a.ys[i] - b.ys[i]) <= eps;
  }
  for (std::size_t i = 0; i < a.zs.size(); ++i) {
    close = close && std::abs(a.zs[i] - b.zs[i]) <= eps;
  }
  bool separated = true;
  for (std::size_t i = 1; i < a.zs.size(); ++i) {
    for (double y : a.ys) separated = separated && std::abs(a.zs[i] - y) >= 3.0 * eps;
  }
  report.hypotheses_hold = close && separated;

  for (std::size_t i = 0; i < k * k; ++i) {
    report.max_distance_gap = std::max(
        report.max_distance_gap, std::abs(ta.distances()[i] - tb.distances()[i]));
  }
  if (report.hypotheses_hold) {
    const double slack = 1e-9 * (1.0 + a.ys.back() + b.ys.back());
    report.bound_respected = report.max_distance_gap <= report.bound + slack;
  }
  return report;
}

DiscreteEncoding discrete_stick_encoding(const SpanningTree& wilson_run,
                                         double beta) {
  detail::require(wilson_run.has_provenance(),
                  "stick encoding needs Wilson provenance");
  detail::require(beta > 0.0, "beta must be positive");
  const auto branches = wilson_run.branches();
  const std::size_t k = branches.size();
  const std::size_t n = wilson_run.size();

  DiscreteEncoding enc;
  enc.scale = beta * std::sqrt(static_cast<double>(n));
  enc.sticks.ys.assign(k, 0.0);
  enc.sticks.zs.assign(k - 1, 0.0);
  for (std::size_t m = 1; m < k; ++m) {
    enc.sticks.ys[m] = enc.sticks.ys[m - 1] +
                       static_cast<double>(branches[m].length) / enc.scale;
  }
  enc.position.assign(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t v = 0; v < n; ++v) {
    const auto x = static_cast<Vertex>(v);
    if (!wilson_run.contains(x)) continue;
    const std::size_t step = wilson_run.branch_step(x);
    enc.position[v] =
        step == 0 ? 0.0
                  : enc.sticks.ys[step] -
                        static_cast<double>(wilson_run.branch_pos(x)) / enc.scale;
  }
  for (std::size_t m = 2; m < k; ++m) {
    const double z = enc.position[branches[m].hit];
    // Guard against rounding just above the current tip.
    enc.sticks.zs[m - 1] = std::clamp(z, 0.0, enc.sticks.ys[m - 1]);
  }
  return enc;
}

AttachmentReport attachment_uniformity_test(const WalkSampler& walk,
                                            std::size_t k, std::size_t reps,
                                            std::uint64_t seed,
                                            unsigned threads) {
  detail::require(k >= 3, "attachment test needs k >= 3");
  detail::require(reps >= 1, "reps must be positive");
  const std::size_t n = walk.size();
  detail::require(k <= n, "k exceeds the number of vertices");

  AttachmentReport report;
  report.k = k;
  report.reps = reps;
  report.positions.resize(reps);
  std::vector<double> raw(reps);
  parallel_for(reps, threads, [&](std::size_t r) {
    Rng point_rng = make_rng(seed, r, Stream::points);
    std::vector<Vertex> order;
    std::vector<char> taken(n, 0);
    while (order.size() < k) {
      const auto v = static_cast<Vertex>(uniform_index(point_rng, n));
      if (!taken[v]) {
        taken[v] = 1;
        order.push_back(v);
      }
    }
    Rng rng = make_rng(seed, r, Stream::ust);
    const auto tree = wilson_partial(walk, order, rng);
    const auto enc = discrete_stick_encoding(tree, 1.0);
    const Vertex hit = tree.branches()[k - 1].hit;
    const double cells = std::round(enc.sticks.ys[k - 2] * enc.scale);
    const double index = std::round(enc.position[hit] * enc.scale);
    raw[r] = index / cells;
    report.positions[r] = (index + uniform01(rng)) / (cells + 1.0);
  });
  const auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  report.ks = ks_distance(report.positions, uniform);
  report.ks_raw = ks_distance(raw, uniform);
  return report;
}

}  // namespace dust
