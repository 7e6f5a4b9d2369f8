#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/distributions/poisson.hpp>

#include "dust/crt.hpp"
#include "dust/error.hpp"
#include "dust/stats.hpp"
#include "dust/ust.hpp"
#include "test_util.hpp"

using namespace dust;

namespace {

// Marked distances from an explicit metric tree: every stick is cut at the
// points where later sticks attach and all-pairs distances come from
// Floyd-Warshall over the resulting nodes.
std::vector<double> metric_tree_distances(const StickSequence& s) {
  const std::size_t k = s.ys.size();
  if (k == 1) return {0.0};
  struct Node {
    std::size_t stick;
    double offset;
  };
  auto place = [&](double x) {
    if (x <= 0.0) return Node{1, 0.0};
    for (std::size_t j = 1; j < k; ++j) {
      if (x <= s.ys[j]) return Node{j, x - s.ys[j - 1]};
    }
    return Node{k - 1, s.ys[k - 1] - s.ys[k - 2]};
  };
  std::vector<Node> nodes;
  auto add = [&](Node n) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].stick == n.stick && std::abs(nodes[i].offset - n.offset) < 1e-15) return i;
    }
    nodes.push_back(n);
    return nodes.size() - 1;
  };
  std::vector<std::size_t> marks(k);
  marks[0] = add({1, 0.0});
  std::vector<std::size_t> base(k), glue(k);
  for (std::size_t j = 1; j < k; ++j) {
    base[j] = add({j, 0.0});
    glue[j] = j == 1 ? base[1] : add(place(s.zs[j - 1]));
    const double len = s.ys[j] - s.ys[j - 1];
    marks[j] = len > 0.0 ? add({j, len}) : glue[j];
  }
  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t m = nodes.size();
  std::vector<double> d(m * m, inf);
  for (std::size_t i = 0; i < m; ++i) d[i * m + i] = 0.0;
  auto link = [&](std::size_t a, std::size_t b, double w) {
    d[a * m + b] = std::min(d[a * m + b], w);
    d[b * m + a] = std::min(d[b * m + a], w);
  };
  for (std::size_t j = 1; j < k; ++j) {
    if (j > 1) link(base[j], glue[j], 0.0);
    std::vector<std::size_t> on;
    for (std::size_t i = 0; i < m; ++i) {
      if (nodes[i].stick == j) on.push_back(i);
    }
    std::sort(on.begin(), on.end(),
              [&](std::size_t a, std::size_t b) { return nodes[a].offset < nodes[b].offset; });
    for (std::size_t i = 0; i + 1 < on.size(); ++i) {
      link(on[i], on[i + 1], nodes[on[i + 1]].offset - nodes[on[i]].offset);
    }
  }
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        d[a * m + b] = std::min(d[a * m + b], d[a * m + c] + d[c * m + b]);
      }
    }
  }
  std::vector<double> out(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) out[i * k + j] = d[marks[i] * m + marks[j]];
  }
  return out;
}

void check_distances(const std::vector<double>& got, const std::vector<double>& want) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12).scale(1.0));
  }
}

}  // namespace

TEST_CASE("stick breaking examples") {
  const auto one = sb_build({{0.0}, {}});
  CHECK(one.marked_points() == 1);
  CHECK(one.distances() == std::vector<double>{0.0});
  CHECK(one.point_distance(0.0, 0.0) == 0.0);

  const auto two = sb_build({{0.0, 1.0}, {0.0}});
  CHECK(two.distance(0, 1) == 1.0);
  CHECK(two.point_distance(0.25, 0.75) == doctest::Approx(0.5));

  const auto three = sb_build({{0.0, 1.0, 3.0}, {0.0, 0.5}});
  check_distances(three.distances(), {0.0, 1.0, 2.5, 1.0, 0.0, 2.5, 2.5, 2.5, 0.0});
  CHECK(three.parent_stick(2) == 1);
  CHECK(three.attach_offset(2) == doctest::Approx(0.5));
  CHECK(three.total_length() == 3.0);

  const auto four = sb_build({{0.0, 1.0, 2.0, 4.0}, {0.0, 0.5, 1.5}});
  check_distances(four.distances(), {0.0, 1.0, 1.5, 3.0,   //
                                     1.0, 0.0, 1.5, 3.0,   //
                                     1.5, 1.5, 0.0, 2.5,   //
                                     3.0, 3.0, 2.5, 0.0});
  CHECK(four.parent_stick(3) == 2);
  CHECK(four.attach_offset(3) == doctest::Approx(0.5));

  // Gluing exactly at a cut point uses the stick that ends there.
  const auto tip = sb_build({{0.0, 1.0, 2.0}, {0.0, 1.0}});
  CHECK(tip.parent_stick(2) == 1);
  CHECK(tip.distance(0, 2) == doctest::Approx(2.0));
  CHECK(tip.distance(1, 2) == doctest::Approx(1.0));
}

TEST_CASE("stick sequence validation") {
  CHECK_THROWS_AS(sb_build({{}, {}}), ValidationError);
  CHECK_THROWS_AS(sb_build({{0.0, 1.0}, {}}), ValidationError);
  CHECK_THROWS_AS(sb_build({{0.1, 1.0}, {0.0}}), ValidationError);
  CHECK_THROWS_AS(sb_build({{0.0, 1.0, 0.5}, {0.0, 0.2}}), ValidationError);
  CHECK_THROWS_AS(sb_build({{0.0, 1.0, 2.0}, {0.0, 1.5}}), ValidationError);
  CHECK_THROWS_AS(sb_build({{0.0, 1.0, 1.0}, {0.0, 0.5}}), ValidationError);
  const auto zero = sb_build({{0.0, 1.0, 1.0}, {0.0, 0.5}}, true);
  CHECK(zero.distance(0, 2) == doctest::Approx(0.5));
  CHECK(zero.distance(1, 2) == doctest::Approx(0.5));
}

TEST_CASE("stick breaking agrees with an explicit metric tree") {
  Rng rng(101);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t k = 2 + rep % 9;
    auto seq = crt_sample_sticks(k, rng);
    if (rep % 3 == 0 && k > 3) {
      // Glue some sticks at existing cut points.
      const std::size_t i = 1 + uniform_index(rng, k - 2);
      seq.zs[i] = seq.ys[uniform_index(rng, i + 1)];
    }
    const auto t = sb_build(seq);
    check_distances(t.distances(), metric_tree_distances(seq));
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        CHECK(t.point_distance(seq.ys[i], seq.ys[j]) ==
              doctest::Approx(t.distance(i, j)).epsilon(1e-12).scale(1.0));
      }
    }
  }
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t k = 3 + rep % 6;
    StickSequence seq{{0.0}, {0.0}};
    for (std::size_t i = 1; i < k; ++i) {
      const double step = uniform01(rng) < 0.3 ? 0.0 : uniform01(rng);
      seq.ys.push_back(seq.ys.back() + step);
      if (i + 1 < k) seq.zs.push_back(uniform01(rng) * seq.ys.back());
    }
    if (seq.ys[1] == 0.0) continue;
    check_distances(sb_build(seq, true).distances(), metric_tree_distances(seq));
  }
}

TEST_CASE("stick increment law") {
  CHECK(stick_increment_cdf(0.0, 1.0) == doctest::Approx(1.0 - std::exp(-0.5)));
  CHECK(stick_increment_cdf(2.0, 1.0) == doctest::Approx(1.0 - std::exp(-2.5)));
  CHECK(stick_increment_cdf(2.0, -1.0) == 0.0);
  Rng rng(8);
  for (double len : {0.0, 0.7, 3.0}) {
    std::vector<double> xs(20000);
    for (auto& x : xs) x = stick_increment_sample(len, rng);
    const double d = ks_distance(xs, [&](double x) { return stick_increment_cdf(len, x); });
    CHECK(d < 1.63 / std::sqrt(20000.0));
  }
}

TEST_CASE("CRT two-point distance is Rayleigh") {
  Rng rng(13);
  std::vector<double> d(20000);
  for (auto& x : d) x = crt_distance_matrix(2, rng)[1];
  CHECK(ks_distance(d, crt_two_point_cdf) < 1.63 / std::sqrt(20000.0));
  CHECK(crt_two_point_cdf(1.0) == doctest::Approx(1.0 - std::exp(-0.5)));
}

TEST_CASE("CRT total length is the Poisson arrival time") {
  Rng rng(14);
  for (std::size_t k : {3, 5}) {
    std::vector<double> len(20000);
    for (auto& x : len) x = crt_sample_sticks(k, rng).ys.back();
    // P(Y_{k-1} <= x) = P(Poisson(x^2 / 2) >= k - 1).
    const auto cdf = [k](double x) {
      if (x <= 0.0) return 0.0;
      const boost::math::poisson_distribution<double> pois(0.5 * x * x);
      return boost::math::cdf(boost::math::complement(pois, double(k) - 2.0));
    };
    CHECK(ks_distance(len, cdf) < 1.63 / std::sqrt(20000.0));
  }
}

TEST_CASE("CRT marked points are exchangeable") {
  Rng rng(15);
  const std::size_t k = 4;
  const std::size_t reps = 20000;
  std::vector<std::vector<double>> pairs(6, std::vector<double>(reps));
  for (std::size_t r = 0; r < reps; ++r) {
    const auto d = crt_distance_matrix(k, rng);
    std::size_t p = 0;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) pairs[p++][r] = d[i * k + j];
    }
  }
  for (const auto& p : pairs) {
    CHECK(ks_distance(p, crt_two_point_cdf) < 1.63 / std::sqrt(double(reps)));
  }
  for (std::size_t p = 1; p < 6; ++p) {
    CHECK(ks_two_sample_pvalue(ks_two_sample(pairs[0], pairs[p]), reps, reps) > 1e-3);
  }
}

TEST_CASE("perturbation bound") {
  Rng rng(21);
  int checked = 0;
  for (int rep = 0; rep < 2000; ++rep) {
    const std::size_t k = 3 + rep % 5;
    const auto a = crt_sample_sticks(k, rng);
    const double eps = 1e-3 * (1 + rep % 7);
    StickSequence b = a;
    for (std::size_t i = 1; i < k; ++i) b.ys[i] += eps * (2.0 * uniform01(rng) - 1.0);
    for (std::size_t i = 1; i < b.zs.size(); ++i) {
      b.zs[i] = std::clamp(a.zs[i] + eps * (2.0 * uniform01(rng) - 1.0), 0.0, b.ys[i]);
    }
    if (!std::is_sorted(b.ys.begin(), b.ys.end())) continue;
    const auto report = perturbation_check(a, b, eps);
    CHECK(report.bound == doctest::Approx(2.0 * double(k - 1) * eps));
    if (!report.hypotheses_hold) continue;
    ++checked;
    CHECK(report.bound_respected);
    CHECK(report.max_distance_gap <= report.bound + 1e-9);
  }
  CHECK(checked > 500);

  const auto same = crt_sample_sticks(5, rng);
  const auto r0 = perturbation_check(same, same, 0.0);
  CHECK(r0.max_distance_gap == 0.0);
  // A glue point within 3 eps of a cut point violates the hypotheses.
  const StickSequence near{{0.0, 1.0, 2.0}, {0.0, 0.999}};
  CHECK_FALSE(perturbation_check(near, near, 0.01).hypotheses_hold);
}

TEST_CASE("discrete encoding is an isometry on the marked vertices") {
  Rng rng(33);
  for (int rep = 0; rep < 60; ++rep) {
    const auto g = rep % 2 == 0 ? complete(40) : testing::random_connected_graph(30, 0.2, rng);
    const WalkSampler walk(g);
    auto order = random_ordering(g.size(), rng);
    order.resize(2 + rep % 7);
    if (rep % 5 == 0) order.push_back(order[1] == 0 ? 1 : 0);
    std::sort(order.begin() + 1, order.end());
    order.erase(std::unique(order.begin() + 1, order.end()), order.end());
    order.erase(std::remove(order.begin() + 1, order.end(), order[0]), order.end());
    const auto tree = wilson_partial(walk, order, rng);
    const double beta = 0.5 + uniform01(rng);
    const auto enc = discrete_stick_encoding(tree, beta);
    CHECK(enc.scale == doctest::Approx(beta * std::sqrt(double(g.size()))));
    const std::size_t k = order.size();
    REQUIRE(enc.sticks.ys.size() == k);
    CHECK(enc.position[order[0]] == 0.0);
    const auto marked = sb_build(enc.sticks, true);
    const auto hops = distance_matrix(tree, order);
    for (std::size_t i = 0; i < k * k; ++i) {
      CHECK(marked.distances()[i] * enc.scale ==
            doctest::Approx(double(hops[i])).epsilon(1e-9).scale(1.0));
    }
    for (Vertex v = 0; v < g.size(); ++v) {
      if (!tree.contains(v)) {
        CHECK(std::isnan(enc.position[v]));
        continue;
      }
      CHECK(marked.point_distance(0.0, enc.position[v]) * enc.scale ==
            doctest::Approx(double(tree_distance(tree, order[0], v))).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("attachment test arguments and output") {
  const auto g = complete(60);
  const WalkSampler walk(g);
  CHECK_THROWS_AS(attachment_uniformity_test(walk, 2, 10, 1), ValidationError);
  CHECK_THROWS_AS(attachment_uniformity_test(walk, 61, 10, 1), ValidationError);
  const auto r = attachment_uniformity_test(walk, 3, 200, 4, 1);
  CHECK(r.positions.size() == 200);
  for (double x : r.positions) {
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
  }
  const auto again = attachment_uniformity_test(walk, 3, 200, 4, 2);
  CHECK(again.positions == r.positions);
}
