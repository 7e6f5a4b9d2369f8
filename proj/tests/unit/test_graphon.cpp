#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

#include "dust/error.hpp"
#include "dust/graph.hpp"
#include "dust/graphon.hpp"
#include "test_util.hpp"

using namespace dust;

namespace {

StepGraphon bipartite13() { return StepGraphon::two_block(1.0 / 3.0, 0.0, 1.0); }

// Full 2^m x 2^m enumeration of block-union rectangles.
double brute_cut_norm(const StepKernel& u) {
  const std::size_t m = u.block_count();
  const auto len = u.lengths();
  std::vector<double> by_t(std::size_t{1} << m);
  double best = 0.0;
  for (std::size_t s = 0; s < (std::size_t{1} << m); ++s) {
    std::vector<double> col(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      if (!(s >> i & 1)) continue;
      for (std::size_t j = 0; j < m; ++j) col[j] += len[i] * u.value(i, j);
    }
    by_t[0] = 0.0;
    for (std::size_t t = 1; t < by_t.size(); ++t) {
      const auto j = static_cast<std::size_t>(std::countr_zero(t));
      by_t[t] = by_t[t & (t - 1)] + col[j] * len[j];
      best = std::max(best, std::abs(by_t[t]));
    }
  }
  return best;
}

StepKernel halved(const StepKernel& u) {
  std::vector<double> v(u.values().begin(), u.values().end());
  for (double& x : v) x *= 0.5;
  return StepKernel(std::vector<double>(u.breakpoints().begin(), u.breakpoints().end()), v);
}

StepKernel sum(const StepKernel& a, const StepKernel& b) {
  return difference(a, -b);
}

}  // namespace

TEST_CASE("eval resolves blocks left-closed") {
  const auto w = bipartite13();
  CHECK(StepGraphon::constant(0.3)(0.3, 0.7) == 0.3);
  CHECK(w(0.1, 0.9) == 1.0);
  CHECK(w(0.1, 0.2) == 0.0);
  CHECK(w.block_of(1.0 / 3.0) == 1);
  CHECK(w.block_of(0.0) == 0);
  CHECK(w.block_of(1.0) == 1);
  CHECK_THROWS_AS(w(-0.1, 0.5), ValidationError);
  CHECK_THROWS_AS(w(0.5, 1.5), ValidationError);
}

TEST_CASE("construction rejects invalid graphons") {
  CHECK_THROWS_AS(StepGraphon({0.0, 0.5, 1.0}, {{0.0, 1.0}, {0.5, 0.0}}),
                  ValidationError);
  CHECK_THROWS_AS(StepGraphon({0.0, 0.5, 1.0}, {{0.0, 1.2}, {1.2, 0.0}}),
                  ValidationError);
  CHECK_THROWS_AS(StepGraphon({0.0, 0.6, 0.5, 1.0}, {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}),
                  ValidationError);
  CHECK_THROWS_AS(StepGraphon({0.1, 1.0}, {{0.5}}), ValidationError);
}

TEST_CASE("degree function") {
  CHECK(StepGraphon::constant(0.4).degree(0.77) == doctest::Approx(0.4));
  const auto w = bipartite13();
  CHECK(w.degree(0.1) == doctest::Approx(2.0 / 3.0));
  CHECK(w.degree(0.5) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("degree integrates to edge density") {
  Rng rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    const auto w = testing::random_graphon(1 + rep % 7, rng);
    const auto deg = w.block_degrees();
    double total = 0.0;
    for (std::size_t i = 0; i < deg.size(); ++i) total += w.lengths()[i] * deg[i];
    CHECK(total == doctest::Approx(w.edge_density()).epsilon(1e-12));
  }
}

TEST_CASE("alpha_w values") {
  CHECK(alpha_w(StepGraphon::constant(0.3)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(alpha_w(bipartite13()) - 9.0 / 8.0) <= 1e-12);
  CHECK_THROWS_AS(alpha_w(StepGraphon::constant(0.0)), ValidationError);
  // A non-constant graphon is strictly above 1.
  CHECK(alpha_w(StepGraphon::two_block(0.5, 0.9, 0.1)) == doctest::Approx(1.0));
  CHECK(alpha_w(StepGraphon::two_block(0.3, 0.9, 0.1)) > 1.0 + 1e-6);
}

TEST_CASE("alpha_w is at least 1 and permutation invariant") {
  Rng rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    const auto w = testing::random_graphon(1 + rep % 6, rng);
    const double a = alpha_w(w);
    CHECK(a >= 1.0 - 1e-12);
    std::vector<std::size_t> order(w.block_count());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = order.size() - 1 - i;
    CHECK(alpha_w(w.rearranged(order)) == doctest::Approx(a).epsilon(1e-12));
  }
}

TEST_CASE("graphon connectivity") {
  CHECK(is_connected(StepGraphon::constant(0.2)));
  CHECK_FALSE(is_connected(StepGraphon::constant(0.0)));
  CHECK_FALSE(is_connected(StepGraphon::two_block(0.5, 1.0, 0.0)));
  CHECK(is_connected(bipartite13()));
  const std::size_t first[] = {0};
  CHECK(cut_integral(bipartite13(), first) == doctest::Approx(2.0 / 9.0));
  CHECK(cut_integral(StepGraphon::two_block(0.5, 1.0, 0.0), first) == 0.0);
}

TEST_CASE("graphon of a graph") {
  const auto w = graphon_of_graph(complete(3));
  REQUIRE(w.block_count() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(w.value(i, j) == (i == j ? 0.0 : 1.0));
  }
  const auto single = graphon_of_graph(complete(1));
  CHECK(single.block_count() == 1);
  CHECK(single.value(0, 0) == 0.0);

  const auto h = sample_h(4, bipartite13(), 3);
  const auto wh = graphon_of_graph(h);
  for (Vertex i = 0; i < 4; ++i) {
    for (Vertex j = 0; j < 4; ++j) CHECK(wh.value(i, j) == h.weight(i, j));
  }
}

TEST_CASE("cut norm examples") {
  CHECK(cut_norm(StepKernel({0.0, 1.0}, std::vector<double>{0.0}), CutNormMode::exact)
            .value == 0.0);
  const auto c = cut_norm(StepGraphon::constant(0.7).kernel(), CutNormMode::exact);
  CHECK(c.value == doctest::Approx(0.7));
  const double a = 0.6;
  const StepKernel checker({0.0, 0.5, 1.0}, std::vector<double>{a, -a, -a, a});
  const auto r = cut_norm(checker, CutNormMode::exact);
  CHECK(r.value == doctest::Approx(a / 4.0));
  CHECK(r.exact);
  CHECK(std::abs(rectangle_integral(checker, r.witness_s, r.witness_t)) ==
        doctest::Approx(r.value));
}

TEST_CASE("exact cut norm matches full rectangle enumeration") {
  Rng rng(2024);
  for (std::size_t m = 1; m <= 12; ++m) {
    const int reps = m <= 9 ? 10 : 2;
    for (int rep = 0; rep < reps; ++rep) {
      const auto u = testing::random_kernel(m, rng);
      const auto r = cut_norm(u, CutNormMode::exact);
      CHECK(r.value == doctest::Approx(brute_cut_norm(u)).epsilon(1e-12));
      CHECK(std::abs(rectangle_integral(u, r.witness_s, r.witness_t)) ==
            doctest::Approx(r.value).epsilon(1e-12));
    }
  }
}

TEST_CASE("cut norm symmetry, subadditivity and spectral bound") {
  Rng rng(7);
  for (int rep = 0; rep < 40; ++rep) {
    const auto a = halved(testing::random_kernel(2 + rep % 6, rng));
    const auto b = halved(testing::random_kernel(2 + (rep + 3) % 6, rng));
    const double na = cut_norm(a, CutNormMode::exact).value;
    CHECK(cut_norm(-a, CutNormMode::exact).value == doctest::Approx(na));
    const double nb = cut_norm(b, CutNormMode::exact).value;
    CHECK(cut_norm(sum(a, b), CutNormMode::exact).value <= na + nb + 1e-12);
    CHECK(na <= spectral_norm(a) + 1e-12);
    CHECK(na <= 1.0);
  }
}

TEST_CASE("heuristic cut norm is a certified lower bound") {
  Rng rng(99);
  for (int rep = 0; rep < 20; ++rep) {
    const auto u = testing::random_kernel(6 + rep % 10, rng);
    const auto h = cut_norm(u, CutNormMode::heuristic, rep);
    const auto e = cut_norm(u, CutNormMode::exact);
    CHECK_FALSE(h.exact);
    CHECK(h.value <= e.value + 1e-12);
    CHECK(std::abs(rectangle_integral(u, h.witness_s, h.witness_t)) ==
          doctest::Approx(h.value).epsilon(1e-12));
  }
}

TEST_CASE("exact cut norm refuses large partitions") {
  Rng rng(1);
  const auto u = testing::random_kernel(kExactCutNormMaxBlocks + 1, rng);
  CHECK_THROWS_AS(cut_norm(u, CutNormMode::exact), BudgetExceeded);
  CHECK_NOTHROW(cut_norm(u, CutNormMode::heuristic));
}

TEST_CASE("cut distance upper bounds") {
  const auto w = bipartite13();
  CHECK(cut_distance_upper(w, w, AlignmentStrategy::exact_permutation).value ==
        doctest::Approx(0.0));
  const auto p = StepGraphon::constant(0.2);
  const auto q = StepGraphon::constant(0.75);
  CHECK(cut_distance_upper(p, q, AlignmentStrategy::exact_permutation).value ==
        doctest::Approx(0.55));
  CHECK(cut_distance_upper(p, q, AlignmentStrategy::degree_sort).value ==
        doctest::Approx(0.55));

  // Same bipartite graphon with the large side first.
  const StepGraphon swapped({0.0, 2.0 / 3.0, 1.0}, {{0.0, 1.0}, {1.0, 0.0}});
  CHECK(cut_distance_upper(w, swapped, AlignmentStrategy::exact_permutation).value ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(cut_distance_upper(w, swapped, AlignmentStrategy::degree_sort).value ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("cut distance is symmetric and bounded by the identity alignment") {
  Rng rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    const auto a = testing::random_graphon(1 + rep % 3, rng);
    const auto b = testing::random_graphon(1 + (rep + 1) % 3, rng);
    for (auto s : {AlignmentStrategy::exact_permutation, AlignmentStrategy::degree_sort}) {
      const double ab = cut_distance_upper(a, b, s).value;
      CHECK(ab == doctest::Approx(cut_distance_upper(b, a, s).value).epsilon(1e-9));
      CHECK(ab >= 0.0);
    }
    const double identity =
        cut_norm(difference(a.kernel(), b.kernel()), CutNormMode::exact).value;
    CHECK(cut_distance_upper(a, b, AlignmentStrategy::exact_permutation).value <=
          identity + 1e-12);
  }
}

TEST_CASE("large refinements fall back to a certified bound") {
  Rng rng(4);
  const auto g = testing::random_weighted_graph(40, 0.5, rng, true);
  const auto res = cut_distance_upper(graphon_of_graph(g), StepGraphon::constant(0.5),
                                      AlignmentStrategy::degree_sort);
  CHECK(res.method == "spectral-bound");
  CHECK(res.refined_blocks == 40);
  CHECK(res.value > 0.0);
  CHECK_THROWS_AS(cut_distance_upper(graphon_of_graph(g), StepGraphon::constant(0.5),
                                     AlignmentStrategy::exact_permutation),
                  BudgetExceeded);
}
