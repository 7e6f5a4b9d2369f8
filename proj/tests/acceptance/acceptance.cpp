#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "dust/crt.hpp"
#include "dust/graph.hpp"
#include "dust/graphon.hpp"
#include "dust/stats.hpp"
#include "dust/ust.hpp"
#include "dust/walk.hpp"
#include "thresholds.hpp"

using namespace dust;
using namespace dust::acceptance;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool within_sigmas(std::size_t count, std::size_t reps, double p) {
  const double n = static_cast<double>(reps);
  const double sd = std::sqrt(n * p * (1.0 - p));
  return std::abs(static_cast<double>(count) - n * p) <= kSigmas * sd + 1e-9;
}

// ---------------------------------------------------------------- 1
Outcome alpha_exactness() {
  bool ok = true;
  for (std::size_t n : {3, 50, 1000}) ok = ok && alpha_tilde(complete(n)) == 1.0;
  double worst = 0.0;
  for (std::size_t n : {30, 300, 3000}) {
    worst = std::max(worst, std::abs(alpha_tilde(complete_bipartite(n / 3, 2 * n / 3)) - 9.0 / 8.0));
  }
  const double aw = alpha_w(StepGraphon::two_block(1.0 / 3.0, 0.0, 1.0));
  const double ac = alpha_w(StepGraphon::constant(0.37));
  ok = ok && worst <= kAlphaExact && std::abs(aw - 9.0 / 8.0) <= kAlphaExact &&
       std::abs(ac - 1.0) <= kAlphaExact;
  return {ok, fmt("complete exact; bipartite err %.1e; alpha_w(split 1/3) %.15f; alpha_w(const) %.15f",
                  worst, aw, ac)};
}

// ---------------------------------------------------------------- 2
std::uint64_t tree_key(const std::vector<Edge>& edges, const SpanningTree& t) {
  std::uint64_t key = 0;
  for (auto [c, p] : t.edges()) {
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (edges[i].u == std::min(c, p) && edges[i].v == std::max(c, p)) key |= 1ull << i;
    }
  }
  return key;
}

struct LawResult {
  bool trees_ok = true;
  bool edges_ok = true;
  double p_value = 0.0;
};

LawResult ust_law(const WeightedGraph& g, std::size_t reps, std::uint64_t seed) {
  const auto edges = g.edges();
  // Spanning trees by enumeration of (n-1)-edge subsets.
  std::map<std::uint64_t, double> weight;
  double total = 0.0;
  for (std::uint64_t s = 0; s < (1ull << edges.size()); ++s) {
    if (static_cast<std::size_t>(__builtin_popcountll(s)) != g.size() - 1) continue;
    std::vector<std::size_t> comp(g.size());
    for (std::size_t v = 0; v < g.size(); ++v) comp[v] = v;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      return comp[x] == x ? x : comp[x] = find(comp[x]);
    };
    bool acyclic = true;
    double w = 1.0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (!(s >> i & 1)) continue;
      const auto a = find(edges[i].u);
      const auto b = find(edges[i].v);
      acyclic = acyclic && a != b;
      comp[a] = b;
      w *= edges[i].weight;
    }
    if (acyclic) {
      weight[s] = w;
      total += w;
    }
  }
  std::map<std::uint64_t, std::size_t> counts;
  std::vector<std::size_t> edge_counts(edges.size(), 0);
  const WalkSampler walk(g);
  for (std::size_t r = 0; r < reps; ++r) {
    Rng rng = make_rng(seed, r, Stream::ust);
    const auto order = random_ordering(g.size(), rng);
    const auto key = tree_key(edges, wilson_ust(walk, order, rng));
    ++counts[key];
    for (std::size_t i = 0; i < edges.size(); ++i) edge_counts[i] += key >> i & 1;
  }
  LawResult out;
  std::vector<std::size_t> obs;
  std::vector<double> expected;
  for (const auto& [key, w] : weight) {
    const double p = w / total;
    obs.push_back(counts[key]);
    expected.push_back(p);
    out.trees_ok = out.trees_ok && within_sigmas(counts[key], reps, p);
  }
  out.trees_ok = out.trees_ok && counts.size() == weight.size();
  out.p_value = chi_square_test(obs, expected).p_value;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    out.edges_ok = out.edges_ok &&
                   within_sigmas(edge_counts[i], reps, edge_prob_exact(g, edges[i].u, edges[i].v));
  }
  return out;
}

struct LawBatch {
  LawResult triangle;
  LawResult k4;
  bool pass() const {
    return triangle.trees_ok && triangle.edges_ok && triangle.p_value > kChiSquareP &&
           k4.trees_ok && k4.edges_ok && k4.p_value > kChiSquareP;
  }
  std::string describe() const {
    return fmt("triangle chi2 p=%.3f trees %s edges %s; K4 chi2 p=%.3f trees %s edges %s",
               triangle.p_value, triangle.trees_ok ? "ok" : "off", triangle.edges_ok ? "ok" : "off",
               k4.p_value, k4.trees_ok ? "ok" : "off", k4.edges_ok ? "ok" : "off");
  }
};

LawBatch ust_law_batch(std::uint64_t seed) {
  // Triangle with weights (1, 1, 2), scaled into [0, 1]; the law is unchanged.
  const Edge tri[] = {{0, 1, 0.5}, {0, 2, 0.5}, {1, 2, 1.0}};
  return {ust_law(WeightedGraph::from_edges(3, tri), 100000, seed),
          ust_law(complete(4), 100000, seed + 1)};
}

Outcome ust_law_oracle() {
  const auto first = ust_law_batch(kSeed);
  if (first.pass()) return {true, first.describe()};
  const auto confirm = ust_law_batch(kSeed + kConfirmationOffset);
  return {confirm.pass(), "first batch: " + first.describe() + " | confirmation batch: " +
                              confirm.describe()};
}

// ---------------------------------------------------------------- 3
Outcome laplacian_oracle() {
  const Edge e[] = {{0, 1, 1.0}, {0, 2, 0.4}, {0, 3, 0.7}, {1, 2, 0.9}, {1, 4, 0.3},
                    {2, 3, 0.6}, {2, 4, 0.8}, {3, 4, 0.5}, {1, 3, 0.2}};
  const auto g = WeightedGraph::from_edges(5, e);
  const Vertex target[] = {4};
  const std::size_t reps = 100000;
  // Category (u1, u2), with u2 = kNoVertex when u1 is already the target.
  std::map<std::pair<Vertex, Vertex>, double> law;
  const auto first = laplacian_next_step_dist(g, target, std::vector<Vertex>{0});
  for (Vertex u1 = 0; u1 < 5; ++u1) {
    if (first[u1] == 0.0) continue;
    if (u1 == 4) {
      law[{u1, kNoVertex}] = first[u1];
      continue;
    }
    const auto second = laplacian_next_step_dist(g, target, std::vector<Vertex>{0, u1});
    for (Vertex u2 = 0; u2 < 5; ++u2) {
      if (second[u2] > 0.0) law[{u1, u2}] = first[u1] * second[u2];
    }
  }
  std::map<std::pair<Vertex, Vertex>, std::size_t> counts;
  const WalkSampler walk(g);
  Rng rng = make_rng(kSeed, 0, Stream::ust);
  for (std::size_t r = 0; r < reps; ++r) {
    const auto p = lerw_to_set(walk, 0, target, rng);
    ++counts[{p[1], p.size() > 2 ? p[2] : kNoVertex}];
  }
  bool ok = true;
  std::vector<std::size_t> obs;
  std::vector<double> expected;
  std::size_t seen = 0;
  for (const auto& [cat, p] : law) {
    ok = ok && within_sigmas(counts[cat], reps, p);
    obs.push_back(counts[cat]);
    expected.push_back(p);
    seen += counts[cat];
  }
  ok = ok && seen == reps;
  const double pv = chi_square_test(obs, expected).p_value;
  ok = ok && pv > kChiSquareP;
  return {ok, fmt("%zu two-step categories within 3 sd: %s; chi2 p=%.3f", law.size(),
                  ok ? "yes" : "no", pv)};
}

// ---------------------------------------------------------------- 4
Outcome scaling_two_point() {
  ExperimentConfig cfg;
  cfg.k = 2;
  cfg.replicates = 2000;
  cfg.seed = kSeed;
  const auto kn = verify_scaling(complete(2000), cfg);
  const auto bip_graph = complete_bipartite(1000, 2000);
  const auto bip = verify_scaling(bip_graph, cfg);
  cfg.rescaling = RescalingMode::fixed;
  cfg.alpha_value = 1.0;
  const auto wrong = verify_scaling(bip_graph, cfg);
  const bool factors = std::abs(kn.sample.factor - 1.0 / std::sqrt(2000.0)) < 1e-15 &&
                       std::abs(bip.sample.factor - std::sqrt(9.0 / 8.0 / 3000.0)) < 1e-15;
  const bool ok = factors && kn.ks_two_point <= kScalingKs && bip.ks_two_point <= kScalingKs &&
                  wrong.ks_two_point > bip.ks_two_point;
  return {ok, fmt("KS complete=%.4f bipartite=%.4f (<= %.2f); alpha=1 control %.4f > %.4f",
                  kn.ks_two_point, bip.ks_two_point, kScalingKs, wrong.ks_two_point,
                  bip.ks_two_point)};
}

// ---------------------------------------------------------------- 5
Outcome scaling_joint() {
  ExperimentConfig cfg;
  cfg.k = 4;
  cfg.replicates = 1500;
  cfg.seed = kSeed;
  const auto r = verify_scaling(complete(2000), cfg);
  const double ks = r.ks_joint.value_or(1.0);
  return {ks <= kJointKs, fmt("two-sample KS vs %zu CRT matrices = %.4f (<= %.2f)", cfg.crt_samples,
                              ks, kJointKs)};
}

// ---------------------------------------------------------------- 6
Outcome crt_laws() {
  const std::size_t draws = 1000000;
  Rng rng = make_rng(kSeed, 0, Stream::crt);
  std::vector<double> y(draws);
  for (auto& v : y) v = crt_sample_sticks(2, rng).ys[1];
  double above = 0.0;
  double sum = 0.0;
  for (double v : y) {
    above += v > 1.0 ? 1.0 : 0.0;
    sum += v;
  }
  const double n = static_cast<double>(draws);
  const double p_hat = above / n;
  const double p = std::exp(-0.5);
  const bool tail_ok = std::abs(p_hat - p) <= kSigmas * std::sqrt(p * (1 - p) / n);
  const EmpiricalDistribution e(y);
  const double mean_ok_gap = std::abs(e.mean() - std::sqrt(std::numbers::pi / 2.0));
  const bool mean_ok = mean_ok_gap <= kSigmas * e.stddev() / std::sqrt(n);

  std::vector<double> inc(draws);
  for (auto& v : inc) v = stick_increment_sample(1.0, rng);
  const double ks = ks_distance(inc, [](double x) { return stick_increment_cdf(1.0, x); });
  const bool ok = tail_ok && mean_ok && ks <= kIncrementKs;
  return {ok, fmt("P(Y1>1)=%.5f vs %.5f; E[Y1]=%.5f vs %.5f; increment KS=%.5f (<= %.2f)", p_hat, p,
                  e.mean(), std::sqrt(std::numbers::pi / 2.0), ks, kIncrementKs)};
}

// ---------------------------------------------------------------- 7
Outcome perturbation_suite() {
  Rng rng = make_rng(kSeed, 0, Stream::crt);
  std::size_t trials = 0;
  std::size_t violations = 0;
  std::size_t rejected = 0;
  double worst_ratio = 0.0;
  while (trials < 10000) {
    const std::size_t k = 3 + uniform_index(rng, 6);
    const auto a = crt_sample_sticks(k, rng);
    double room = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < k; ++i) room = std::min(room, (a.ys[i] - a.ys[i - 1]) / 3.0);
    for (std::size_t i = 1; i < a.zs.size(); ++i) {
      for (double yj : a.ys) room = std::min(room, std::abs(a.zs[i] - yj) / 3.0);
    }
    const double eps = room * (0.05 + 0.95 * uniform01(rng));
    if (!(eps > 0.0)) {
      ++rejected;
      continue;
    }
    const bool extreme = trials % 2 == 0;
    auto shift = [&] {
      if (extreme) return uniform01(rng) < 0.5 ? -eps : eps;
      return eps * (2.0 * uniform01(rng) - 1.0);
    };
    StickSequence b = a;
    for (std::size_t i = 1; i < k; ++i) b.ys[i] += shift();
    for (std::size_t i = 1; i < b.zs.size(); ++i) b.zs[i] += shift();
    const auto report = perturbation_check(a, b, eps);
    if (!report.hypotheses_hold) {
      ++rejected;
      continue;
    }
    ++trials;
    violations += report.bound_respected ? 0 : 1;
    worst_ratio = std::max(worst_ratio, report.max_distance_gap / report.bound);
  }
  return {violations == 0,
          fmt("%zu trials, %zu violations, worst gap/bound %.3f, %zu draws rejected", trials,
              violations, worst_ratio, rejected)};
}

// ---------------------------------------------------------------- 8
Outcome capacity_bounds() {
  Rng rng = make_rng(kSeed, 0, Stream::graph);
  const std::size_t n = 200;
  std::size_t upper_checks = 0, lower_checks = 0, close_checks = 0, failures = 0;
  for (int inst = 0; inst < 20; ++inst) {
    const double p_in = 0.6 + 0.4 * uniform01(rng);
    const double p_out = 0.6 + 0.4 * uniform01(rng);
    const auto g = sample_g(n, StepGraphon::two_block(0.2 + 0.6 * uniform01(rng), p_in, p_out),
                            derive_seed(kSeed, inst, Stream::graph));
    const double delta = min_degree_density(g);
    const auto pi = stationary(g);
    const WalkSampler walk(g);
    auto order = random_ordering(n, rng);
    for (std::size_t size : {1, 2, 3, 5, 10}) {
      const std::vector<Vertex> a(order.begin(), order.begin() + size);
      double pa = 0.0;
      for (Vertex v : a) pa += pi[v];
      for (std::size_t k : {1, 2, 3, 5, 10}) {
        const double cap = capacity_exact(g, a, k);
        ++upper_checks;
        failures += cap <= (k + 1) * pa + 1e-12 ? 0 : 1;
        if (double(k * size) <= delta * delta * delta * n / 2.0) {
          ++lower_checks;
          failures += cap >= k * pa / 2.0 - 1e-12 && k * pa / 2.0 >= delta * k * size / (2.0 * n) - 1e-12
                          ? 0
                          : 1;
        }
      }
    }
    const std::vector<Vertex> u(order.begin() + 20, order.begin() + 23);
    const std::vector<Vertex> w(order.begin() + 30, order.begin() + 34);
    for (std::size_t k : {2, 4, 8}) {
      const auto est = closeness_mc(walk, u, w, k, 20000, derive_seed(kSeed, inst, Stream::capacity));
      ++close_checks;
      failures += est.value <= closeness_upper_bound(g, u.size(), w.size(), k) + kSigmas * est.stderr_
                      ? 0
                      : 1;
    }
  }
  return {failures == 0 && lower_checks > 0,
          fmt("%zu upper, %zu lower, %zu closeness checks on 20 instances; %zu failures",
              upper_checks, lower_checks, close_checks, failures)};
}

// ---------------------------------------------------------------- 9
Outcome alpha_consistency() {
  AlphaNConfig cfg;
  cfg.seed = kSeed;
  const auto kn = complete(2000);
  const auto gn = sample_g(2000, StepGraphon::constant(0.5), kSeed);
  const auto a1 = alpha_n_capacity(kn, cfg);
  const auto a2 = alpha_n_capacity(gn, cfg);
  const double t1 = alpha_tilde(kn);
  const double t2 = alpha_tilde(gn);
  const bool ok1 = std::abs(a1.value - t1) <= std::max(kSigmas * a1.stderr_, kAlphaConsistency);
  const bool ok2 = std::abs(a2.value - t2) <= std::max(kSigmas * a2.stderr_, kAlphaConsistency);
  return {ok1 && ok2, fmt("complete: alpha_n=%.4f+-%.4f vs %.4f; G(n,1/2): alpha_n=%.4f+-%.4f vs %.5f",
                          a1.value, a1.stderr_, t1, a2.value, a2.stderr_, t2)};
}

// ---------------------------------------------------------------- 10
Outcome graphon_convergence() {
  const auto w = StepGraphon::constant(0.5);
  std::vector<double> medians;
  for (std::size_t n : {64, 128, 256}) {
    std::vector<double> d;
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto g = sample_g(n, w, derive_seed(kSeed, s, Stream::graph));
      d.push_back(cut_distance_upper(graphon_of_graph(g), w, AlignmentStrategy::degree_sort).value);
    }
    medians.push_back(EmpiricalDistribution(d).quantile(0.5));
  }
  const bool ok = medians[0] > medians[1] && medians[1] > medians[2];
  return {ok, fmt("median cut-distance bound n=64: %.4f, 128: %.4f, 256: %.4f", medians[0],
                  medians[1], medians[2])};
}

// ---------------------------------------------------------------- 11
Outcome lower_mass() {
  const auto g = complete(2000);
  const auto half = lmb_experiment(g, 0.5, 50, kSeed);
  const auto one = lmb_experiment(g, 1.0, 50, kSeed);
  const auto two = lmb_experiment(g, 2.0, 50, kSeed);
  bool monotone = true;
  for (std::size_t r = 0; r < 50; ++r) {
    monotone = monotone && half.values[r] <= one.values[r] && one.values[r] <= two.values[r];
  }
  const bool ok = monotone && one.q05 >= kLowerMassQ05;
  return {ok, fmt("m_1 q05=%.4f (>= %.2f), q50=%.4f; monotone in c: %s", one.q05, kLowerMassQ05,
                  one.q50, monotone ? "yes" : "no")};
}

// ---------------------------------------------------------------- 12
Outcome attachment() {
  const auto g = complete(2000);
  const WalkSampler walk(g);
  const auto r = attachment_uniformity_test(walk, 3, 2000, kSeed);
  return {r.ks <= kAttachmentKs,
          fmt("KS to uniform %.4f (<= %.2f), raw ratios %.4f", r.ks, kAttachmentKs, r.ks_raw)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"alpha exactness", alpha_exactness},
      {"UST law oracle", ust_law_oracle},
      {"Laplacian walk oracle", laplacian_oracle},
      {"two-point scaling", scaling_two_point},
      {"k = 4 joint distances", scaling_joint},
      {"CRT sampler laws", crt_laws},
      {"stick-breaking perturbation", perturbation_suite},
      {"capacity bounds", capacity_bounds},
      {"alpha consistency", alpha_consistency},
      {"graphon convergence trend", graphon_convergence},
      {"lower mass bound", lower_mass},
      {"attachment uniformity", attachment},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  %2zu  %-28s %s [%.1fs]\n", out.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first, out.detail.c_str(), secs);
    std::fflush(stdout);
    failed += out.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
