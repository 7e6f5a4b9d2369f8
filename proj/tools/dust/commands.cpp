#include "commands.hpp"

#include <cstdio>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "dust/crt.hpp"
#include "dust/error.hpp"
#include "dust/goodtree.hpp"
#include "dust/graph.hpp"
#include "dust/graphon.hpp"
#include "dust/io.hpp"
#include "dust/stats.hpp"
#include "dust/ust.hpp"
#include "dust/walk.hpp"

namespace dust::cli {
namespace {

using detail::require;

// ------------------------------------------------------------------ helpers

void add_graph_options(CLI::App* sub, GraphOptions& g) {
  sub->add_option("--graph", g.file, "Graph JSON file");
  sub->add_option("--family", g.family, "Graph family instead of --graph")
      ->check(CLI::IsMember({"complete", "bipartite", "path", "star", "barbell", "gnw", "hnw"}));
  sub->add_option("--n", g.n, "Vertex count for --family");
  sub->add_option("--a", g.a, "First part size for bipartite (default n/3)");
  sub->add_option("--graphon", g.graphon, "Graphon JSON file for gnw/hnw");
}

StepGraphon load_graphon(const std::string& path) {
  return graphon_from_json(read_text_file(path));
}

WeightedGraph load_graph(const GraphOptions& g, std::uint64_t seed) {
  require(g.file.empty() != g.family.empty(), "give exactly one of --graph or --family");
  if (!g.file.empty()) return graph_from_json(read_text_file(g.file));
  require(g.n >= 1, "--family needs --n >= 1");
  if (g.family == "complete") return complete(g.n);
  if (g.family == "bipartite") {
    const std::size_t a = g.a == 0 ? g.n / 3 : g.a;
    require(a >= 1 && a < g.n, "bipartite needs 1 <= a < n");
    return complete_bipartite(a, g.n - a);
  }
  if (g.family == "path") return path_graph(g.n);
  if (g.family == "star") return star_graph(g.n);
  if (g.family == "barbell") {
    require(g.n % 2 == 0, "barbell needs an even n");
    return barbell(g.n / 2);
  }
  require(!g.graphon.empty(), g.family + " needs --graphon");
  const auto w = load_graphon(g.graphon);
  return g.family == "gnw" ? sample_g(g.n, w, seed) : sample_h(g.n, w, seed);
}

std::vector<Vertex> parse_vertices(const std::string& text, std::size_t n) {
  std::vector<Vertex> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    require(!item.empty(), "empty entry in vertex list '" + text + "'");
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == item.size(), "bad vertex '" + item + "'");
    require(v < n, "vertex " + item + " out of range");
    out.push_back(static_cast<Vertex>(v));
  }
  return out;
}

/// Writes to the file (recorded in the manifest) or to stdout.
void emit(RunManifest& manifest, const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
  } else {
    manifest.write_output(path, text);
  }
}

std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

Json estimate_json(double value, double stderr_) {
  return Json{{"estimate", value}, {"stderr", stderr_}};
}

// ------------------------------------------------------------------ commands

Command gen_command(CLI::App& app) {
  struct State {
    GraphOptions g;
    std::uint64_t seed = 0;
    std::string out;
  };
  auto s = std::make_shared<State>();
  auto* sub = app.add_subcommand("gen", "Generate a graph from a family or a graphon");
  add_graph_options(sub, s->g);
  sub->add_option("--seed", s->seed, "Master seed");
  sub->add_option("--out", s->out, "Output graph JSON (stdout if omitted)");
  return {sub, &s->seed, [s](RunManifest& m) {
            require(s->g.file.empty(), "gen takes --family, not --graph");
            emit(m, s->out, graph_to_json(load_graph(s->g, s->seed)) + "\n");
          }};
}

Command alpha_command(CLI::App& app) {
  struct State {
    GraphOptions g;
    std::string format = "text";
    std::uint64_t seed = 0;
    std::string out;
  };
  auto s = std::make_shared<State>();
  auto* sub = app.add_subcommand("alpha", "alpha_W of a graphon or alpha_tilde of a graph");
  add_graph_options(sub, s->g);
  sub->add_option("--seed", s->seed, "Seed for gnw/hnw families");
  sub->add_option("--format", s->format)->check(CLI::IsMember({"text", "json"}));
  sub->add_option("--out", s->out, "Output file (stdout if omitted)");
  return {sub, &s->seed, [s](RunManifest& m) {
            double value = 0.0;
            std::string source;
            if (!s->g.graphon.empty() && s->g.file.empty() && s->g.family.empty()) {
              value = alpha_w(load_graphon(s->g.graphon));
              source = "alpha_w";
            } else {
              value = alpha_tilde(load_graph(s->g, s->seed));
              source = "alpha_tilde";
            }
            if (s->format == "text") {
              emit(m, s->out, Json(value).dump() + "\n");
            } else {
              emit(m, s->out, json_text({{"alpha", value}, {"source", source}}));
            }
          }};
}

Command alpha_n_command(CLI::App& app, const GlobalOptions& global) {
  struct State {
    GraphOptions g;
    AlphaNConfig config;
    std::string out;
  };
  auto s = std::make_shared<State>();
  auto* sub = app.add_subcommand("alpha-n", "Capacity estimator alpha_n");
  add_graph_options(sub, s->g);
  sub->add_option("--kappa", s->config.kappa, "Horizon exponent, M = ceil(n^kappa)");
  sub->add_option("--outer", s->config.outer, "Outer stationary walks");
  sub->add_option("--inner", s->config.inner, "Capacity walks per outer walk");
  sub->add_option("--seed", s->config.seed, "Master seed");
  sub->add_option("--out", s->out, "Output JSON (stdout if omitted)");
  return {sub, &s->config.seed, [s, &global](RunManifest& m) {
            require(s->config.kappa > 0.0 && s->config.kappa <= 1.0 / 32.0,
                    "kappa must lie in (0, 1/32]");
            require(s->config.outer >= 2 && s->config.inner >= 1,
                    "alpha-n needs outer >= 2 and inner >= 1");
            const auto g = load_graph(s->g, s->config.seed);
            auto config = s->config;
            config.threads = global.threads;
            const auto r = alpha_n_capacity(g, config);
            Json j = estimate_json(r.value, r.stderr_);
            j["alpha_tilde"] = alpha_tilde(g);
            j["config"] = {{"n", g.size()},
                           {"kappa", config.kappa},
                           {"outer", config.outer},
                           {"inner", config.inner},
                           {"horizon", r.horizon},
                           {"segment", r.segment},
                           {"seed", config.seed}};
            emit(m, s->out, json_text(j));
          }};
}

Command ust_command(CLI::App& app) {
  struct State {
    GraphOptions g;
    std::uint64_t seed = 0;
    std::string ordering = "random";
    std::string order;
    std::size_t prefix = 0;
    std::string out;
  };
  auto s = std::make_shared<State>();
  auto* sub = app.add_subcommand("ust", "Sample a uniform spanning tree with Wilson's algorithm");
  add_graph_options(sub, s->g);
  sub->add_option("--seed", s->seed, "Master seed");
  sub->add_option("--ordering", s->ordering)->check(CLI::IsMember({"random", "given"}));
  sub->add_option("--order", s->order, "Comma-separated ordering for --ordering given");
  sub->add_option("--prefix", s->prefix, "Only run the first K vertices of the ordering");
  sub->add_option("--out", s->out, "Output tree JSON (stdout if omitted)");
  return {sub, &s->seed, [s](RunManifest& m) {
            const auto g = load_graph(s->g, s->seed);
            std::vector<Vertex> ordering;
            if (s->ordering == "given") {
              require(!s->order.empty(), "--ordering given needs --order");
              ordering = parse_vertices(s->order, g.size());
            } else {
              require(s->order.empty(), "--order needs --ordering given");
            }
            require(g.is_connected(), "graph is not connected");
            Rng rng = make_rng(s->seed, 0, Stream::ust);
            if (ordering.empty()) ordering = random_ordering(g.size(), rng);
            if (s->prefix > 0) {
              require(s->prefix <= ordering.size(), "--prefix exceeds the ordering length");
              ordering.resize(s->prefix);
            }
            const WalkSampler walk(g);
            const auto tree = ordering.size() == g.size() ? wilson_ust(walk, ordering, rng)
                                                          : wilson_partial(walk, ordering, rng);
            emit(m, s->out, tree_to_json(tree) + "\n");
          }};
}

Command crt_command(CLI::App& app) {
  struct State {
    std::size_t k = 2;
    std::size_t reps = 1000;
    std::uint64_t seed = 0;
    std::string sticks;
    std::string format = "csv";
    std::string out;
  };
  auto s = std::make_shared<State>();
  auto* sub = app.add_subcommand("crt", "Sample CRT distance matrices or build a stick tree");
  sub->add_option("--k", s->k, "Marked points per sample");
  sub->add_option("--reps", s->reps, "Samples");
  sub->add_option("--seed", s->seed, "Master seed");
  sub->add_option("--sticks", s->sticks, "Build the tree of this stick sequence JSON instead");
  sub->add_option("--format", s->format)->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", s->out, "Output file (stdout if omitted)");
  return {sub, &s->seed, [s](RunManifest& m) {
            if (!s->sticks.empty()) {
              const auto seq = sticks_from_json(read_text_file(s->sticks));
              const auto tree = sb_build(seq);
              const std::size_t k = tree.marked_points();
              Json rows = Json::array();
              for (std::size_t i = 0; i < k; ++i) {
                Json row = Json::array();
                for (std::size_t j = 0; j < k; ++j) row.push_back(tree.distance(i, j));
                rows.push_back(row);
              }
              emit(m, s->out,
                   json_text({{"k", k}, {"total_length", tree.total_length()}, {"distances", rows}}));
              return;
            }
            require(s->k >= 2, "--k must be at least 2");
            require(s->reps >= 1, "--reps must be positive");
            std::ostringstream csv;
            csv.precision(17);
            Json samples = Json::array();
            if (s->format == "csv") csv << "replicate,i,j,distance\n";
            for (std::size_t r = 0; r < s->reps; ++r) {
              Rng rng = make_rng(s->seed, r, Stream::crt);
              const auto d = crt_distance_matrix(s->k, rng);
              Json pairs = Json::array();
              for (std::size_t i = 0; i < s->k; ++i) {
                for (std::size_t j = i + 1; j < s->k; ++j) {
                  if (s->format == "csv") {
                    csv << r << ',' << i << ',' << j << ',' << d[i * s->k + j] << '\n';
                  } else {
                    pairs.push_back(d[i * s->k + j]);
                  }
                }
              }
              if (s->format == "json") samples.push_back(pairs);
            }
            if (s->format == "csv") {
              emit(m, s->out, csv.str());
            } else {
              emit(m, s->out, json_text({{"k", s->k}, {"reps", s->reps}, {"pairs", samples}}));
            }
          }};
}

Command verify_command(CLI::App& app, const GlobalOptions& global) {
  struct State {
    GraphOptions g;
    ExperimentConfig config;
    std::string rescaling = "alpha_tilde";
    std::string format = "json";
    std::string out;
    std::string csv;
  };
  auto s = std::make_shared<State>();
  auto* sub = app.add_subcommand("verify", "Compare rescaled UST distances with the CRT");
  add_graph_options(sub, s->g);
  sub->add_option("--k", s->config.k, "Sampled vertices per replicate");
  sub->add_option("--reps", s->config.replicates, "Replicates");
  sub->add_option("--rescaling", s->rescaling)
      ->check(CLI::IsMember({"alpha_tilde", "alpha_mc", "fixed", "alpha_w"}));
  sub->add_option("--alpha", s->config.alpha_value, "Alpha for --rescaling fixed");
  sub->add_option("--kappa", s->config.kappa, "alpha_mc horizon exponent");
  sub->add_option("--alpha-outer", s->config.alpha_outer, "alpha_mc outer walks");
  sub->add_option("--alpha-inner", s->config.alpha_inner, "alpha_mc inner walks");
  sub->add_option("--crt-samples", s->config.crt_samples, "CRT matrices for k >= 3");
  sub->add_option("--ks-threshold", s->config.ks_threshold, "Pass threshold for every KS");
  sub->add_option("--seed", s->config.seed, "Master seed");
  sub->add_option("--format", s->format, "What goes to --out or stdout")
      ->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", s->out, "Output file (stdout if omitted)");
  sub->add_option("--csv", s->csv, "Also write the distance CSV here");
  return {sub, &s->config.seed, [s, &global](RunManifest& m) {
            auto config = s->config;
            config.rescaling = rescaling_mode_from_string(s->rescaling);
            config.threads = global.threads;
            require(config.k >= 2, "--k must be at least 2");
            require(config.replicates >= 1, "--reps must be positive");
            if (config.rescaling == RescalingMode::alpha_w) {
              require(!s->g.graphon.empty(), "--rescaling alpha_w needs --graphon");
              config.alpha_value = alpha_w(load_graphon(s->g.graphon));
            }
            const auto g = load_graph(s->g, config.seed);
            const auto r = verify_scaling(g, config);
            Json ks = {{"two_point", r.ks_two_point}};
            ks["joint"] = r.ks_joint ? Json(*r.ks_joint) : Json(nullptr);
            Json report;
            report["config"] = {{"n", r.n},
                                {"k", config.k},
                                {"replicates", config.replicates},
                                {"rescaling", to_string(config.rescaling)},
                                {"crt_samples", config.crt_samples},
                                {"seed", config.seed}};
            report["alpha"] = {{"value", r.alpha},
                               {"source", r.alpha_source},
                               {"stderr", r.alpha_stderr},
                               {"factor", r.sample.factor}};
            report["ks"] = ks;
            report["moments"] = {{"mean", r.mean}, {"stddev", r.stddev}, {"crt_mean", r.crt_mean}};
            report["thresholds"] = {{"ks", config.ks_threshold}};
            report["pass"] = r.pass;
            report["notes"] = r.notes;
            const std::string csv = distance_csv(r.sample);
            emit(m, s->out, s->format == "json" ? json_text(report) : csv);
            if (!s->csv.empty()) m.write_output(s->csv, csv);
          }};
}

Command lmb_command(CLI::App& app, const GlobalOptions& global) {
  struct State {
    GraphOptions g;
    std::vector<double> c{1.0};
    std::size_t reps = 50;
    double epsilon = 0.02;
    std::uint64_t seed = 0;
    std::string out;
  };
  auto s = std::make_shared<State>();
  auto* sub = app.add_subcommand("lmb", "Lower mass bound of sampled USTs");
  add_graph_options(sub, s->g);
  sub->add_option("--c", s->c, "Radius constants (repeatable)");
  sub->add_option("--reps", s->reps, "Replicates");
  sub->add_option("--epsilon", s->epsilon, "Level for fraction_below");
  sub->add_option("--seed", s->seed, "Master seed");
  sub->add_option("--out", s->out, "Output JSON (stdout if omitted)");
  return {sub, &s->seed, [s, &global](RunManifest& m) {
            for (double c : s->c) require(c > 0.0, "c must be positive");
            require(s->reps >= 1, "--reps must be positive");
            const auto g = load_graph(s->g, s->seed);
            require(g.is_connected(), "graph is not connected");
            Json results = Json::array();
            for (double c : s->c) {
              const auto r = lmb_experiment(g, c, s->reps, s->seed, s->epsilon, global.threads);
              results.push_back({{"c", r.c},
                                 {"replicates", r.replicates},
                                 {"q05", r.q05},
                                 {"q50", r.q50},
                                 {"q95", r.q95},
                                 {"epsilon", r.epsilon},
                                 {"fraction_below", r.fraction_below},
                                 {"values", r.values}});
            }
            emit(m, s->out, json_text({{"n", g.size()}, {"seed", s->seed}, {"results", results}}));
          }};
}

StepGraphon load_graphon_like(const std::string& path) {
  const std::string text = read_text_file(path);
  bool graphon = false;
  try {
    graphon = nlohmann::json::parse(text).contains("breakpoints");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed JSON in " + path + ": " + e.what());
  }
  return graphon ? graphon_from_json(text) : graphon_of_graph(graph_from_json(text));
}

Command cutdist_command(CLI::App& app) {
  struct State {
    std::string a;
    std::string b;
    std::string align = "degree-sort";
    std::uint64_t seed = 0;
    std::string out;
  };
  auto s = std::make_shared<State>();
  auto* sub = app.add_subcommand("cutdist", "Upper bound on the cut distance");
  sub->add_option("--a", s->a, "Graph or graphon JSON");
  sub->add_option("--b", s->b, "Graph or graphon JSON");
  sub->add_option("--align", s->align)
      ->check(CLI::IsMember({"degree-sort", "exact-permutation"}));
  sub->add_option("--seed", s->seed, "Unused; recorded in the manifest");
  sub->add_option("--out", s->out, "Output JSON (stdout if omitted)");
  return {sub, &s->seed, [s](RunManifest& m) {
            require(!s->a.empty() && !s->b.empty(), "cutdist needs --a and --b");
            const auto a = load_graphon_like(s->a);
            const auto b = load_graphon_like(s->b);
            const auto strategy = s->align == "degree-sort" ? AlignmentStrategy::degree_sort
                                                            : AlignmentStrategy::exact_permutation;
            const auto r = cut_distance_upper(a, b, strategy);
            emit(m, s->out,
                 json_text({{"value", r.value},
                            {"method", r.method},
                            {"refined_blocks", r.refined_blocks},
                            {"align", s->align}}));
          }};
}

Command expander_command(CLI::App& app) {
  struct State {
    GraphOptions g;
    std::size_t mc = 0;
    std::uint64_t seed = 0;
    std::string out;
  };
  auto s = std::make_shared<State>();
  auto* sub = app.add_subcommand("expander", "Expansion constant gamma");
  add_graph_options(sub, s->g);
  sub->add_option("--mc", s->mc, "Local-search trials (0: exact when n is small enough)");
  sub->add_option("--seed", s->seed, "Master seed");
  sub->add_option("--out", s->out, "Output JSON (stdout if omitted)");
  return {sub, &s->seed, [s](RunManifest& m) {
            const auto g = load_graph(s->g, s->seed);
            require(g.size() >= 2, "expansion needs at least 2 vertices");
            Json j = {{"n", g.size()}};
            if (s->mc == 0 && g.size() <= kExactExpanderMaxVertices) {
              j["gamma"] = expander_gamma_exact(g);
              j["method"] = "exact";
            } else {
              const auto r = expander_gamma_mc(g, derive_seed(s->seed, 0, Stream::expander),
                                               s->mc == 0 ? 200 : s->mc);
              j["gamma"] = r.gamma_upper;
              j["method"] = "mc-upper-bound";
              j["trials"] = r.trials;
              j["disconnected"] = r.disconnected;
              j["witness"] = r.witness;
            }
            emit(m, s->out, json_text(j));
          }};
}

Command mix_command(CLI::App& app) {
  struct State {
    GraphOptions g;
    bool lazy = false;
    bool bound = false;
    std::size_t max_steps = 100000;
    std::uint64_t seed = 0;
    std::string out;
  };
  auto s = std::make_shared<State>();
  auto* sub = app.add_subcommand("mix", "Total-variation mixing time");
  add_graph_options(sub, s->g);
  sub->add_flag("--lazy", s->lazy, "Use the lazy walk");
  sub->add_flag("--bound", s->bound, "Compare the lazy mixing time with the expansion bound");
  sub->add_option("--max-steps", s->max_steps, "Give up after this many steps");
  sub->add_option("--seed", s->seed, "Master seed");
  sub->add_option("--out", s->out, "Output JSON (stdout if omitted)");
  return {sub, &s->seed, [s](RunManifest& m) {
            const auto g = load_graph(s->g, s->seed);
            require(g.size() <= kMixingMaxVertices, "graph too large for exact mixing");
            const Laziness lazy = s->lazy ? Laziness::half : Laziness::none;
            const std::size_t t = mixing_time_exact(g, lazy, s->max_steps);
            Json j = {{"n", g.size()},
                      {"lazy", s->lazy},
                      {"t_mix", t},
                      {"tv_at_t_mix", max_tv_distance(g, lazy, t)}};
            if (s->bound) {
              const auto r = check_mixing_bound(g, derive_seed(s->seed, 0, Stream::expander));
              j["bound"] = {{"lazy_t_mix", r.t_mix},
                            {"gamma", r.gamma},
                            {"gamma_source", r.gamma_source},
                            {"value", r.bound},
                            {"holds", r.holds},
                            {"asymptotic", r.asymptotic}};
            }
            emit(m, s->out, json_text(j));
          }};
}

Command cap_command(CLI::App& app) {
  struct State {
    GraphOptions g;
    std::string set;
    std::string close;
    std::size_t k = 1;
    bool exact = false;
    std::size_t mc = 0;
    std::uint64_t seed = 0;
    std::string out;
  };
  auto s = std::make_shared<State>();
  auto* sub = app.add_subcommand("cap", "Capacity Cap_k(U), or closeness with --close");
  add_graph_options(sub, s->g);
  sub->add_option("--set", s->set, "Comma-separated vertex set U");
  sub->add_option("--close", s->close, "Second set W for Close_k(U, W)");
  sub->add_option("--k", s->k, "Horizon");
  auto* exact = sub->add_flag("--exact", s->exact, "Exact dynamic programming (default)");
  sub->add_option("--mc", s->mc, "Monte-Carlo with this many walks")->excludes(exact);
  sub->add_option("--seed", s->seed, "Master seed");
  sub->add_option("--out", s->out, "Output JSON (stdout if omitted)");
  return {sub, &s->seed, [s](RunManifest& m) {
            require(!s->set.empty(), "cap needs --set");
            const auto g = load_graph(s->g, s->seed);
            const auto u = parse_vertices(s->set, g.size());
            const bool mc = s->mc > 0;
            const bool closeness = !s->close.empty();
            Json j;
            if (closeness) {
              const auto w = parse_vertices(s->close, g.size());
              require(s->k >= 1, "closeness needs k >= 1");
              if (mc) {
                const WalkSampler walk(g);
                const auto e = closeness_mc(walk, u, w, s->k, s->mc,
                                            derive_seed(s->seed, 0, Stream::capacity));
                j = estimate_json(e.value, e.stderr_);
              } else {
                j = estimate_json(closeness_exact(g, u, w, s->k), 0.0);
              }
              j["upper_bound"] = closeness_upper_bound(g, u.size(), w.size(), s->k);
            } else if (mc) {
              const WalkSampler walk(g);
              const auto e =
                  capacity_mc(walk, u, s->k, s->mc, derive_seed(s->seed, 0, Stream::capacity));
              j = estimate_json(e.value, e.stderr_);
            } else {
              j = estimate_json(capacity_exact(g, u, s->k), 0.0);
            }
            j["config"] = {{"quantity", closeness ? "closeness" : "capacity"},
                           {"k", s->k},
                           {"set", s->set},
                           {"method", mc ? "mc" : "exact"},
                           {"reps", s->mc},
                           {"seed", s->seed}};
            if (closeness) j["config"]["close"] = s->close;
            emit(m, s->out, json_text(j));
          }};
}

Command goodtree_command(CLI::App& app) {
  struct State {
    GraphOptions g;
    std::string tree;
    std::size_t prefix = 2;
    GoodTreeConfig config;
    std::string out;
  };
  auto s = std::make_shared<State>();
  auto* sub = app.add_subcommand("goodtree", "Good-tree diagnostic for a tree inside a graph");
  add_graph_options(sub, s->g);
  sub->add_option("--tree", s->tree, "Tree JSON; otherwise a Wilson run is sampled");
  sub->add_option("--prefix", s->prefix,
                  "Vertices in the sampled Wilson run (2 gives the first branch)");
  sub->add_option("--kappa", s->config.kappa, "Horizon exponent");
  sub->add_option("--subsets", s->config.subsets, "Connected subsets tested");
  sub->add_option("--inner", s->config.inner, "Walks per capacity estimate");
  sub->add_option("--seed", s->config.seed, "Master seed");
  sub->add_option("--out", s->out, "Output JSON (stdout if omitted)");
  return {sub, &s->config.seed, [s](RunManifest& m) {
            require(s->config.kappa > 0.0 && s->config.kappa <= 1.0 / 32.0,
                    "kappa must lie in (0, 1/32]");
            const auto g = load_graph(s->g, s->config.seed);
            const auto tree = [&] {
              if (!s->tree.empty()) return tree_from_json(read_text_file(s->tree));
              require(s->prefix >= 1 && s->prefix <= g.size(), "--prefix must lie in [1, n]");
              require(g.is_connected(), "graph is not connected");
              Rng rng = make_rng(s->config.seed, 0, Stream::ust);
              auto ordering = random_ordering(g.size(), rng);
              ordering.resize(s->prefix);
              return wilson_partial(WalkSampler(g), ordering, rng);
            }();
            const auto r = goodtree_check(g, tree, s->config);
            Json subsets = Json::array();
            for (const auto& v : r.subsets) {
              subsets.push_back({{"size", v.size},
                                 {"capacity", v.capacity},
                                 {"stderr", v.stderr_},
                                 {"centre", v.centre},
                                 {"half_width", v.half_width},
                                 {"within", v.within}});
            }
            emit(m, s->out,
                 json_text({{"n", r.n},
                            {"tree_size", r.tree_size},
                            {"horizon", r.horizon},
                            {"alpha_tilde", r.alpha_tilde},
                            {"is_tree", r.is_tree},
                            {"size_ok", r.size_ok},
                            {"size_limit", r.size_limit},
                            {"min_subset", r.min_subset},
                            {"within_band", r.within_band},
                            {"good", r.good},
                            {"subsets", subsets}}));
          }};
}

}  // namespace

std::vector<Command> register_commands(CLI::App& app, const GlobalOptions& global) {
  return {gen_command(app),      alpha_command(app),        alpha_n_command(app, global),
          ust_command(app),      crt_command(app),          verify_command(app, global),
          lmb_command(app, global), cutdist_command(app),   expander_command(app),
          mix_command(app),      cap_command(app),          goodtree_command(app)};
}

}  // namespace dust::cli
