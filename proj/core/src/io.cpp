#include "dust/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dust/error.hpp"

namespace dust {

using nlohmann::json;

namespace {

json parse(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

template <typename F>
auto convert(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid ") + what + " JSON: " + e.what());
  }
}

std::int64_t index_or_none(std::size_t v, std::size_t none) {
  return v == none ? -1 : static_cast<std::int64_t>(v);
}

}  // namespace

StepGraphon graphon_from_json(std::string_view text) {
  const json j = parse(text, "graphon");
  return convert("graphon", [&] {
    return StepGraphon(j.at("breakpoints").get<std::vector<double>>(),
                       j.at("values").get<std::vector<std::vector<double>>>());
  });
}

std::string graphon_to_json(const StepGraphon& w) {
  const std::size_t m = w.block_count();
  std::vector<std::vector<double>> values(m, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < m; ++k) values[i][k] = w.value(i, k);
  }
  json j;
  j["breakpoints"] = std::vector<double>(w.breakpoints().begin(), w.breakpoints().end());
  j["values"] = values;
  return j.dump();
}

WeightedGraph graph_from_json(std::string_view text) {
  const json j = parse(text, "graph");
  return convert("graph", [&] {
    const auto n = j.at("n").get<std::size_t>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      detail::require(e.is_array() && e.size() == 3, "edges are [i, j, w] triples");
      const auto u = e.at(0).get<std::int64_t>();
      const auto v = e.at(1).get<std::int64_t>();
      detail::require(u >= 0 && v >= 0, "edge endpoints must be nonnegative");
      detail::require(u < v, "edges must be listed with i < j");
      edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v),
                       e.at(2).get<double>()});
    }
    auto g = WeightedGraph::from_edges(n, edges);
    if (j.contains("latent")) {
      auto latent = j.at("latent").get<std::vector<double>>();
      const auto w = g.weights();
      return WeightedGraph(n, std::vector<double>(w.begin(), w.end()),
                           std::move(latent));
    }
    return g;
  });
}

std::string graph_to_json(const WeightedGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v, e.weight});
  json j;
  j["n"] = g.size();
  j["edges"] = std::move(edges);
  if (!g.latent().empty()) {
    j["latent"] = std::vector<double>(g.latent().begin(), g.latent().end());
  }
  return j.dump();
}

SpanningTree tree_from_json(std::string_view text) {
  const json j = parse(text, "tree");
  return convert("tree", [&]() -> SpanningTree {
    const auto root = j.at("root").get<std::int64_t>();
    const auto raw = j.at("parent").get<std::vector<std::int64_t>>();
    detail::require(root >= 0 && static_cast<std::size_t>(root) < raw.size(),
                    "root out of range");
    std::vector<Vertex> parent(raw.size(), kNoVertex);
    for (std::size_t v = 0; v < raw.size(); ++v) {
      detail::require(raw[v] >= -1 && raw[v] < static_cast<std::int64_t>(raw.size()),
                      "parent out of range");
      if (raw[v] >= 0) parent[v] = static_cast<Vertex>(raw[v]);
    }
    if (!j.contains("branches")) {
      return SpanningTree(static_cast<Vertex>(root), std::move(parent));
    }
    auto unpack = [&](const char* key) {
      const auto vals = j.at(key).get<std::vector<std::int64_t>>();
      detail::require(vals.size() == raw.size(), "provenance length mismatch");
      std::vector<std::size_t> out(vals.size(), kNoStep);
      for (std::size_t v = 0; v < vals.size(); ++v) {
        detail::require(vals[v] >= -1, "provenance entries must be >= -1");
        if (vals[v] >= 0) out[v] = static_cast<std::size_t>(vals[v]);
      }
      return out;
    };
    std::vector<Branch> branches;
    for (const auto& b : j.at("branches")) {
      detail::require(b.is_array() && b.size() == 3,
                      "branches are [start, hit, length] triples");
      const auto start = b.at(0).get<std::size_t>();
      const auto hit = b.at(1).get<std::size_t>();
      detail::require(start < raw.size() && hit < raw.size(),
                      "branch vertex out of range");
      branches.push_back({static_cast<Vertex>(start), static_cast<Vertex>(hit),
                          b.at(2).get<std::size_t>()});
    }
    return SpanningTree(static_cast<Vertex>(root), std::move(parent),
                        unpack("branch_step"), unpack("branch_pos"),
                        std::move(branches));
  });
}

std::string tree_to_json(const SpanningTree& t) {
  json j;
  j["root"] = t.root();
  std::vector<std::int64_t> parent(t.size());
  for (std::size_t v = 0; v < t.size(); ++v) {
    parent[v] = index_or_none(t.parent(static_cast<Vertex>(v)), kNoVertex);
  }
  j["parent"] = parent;
  if (t.has_provenance()) {
    std::vector<std::int64_t> step(t.size());
    std::vector<std::int64_t> pos(t.size());
    for (std::size_t v = 0; v < t.size(); ++v) {
      step[v] = index_or_none(t.branch_step(static_cast<Vertex>(v)), kNoStep);
      pos[v] = index_or_none(t.branch_pos(static_cast<Vertex>(v)), kNoStep);
    }
    j["branch_step"] = step;
    j["branch_pos"] = pos;
    json branches = json::array();
    for (const auto& b : t.branches()) branches.push_back({b.start, b.hit, b.length});
    j["branches"] = std::move(branches);
  } else {
    std::vector<std::int64_t> step(t.size(), -1);
    for (std::size_t v = 0; v < t.size(); ++v) {
      if (t.contains(static_cast<Vertex>(v))) step[v] = 0;
    }
    j["branch_step"] = step;
  }
  return j.dump();
}

StickSequence sticks_from_json(std::string_view text) {
  const json j = parse(text, "stick sequence");
  StickSequence s = convert("stick sequence", [&] {
    return StickSequence{j.at("ys").get<std::vector<double>>(),
                         j.at("zs").get<std::vector<double>>()};
  });
  validate(s, true);
  return s;
}

std::string sticks_to_json(const StickSequence& s) {
  json j;
  j["ys"] = s.ys;
  j["zs"] = s.zs;
  return j.dump();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace dust
