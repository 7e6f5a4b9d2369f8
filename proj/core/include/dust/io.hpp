#pragma once

#include <string>
#include <string_view>

#include "dust/crt.hpp"
#include "dust/graph.hpp"
#include "dust/graphon.hpp"
#include "dust/ust.hpp"

namespace dust {

/// {"breakpoints": [0, ..., 1], "values": [[...], ...]}
StepGraphon graphon_from_json(std::string_view text);
std::string graphon_to_json(const StepGraphon& w);

/// {"n": N, "edges": [[i, j, w], ...]} with i < j, plus an optional
/// "latent" array for graphs sampled from a graphon.
WeightedGraph graph_from_json(std::string_view text);
std::string graph_to_json(const WeightedGraph& g);

/// {"root": r, "parent": [...], "branch_step": [...]} with -1 for "none".
/// Wilson provenance is kept in the optional "branch_pos" and "branches"
/// ([[start, hit, length], ...]) keys.
SpanningTree tree_from_json(std::string_view text);
std::string tree_to_json(const SpanningTree& t);

/// {"ys": [...], "zs": [...]}
StickSequence sticks_from_json(std::string_view text);
std::string sticks_to_json(const StickSequence& s);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace dust
