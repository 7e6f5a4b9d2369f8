#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "manifest.hpp"

namespace dust::cli {

/// Where a command takes its graph from: a JSON file or a named family.
struct GraphOptions {
  std::string file;
  std::string family;
  std::string graphon;
  std::size_t n = 0;
  std::size_t a = 0;
};

struct GlobalOptions {
  unsigned threads = 0;
  std::string manifest;
};

/// A registered subcommand: its CLI11 node, the master seed it reads, and
/// the action run after parsing.
struct Command {
  CLI::App* app = nullptr;
  std::uint64_t* seed = nullptr;
  std::function<void(RunManifest&)> run;
};

std::vector<Command> register_commands(CLI::App& app, const GlobalOptions& global);

}  // namespace dust::cli
