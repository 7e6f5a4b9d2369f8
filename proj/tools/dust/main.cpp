#include <cstdio>
#include <exception>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "dust/error.hpp"
#include "dust/io.hpp"
#include "dust/random.hpp"
#include "dust/version.hpp"
#include "json_config.hpp"
#include "manifest.hpp"

namespace {

using dust::cli::Json;

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

/// Resolved options of one subcommand, defaults included.
Json echo_options(const CLI::App* sub) {
  Json j = Json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt == sub->get_help_ptr() || opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (opt->count() > 0) {
      const auto& res = opt->results();
      j[name] = res.size() == 1 ? Json(res.front()) : Json(res);
    } else if (!opt->get_default_str().empty()) {
      j[name] = opt->get_default_str();
    }
  }
  return j;
}

void emit_manifest(const dust::cli::RunManifest& manifest, const std::string& path) {
  const std::string text = manifest.to_json().dump(2) + "\n";
  std::string target = path;
  if (target.empty() && !manifest.output_paths().empty()) {
    target = manifest.output_paths().front() + ".manifest.json";
  }
  if (target.empty()) {
    std::fputs(manifest.to_json().dump().c_str(), stderr);
    std::fputc('\n', stderr);
  } else {
    dust::write_text_file(target, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniform spanning trees of dense graphs and their CRT scaling limit", "dust"};
  app.option_defaults()->always_capture_default()->multi_option_policy(
      CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dust::kVersion));
  app.config_formatter(std::make_shared<dust::cli::JsonConfig>());
  app.set_config("--config", "", "JSON config: {\"<command>\": {\"<option>\": value}}");

  dust::cli::GlobalOptions global;
  app.add_option("--threads", global.threads, "Worker threads (0: all available)");
  app.add_option("--manifest", global.manifest,
                 "Manifest path (default: <first output>.manifest.json, else stderr)");
  const auto commands = dust::cli::register_commands(app, global);
  for (const auto& c : commands) {
    // List options stay multi-valued.
    for (CLI::Option* opt : c.app->get_options()) {
      if (opt->get_items_expected_max() > 1) opt->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << "\n" << app.help();
    return kExitValidation;
  }

  const dust::cli::Command* chosen = nullptr;
  for (const auto& c : commands) {
    if (c.app->parsed()) chosen = &c;
  }
  if (chosen == nullptr) return kExitValidation;
  if (global.threads == 0) global.threads = dust::default_threads();

  Json config;
  config["threads"] = global.threads;
  config[chosen->app->get_name()] = echo_options(chosen->app);
  dust::cli::RunManifest manifest(chosen->app->get_name(), config, *chosen->seed);

  int code = 0;
  try {
    chosen->run(manifest);
    std::string problem;
    if (!manifest.verify_outputs(problem)) {
      manifest.set_status("runtime-error", problem);
      std::cerr << "error: " << problem << "\n";
      code = kExitRuntime;
    }
  } catch (const dust::ValidationError& e) {
    manifest.set_status("validation-error", e.what());
    std::cerr << "error: " << e.what() << "\n";
    code = kExitValidation;
  } catch (const std::exception& e) {
    manifest.set_status("runtime-error", e.what());
    std::cerr << "error: " << e.what() << "\n";
    code = kExitRuntime;
  }
  try {
    emit_manifest(manifest, global.manifest);
  } catch (const std::exception& e) {
    std::cerr << "error: cannot write manifest: " << e.what() << "\n";
    return kExitRuntime;
  }
  return code;
}
