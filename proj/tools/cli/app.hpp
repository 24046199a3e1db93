// Copyright 2026 The nhep Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"

namespace nhep::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

namespace detail {

using Prepared = std::function<void(Context&)>;
using Preparer = std::function<Prepared(const json& source, json& resolved)>;

template <typename Cmd>
Preparer preparer(const std::string& block) {
  return [block](const json& source, json& resolved) -> Prepared {
    Block b(source, block);
    Cmd cmd = Cmd::resolve(b);
    resolved = b.resolved();
    return [cmd](Context& ctx) { cmd.run(ctx); };
  };
}

struct CommandEntry {
  std::string name;   ///< subcommand
  std::string block;  ///< config key
  std::string help;
  Preparer prepare;
};

inline const std::vector<CommandEntry>& commands() {
  static const std::vector<CommandEntry> list = {
      {"eigen-sweep", "eigen_sweep", "Eigen-gap, eigenstate concurrence and relative phase versus eta",
       preparer<EigenSweep>("eigen_sweep")},
      {"evolve", "evolve", "No-jump trajectory from |e,n-1> under the effective model", preparer<Evolve>("evolve")},
      {"full-vs-effective", "full_vs_effective", "Modulated full Hamiltonian against the effective model",
       preparer<FullVsEffective>("full_vs_effective")},
      {"sideband-map", "sideband_map", "Excited population after modulation over a (mu, nu) grid",
       preparer<SidebandMapCommand>("sideband_map")},
      {"pipeline", "pipeline", "Simulated mapping, tomography and correction over an (eta, t) grid",
       preparer<Pipeline>("pipeline")},
      {"fit-spectrum", "fit_spectrum", "Eigenenergies and eigenstates fitted from simulated tomography",
       preparer<FitSpectrum>("fit_spectrum")},
      {"two-qubit", "two_qubit", "Two coupled decaying qubits: gap and eigenstate concurrence versus eta",
       preparer<TwoQubit>("two_qubit")},
  };
  return list;
}

inline std::vector<std::string> block_names() {
  std::vector<std::string> out;
  for (const auto& c : commands()) out.push_back(c.block);
  return out;
}

inline void status_line(std::ostream& out, const std::string& status, int code, const std::string& command,
                        const Context* ctx, const std::string& message) {
  json s;
  s["status"] = status;
  s["exit_code"] = code;
  s["command"] = command;
  if (ctx) {
    s["out"] = ctx->out_dir.generic_string();
    s["seed"] = ctx->seed;
    s["outputs"] = ctx->outputs;
  }
  s["message"] = message;
  out << s.dump() << std::endl;
}

}  // namespace detail

/// Parses argv, runs one subcommand and prints a one-line JSON status record
/// as the last line of `out`. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exceptional-point entanglement simulations"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = "nhep_out";
  std::optional<std::uint64_t> seed_flag;
  std::optional<unsigned> threads_flag;
  bool svg = false;
  app.add_option("--config", config_path, "JSON config file (schema_version \"1\")");
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", seed_flag, "Base seed for stochastic commands (overrides the config)");
  app.add_option("--threads", threads_flag, "Worker threads (0 = logical cores)");
  app.add_flag("--svg", svg, "Also write SVG plots");

  std::map<std::string, CLI::App*> subs;
  for (const auto& c : detail::commands()) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->fallthrough();
    subs[c.name] = sub;
  }

  std::string command = "";
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    detail::status_line(out, "config_error", kExitConfig, command, nullptr, e.what());
    return kExitConfig;
  }

  const detail::CommandEntry* entry = nullptr;
  for (const auto& c : detail::commands())
    if (subs[c.name]->parsed()) entry = &c;
  command = entry->name;

  Context ctx;
  const Context* ctx_for_status = nullptr;
  try {
    ConfigDocument doc;
    if (!config_path.empty()) doc = ConfigDocument::load(config_path, detail::block_names());
    // Every block present in the document must be valid, not only the one run.
    detail::Prepared job;
    json resolved_block;
    for (const auto& c : detail::commands()) {
      json resolved;
      auto prepared = c.prepare(doc.block(c.block), resolved);
      if (&c == entry) {
        job = std::move(prepared);
        resolved_block = std::move(resolved);
      }
    }

    ctx.seed = seed_flag ? *seed_flag : doc.seed.value_or(1);
    const std::int64_t threads = threads_flag ? static_cast<std::int64_t>(*threads_flag) : doc.threads.value_or(0);
    ctx.threads = static_cast<unsigned>(threads);
    ctx.svg = svg;
    ctx.out_dir = out_dir;
    std::error_code ec;
    std::filesystem::create_directories(ctx.out_dir, ec);
    if (ec || !std::filesystem::is_directory(ctx.out_dir))
      throw InvalidArgument("cannot create output directory " + out_dir);
    ctx_for_status = &ctx;

    json resolved;
    resolved["schema_version"] = kSchemaVersion;
    resolved["seed"] = ctx.seed;
    resolved["threads"] = threads;
    resolved[entry->block] = resolved_block;
    ctx.write("config.resolved.json", resolved.dump(2) + "\n");

    job(ctx);
  } catch (const Flagged& e) {
    err << "error: " << e.what() << "\n";
    detail::status_line(out, "flagged", kExitNumerical, command, ctx_for_status, e.what());
    return kExitNumerical;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    detail::status_line(out, "config_error", kExitConfig, command, ctx_for_status, e.what());
    return kExitConfig;
  } catch (const NumericalFailure& e) {
    err << "error: " << e.what() << "\n";
    detail::status_line(out, "numerical_failure", kExitNumerical, command, ctx_for_status, e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    detail::status_line(out, "error", kExitNumerical, command, ctx_for_status, e.what());
    return kExitNumerical;
  }
  detail::status_line(out, "ok", kExitOk, command, &ctx, "");
  return kExitOk;
}

}  // namespace nhep::cli
