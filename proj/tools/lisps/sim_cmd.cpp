// Copyright 2026 The LISPS Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <filesystem>
#include <fstream>
#include <memory>

#include "commands.hpp"
#include "common.hpp"
#include "lisps/sim/orchestrator.hpp"
#include "lisps/sim/replay.hpp"

namespace lisps::tools {

namespace {

struct SimFlags {
  ConfigFlags config;
  std::uint64_t seed = 0;
  std::string out = "sim-out";
  bool in_process = false;
};

int run_in_process(const SimFlags& f, const Config& cfg) {
  const sim::Scenario scenario = sim::generate_scenario(sim::ScenarioParams::from(cfg), f.seed);
  const sim::ReplayResult r = sim::replay_scenario(scenario, cfg);
  std::filesystem::create_directories(f.out);
  std::ofstream alerts(std::filesystem::path(f.out) / "alerts.log", std::ios::trunc);
  for (const auto& a : r.alerts) alerts << fog::format_alert(a) << "\n";
  std::string summary = fmt::format("frames {}\nalerts {}\n", r.frames, r.alerts.size());
  for (std::size_t i = 0; i < scenario.actors().size(); ++i) {
    const auto& a = scenario.actors()[i];
    summary += fmt::format("actor {} {} peak={:.3f} alerted={}\n", a.id, sim::to_string(a.kind),
                           r.actor_peak[i], r.actor_alerted[i] ? 1 : 0);
  }
  summary += fmt::format("confusion.tp {}\nconfusion.fp {}\nconfusion.fn {}\nconfusion.tn {}\n",
                         r.confusion.tp, r.confusion.fp, r.confusion.fn, r.confusion.tn);
  std::ofstream(std::filesystem::path(f.out) / "metrics.txt", std::ios::trunc) << summary;
  fmt::print("{}", summary);
  return 0;
}

int run_sim(const SimFlags& f) {
  init_logging("sim");
  const Config cfg = load_config(f.config);
  if (f.in_process) return run_in_process(f, cfg);

  sim::RunOptions opts;
  opts.cli = std::filesystem::read_symlink("/proc/self/exe");
  opts.config = cfg;
  opts.out_dir = f.out;
  opts.seed = f.seed;
  ShutdownSignal signal;
  const sim::RunResult r = sim::run_scenario(opts);
  if (!r.ok) {
    fmt::print(stderr, "sim failed: {}\n", r.error);
    return 1;
  }
  fmt::print("{}canonical_digest {}\n", r.metrics.format(), r.canonical_digest);
  return 0;
}

}  // namespace

Command add_sim_command(CLI::App& app) {
  auto flags = std::make_shared<SimFlags>();
  CLI::App* sub = app.add_subcommand("sim", "Run a seeded scenario across local processes");
  add_config_flags(*sub, flags->config);
  sub->add_option("--seed", flags->seed, "Scenario seed");
  sub->add_option("--out", flags->out, "Output directory");
  sub->add_flag("--in-process", flags->in_process,
                "Replay the scenario in this process without services");
  return [flags] { return run_sim(*flags); };
}

}  // namespace lisps::tools
