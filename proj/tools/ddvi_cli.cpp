// Copyright 2026 The ddvi Authors
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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ddvi/ddvi.h"

namespace {

struct ScenarioDeleter {
  void operator()(ddvi_scenario* s) const { ddvi_scenario_free(s); }
};
struct PolicyDeleter {
  void operator()(ddvi_policy* p) const { ddvi_policy_free(p); }
};
using ScenarioPtr = std::unique_ptr<ddvi_scenario, ScenarioDeleter>;
using PolicyPtr = std::unique_ptr<ddvi_policy, PolicyDeleter>;

int report(ddvi_status status) {
  if (status != DDVI_OK) {
    std::fprintf(stderr, "error[%s]: %s\n", ddvi_status_name(status),
                 ddvi_last_error());
  }
  return static_cast<int>(status);
}

// Loads the config (or the defaults), applies -o and prints warnings.
ddvi_status open_scenario(const std::string& config, const std::string& out,
                          ScenarioPtr& scenario) {
  ddvi_scenario* raw = nullptr;
  const ddvi_status st = config.empty() ? ddvi_scenario_default(&raw)
                                        : ddvi_scenario_load(config.c_str(), &raw);
  if (st != DDVI_OK) return st;
  scenario.reset(raw);
  if (!out.empty()) {
    const ddvi_status so = ddvi_scenario_set_output_dir(raw, out.c_str());
    if (so != DDVI_OK) return so;
  }
  for (size_t i = 0; i < ddvi_scenario_warning_count(raw); ++i) {
    std::fprintf(stderr, "warning: %s\n", ddvi_scenario_warning(raw, i));
  }
  return DDVI_OK;
}

ddvi_status make_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    std::fprintf(stderr, "error[io]: cannot create output directory %s\n",
                 dir.c_str());
    return DDVI_ERR_IO;
  }
  return DDVI_OK;
}

void print_matrix(const ddvi_policy* p, const char* name) {
  size_t rows = 0, cols = 0;
  if (ddvi_policy_shape(p, name, &rows, &cols) != DDVI_OK) return;
  std::vector<double> data(rows * cols);
  ddvi_policy_matrix(p, name, data.data(), rows, cols);
  std::printf("%s (%zux%zu)\n", name, rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < cols; ++j) std::printf(" % .6e", data[i * cols + j]);
    std::printf("\n");
  }
}

void print_branch(const char* name, const ddvi_branch_metrics& m) {
  std::printf("%-4s J = %.6e  |e(T)| = %.6e km  settle = ", name, m.cost,
              m.terminal_error);
  if (std::isnan(m.settling_time)) {
    std::printf("unsettled");
  } else {
    std::printf("%.1f s", m.settling_time);
  }
  std::printf("  max|u| = %.6e", m.max_input);
  if (!std::isnan(m.blowup_time)) std::printf("  blow-up at %.1f s", m.blowup_time);
  std::printf("\n");
}

int cmd_default_config(const std::string& out) {
  ScenarioPtr s;
  if (ddvi_status st = open_scenario("", "", s); st != DDVI_OK) return report(st);
  if (!out.empty()) return report(ddvi_scenario_save(s.get(), out.c_str()));
  size_t needed = 0;
  ddvi_scenario_to_string(s.get(), nullptr, 0, &needed);
  std::string text(needed, '\0');
  if (ddvi_status st = ddvi_scenario_to_string(s.get(), text.data(), needed,
                                                &needed);
      st != DDVI_OK) {
    return report(st);
  }
  std::fputs(text.c_str(), stdout);
  return 0;
}

int cmd_validate(const std::string& config) {
  ScenarioPtr s;
  if (ddvi_status st = open_scenario(config, "", s); st != DDVI_OK) {
    return report(st);
  }
  ddvi_assumptions a{};
  size_t needed = 0;
  ddvi_status st = ddvi_validate(s.get(), &a, nullptr, 0, &needed);
  if (st != DDVI_OK) return report(st);
  std::string text(needed, '\0');
  ddvi_validate(s.get(), &a, text.data(), needed, &needed);
  std::printf("configuration: ok\n%s\n", text.c_str());
  const bool all = a.stabilizable && a.observable && a.cost_observable &&
                   a.regulator_rank;
  if (!all) {
    std::fprintf(stderr,
                 "error[numerical]: plant assumptions violated (see report)\n");
    return DDVI_ERR_NUMERICAL;
  }
  return 0;
}

int cmd_learn(const std::string& config, const std::string& out) {
  ScenarioPtr s;
  if (ddvi_status st = open_scenario(config, out, s); st != DDVI_OK) {
    return report(st);
  }
  ddvi_policy* raw = nullptr;
  if (ddvi_status st = ddvi_learn(s.get(), &raw); st != DDVI_OK) {
    return report(st);
  }
  PolicyPtr p(raw);
  const std::string dir = ddvi_scenario_output_dir(s.get());
  if (ddvi_status st = make_dir(dir); st != DDVI_OK) return st;
  const std::string gains = dir + "/gains.txt";
  const std::string trace = dir + "/trace.csv";
  if (ddvi_status st = ddvi_policy_save(p.get(), gains.c_str()); st != DDVI_OK) {
    return report(st);
  }
  if (ddvi_status st = ddvi_policy_save_trace(p.get(), trace.c_str());
      st != DDVI_OK) {
    return report(st);
  }
  ddvi_learn_stats stats{};
  ddvi_policy_stats(p.get(), &stats);
  std::printf("converged after %ld iterations (%ld resets), min data rank %ld\n",
              stats.iterations, stats.resets, stats.min_rank);
  print_matrix(p.get(), "K");
  print_matrix(p.get(), "L");
  std::printf("wrote %s\nwrote %s\n", gains.c_str(), trace.c_str());
  return 0;
}

int cmd_oracle(const std::string& config, const std::string& out) {
  ScenarioPtr s;
  if (ddvi_status st = open_scenario(config, out, s); st != DDVI_OK) {
    return report(st);
  }
  ddvi_policy* raw = nullptr;
  if (ddvi_status st = ddvi_oracle(s.get(), &raw); st != DDVI_OK) {
    return report(st);
  }
  PolicyPtr p(raw);
  const std::string dir = ddvi_scenario_output_dir(s.get());
  if (ddvi_status st = make_dir(dir); st != DDVI_OK) return st;
  const std::string gains = dir + "/oracle_gains.txt";
  if (ddvi_status st = ddvi_policy_save(p.get(), gains.c_str()); st != DDVI_OK) {
    return report(st);
  }
  print_matrix(p.get(), "K");
  print_matrix(p.get(), "L");
  std::printf("wrote %s\n", gains.c_str());
  return 0;
}

int cmd_compare(const std::string& config, const std::string& gains,
                const std::string& out) {
  ScenarioPtr s;
  if (ddvi_status st = open_scenario(config, out, s); st != DDVI_OK) {
    return report(st);
  }
  PolicyPtr p;
  if (!gains.empty()) {
    ddvi_policy* raw = nullptr;
    if (ddvi_status st = ddvi_policy_load(gains.c_str(), &raw); st != DDVI_OK) {
      return report(st);
    }
    p.reset(raw);
  }
  ddvi_comparison cmp{};
  if (ddvi_status st = ddvi_compare(s.get(), p.get(), nullptr, &cmp);
      st != DDVI_OK) {
    return report(st);
  }
  print_branch("vi", cmp.vi);
  print_branch("lqr", cmp.lqr);
  std::printf("wrote trajectory_vi.csv, trajectory_lqr.csv, summary.csv in %s\n",
              ddvi_scenario_output_dir(s.get()));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data-driven value iteration for optimal output regulation"};
  app.set_version_flag("--version", std::string(ddvi_version()));
  app.require_subcommand(1);

  std::string config, out, gains;

  auto* dflt = app.add_subcommand("default-config", "Print the default scenario");
  dflt->add_option("-o,--output", out, "Write to this file instead of stdout");

  auto* validate = app.add_subcommand(
      "validate", "Check a scenario and the plant assumptions");
  validate->add_option("-c,--config", config, "Scenario YAML file");

  auto* learn = app.add_subcommand(
      "learn", "Collect data and learn gains; writes gains.txt and trace.csv");
  learn->add_option("-c,--config", config, "Scenario YAML file");
  learn->add_option("-o,--output-dir", out, "Output directory");

  auto* oracle = app.add_subcommand(
      "oracle", "Model-based gains; writes oracle_gains.txt");
  oracle->add_option("-c,--config", config, "Scenario YAML file");
  oracle->add_option("-o,--output-dir", out, "Output directory");

  auto* compare = app.add_subcommand(
      "compare", "Simulate learned and model-based gains side by side");
  compare->add_option("-c,--config", config, "Scenario YAML file");
  compare->add_option("-g,--gains", gains,
                      "Gains file (learned in-process when omitted)");
  compare->add_option("-o,--output-dir", out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return DDVI_ERR_USAGE;
  }

  if (*dflt) return cmd_default_config(out);
  if (*validate) return cmd_validate(config);
  if (*learn) return cmd_learn(config, out);
  if (*oracle) return cmd_oracle(config, out);
  if (*compare) return cmd_compare(config, gains, out);
  return DDVI_ERR_USAGE;
}
