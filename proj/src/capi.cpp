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

#include "ddvi/ddvi.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <optional>
#include <string>

#include "ddvi/errors.hpp"
#include "ddvi/io.hpp"
#include "ddvi/runner.hpp"
#include "ddvi/scenario.hpp"

struct ddvi_scenario {
  ddvi::ScenarioConfig config;
  std::vector<std::string> warnings;
  std::string output_dir;
};

struct ddvi_policy {
  ddvi::GainSet gains;
  std::optional<ddvi::ViTrace> trace;
  ddvi_learn_stats stats{};
};

namespace {

thread_local std::string g_last_error;

ddvi_status fail(ddvi_status status, const std::string& msg) {
  g_last_error = msg;
  return status;
}

template <typename Fn>
ddvi_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const ddvi::Error& e) {
    return fail(static_cast<ddvi_status>(e.code()), e.what());
  } catch (const std::invalid_argument& e) {
    return fail(DDVI_ERR_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return fail(DDVI_ERR_NUMERICAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DDVI_ERR_NUMERICAL, e.what());
  } catch (...) {
    return fail(DDVI_ERR_NUMERICAL, "unknown error");
  }
}

ddvi_status copy_text(const std::string& text, char* buf, size_t capacity,
                      size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (buf && capacity > 0) {
    if (capacity < text.size() + 1) {
      buf[0] = '\0';
      return fail(DDVI_ERR_USAGE, "buffer too small");
    }
    std::memcpy(buf, text.data(), text.size() + 1);
  }
  return DDVI_OK;
}

ddvi_scenario* wrap(ddvi::ScenarioConfig config) {
  auto* s = new ddvi_scenario{std::move(config), {}, {}};
  s->warnings = s->config.warnings();
  s->output_dir = s->config.resolved_output_dir();
  return s;
}

ddvi_branch_metrics to_c(const ddvi::BranchResult& b) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  ddvi_branch_metrics m;
  m.cost = b.metrics.cost;
  m.terminal_error = b.metrics.terminal_error;
  m.settling_time = b.metrics.settling_time.value_or(nan);
  m.max_input = b.metrics.max_input;
  m.blowup_time = b.trajectory.blowup_time.value_or(nan);
  return m;
}

#define DDVI_REQUIRE(cond, msg) \
  if (!(cond)) return fail(DDVI_ERR_USAGE, msg)

}  // namespace

extern "C" {

const char* ddvi_last_error(void) { return g_last_error.c_str(); }

const char* ddvi_version(void) { return "0.1.0"; }

const char* ddvi_status_name(ddvi_status status) {
  switch (status) {
    case DDVI_OK:
      return "ok";
    case DDVI_ERR_USAGE:
      return "usage";
    case DDVI_ERR_CONFIG:
      return "config";
    case DDVI_ERR_RANK:
      return "rank";
    case DDVI_ERR_NOT_CONVERGED:
      return "not_converged";
    case DDVI_ERR_NUMERICAL:
      return "numerical";
    case DDVI_ERR_IO:
      return "io";
  }
  return "unknown";
}

ddvi_status ddvi_scenario_default(ddvi_scenario** out) {
  DDVI_REQUIRE(out, "null output handle");
  return guarded([&] {
    *out = wrap(ddvi::ScenarioConfig{});
    return DDVI_OK;
  });
}

ddvi_status ddvi_scenario_load(const char* path, ddvi_scenario** out) {
  DDVI_REQUIRE(path && out, "null argument");
  return guarded([&] {
    *out = wrap(ddvi::parse_config_file(path));
    return DDVI_OK;
  });
}

ddvi_status ddvi_scenario_parse(const char* text, ddvi_scenario** out) {
  DDVI_REQUIRE(text && out, "null argument");
  return guarded([&] {
    *out = wrap(ddvi::parse_config_string(text));
    return DDVI_OK;
  });
}

ddvi_status ddvi_scenario_save(const ddvi_scenario* s, const char* path) {
  DDVI_REQUIRE(s && path, "null argument");
  return guarded([&] {
    ddvi::save_config(s->config, path);
    return DDVI_OK;
  });
}

ddvi_status ddvi_scenario_to_string(const ddvi_scenario* s, char* buf,
                                    size_t capacity, size_t* needed) {
  DDVI_REQUIRE(s, "null scenario");
  return guarded([&] {
    return copy_text(ddvi::write_config(s->config), buf, capacity, needed);
  });
}

size_t ddvi_scenario_warning_count(const ddvi_scenario* s) {
  return s ? s->warnings.size() : 0;
}

const char* ddvi_scenario_warning(const ddvi_scenario* s, size_t i) {
  if (!s || i >= s->warnings.size()) return nullptr;
  return s->warnings[i].c_str();
}

ddvi_status ddvi_scenario_set_output_dir(ddvi_scenario* s, const char* dir) {
  DDVI_REQUIRE(s && dir && *dir, "null or empty argument");
  s->config.output_dir = dir;
  s->output_dir = dir;
  return DDVI_OK;
}

const char* ddvi_scenario_output_dir(const ddvi_scenario* s) {
  return s ? s->output_dir.c_str() : nullptr;
}

double ddvi_scenario_period(const ddvi_scenario* s) {
  return s ? s->config.period() : std::numeric_limits<double>::quiet_NaN();
}

void ddvi_scenario_free(ddvi_scenario* s) { delete s; }

ddvi_status ddvi_validate(const ddvi_scenario* s, ddvi_assumptions* out,
                          char* summary, size_t capacity, size_t* needed) {
  DDVI_REQUIRE(s, "null scenario");
  return guarded([&] {
    s->config.validate();
    const ddvi::PlantModel plant = s->config.plant();
    const ddvi::AssumptionReport r =
        ddvi::validate_assumptions(plant, s->config.Q);
    if (out) {
      out->stabilizable = r.stabilizable;
      out->observable = r.observable;
      out->cost_observable = r.cost_observable;
      out->regulator_rank = r.regulator_rank;
    }
    return copy_text(r.summary(), summary, capacity, needed);
  });
}

ddvi_status ddvi_learn(const ddvi_scenario* s, ddvi_policy** out) {
  DDVI_REQUIRE(s && out, "null argument");
  return guarded([&] {
    const ddvi::LearnResult r = ddvi::learn(s->config);
    auto* p = new ddvi_policy;
    p->gains = ddvi::gains_from(r.policy);
    p->trace = r.policy.trace;
    p->stats.iterations = r.policy.trace.iterations;
    p->stats.resets = r.policy.trace.resets;
    p->stats.theta_assemblies = r.policy.trace.theta_assemblies;
    p->stats.min_rank =
        r.policy.ranks.empty()
            ? 0
            : *std::min_element(r.policy.ranks.begin(), r.policy.ranks.end());
    p->stats.theta_condition = r.policy.theta_condition;
    p->stats.data_residual = r.policy.data_residual;
    *out = p;
    return DDVI_OK;
  });
}

ddvi_status ddvi_oracle(const ddvi_scenario* s, ddvi_policy** out) {
  DDVI_REQUIRE(s && out, "null argument");
  return guarded([&] {
    s->config.validate();
    const ddvi::OracleGains g =
        ddvi::compute_oracle(s->config.plant(), s->config);
    auto* p = new ddvi_policy;
    p->gains = ddvi::gains_from(g);
    *out = p;
    return DDVI_OK;
  });
}

ddvi_status ddvi_policy_load(const char* gains_path, ddvi_policy** out) {
  DDVI_REQUIRE(gains_path && out, "null argument");
  return guarded([&] {
    auto* p = new ddvi_policy;
    try {
      p->gains = ddvi::read_gains(gains_path);
      p->gains.at("K");
      p->gains.at("L");
    } catch (...) {
      delete p;
      throw;
    }
    *out = p;
    return DDVI_OK;
  });
}

ddvi_status ddvi_policy_save(const ddvi_policy* p, const char* gains_path) {
  DDVI_REQUIRE(p && gains_path, "null argument");
  return guarded([&] {
    ddvi::write_gains(gains_path, p->gains);
    return DDVI_OK;
  });
}

ddvi_status ddvi_policy_save_trace(const ddvi_policy* p, const char* csv_path) {
  DDVI_REQUIRE(p && csv_path, "null argument");
  DDVI_REQUIRE(p->trace.has_value(), "policy has no iteration trace");
  return guarded([&] {
    ddvi::write_trace_csv(csv_path, *p->trace);
    return DDVI_OK;
  });
}

ddvi_status ddvi_policy_shape(const ddvi_policy* p, const char* name,
                              size_t* rows, size_t* cols) {
  DDVI_REQUIRE(p && name, "null argument");
  const ddvi::Matrix* m = p->gains.find(name);
  if (!m) return fail(DDVI_ERR_USAGE, std::string("no block named ") + name);
  if (rows) *rows = static_cast<size_t>(m->rows());
  if (cols) *cols = static_cast<size_t>(m->cols());
  return DDVI_OK;
}

ddvi_status ddvi_policy_matrix(const ddvi_policy* p, const char* name,
                               double* data, size_t rows, size_t cols) {
  DDVI_REQUIRE(p && name && data, "null argument");
  const ddvi::Matrix* m = p->gains.find(name);
  if (!m) return fail(DDVI_ERR_USAGE, std::string("no block named ") + name);
  if (static_cast<size_t>(m->rows()) != rows ||
      static_cast<size_t>(m->cols()) != cols) {
    return fail(DDVI_ERR_USAGE, std::string("shape mismatch for ") + name);
  }
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < cols; ++j) {
      data[i * cols + j] = (*m)(static_cast<Eigen::Index>(i),
                                static_cast<Eigen::Index>(j));
    }
  }
  return DDVI_OK;
}

ddvi_status ddvi_policy_stats(const ddvi_policy* p, ddvi_learn_stats* out) {
  DDVI_REQUIRE(p && out, "null argument");
  DDVI_REQUIRE(p->trace.has_value(), "policy was not learned in-process");
  *out = p->stats;
  return DDVI_OK;
}

void ddvi_policy_free(ddvi_policy* p) { delete p; }

ddvi_status ddvi_compare(const ddvi_scenario* s, const ddvi_policy* p,
                         const char* out_dir, ddvi_comparison* out) {
  DDVI_REQUIRE(s, "null scenario");
  return guarded([&] {
    const ddvi::ScenarioConfig& c = s->config;
    ddvi::Matrix k, l;
    if (p) {
      k = p->gains.at("K");
      l = p->gains.at("L");
    } else {
      const ddvi::LearnResult r = ddvi::learn(c);
      k = r.policy.K;
      l = r.policy.L;
    }
    if (k.rows() != 3 || k.cols() != 6 || l.rows() != 3 || l.cols() != 8) {
      throw ddvi::ConfigError("gains: expected K 3x6 and L 3x8");
    }
    const ddvi::Comparison cmp = ddvi::compare(c, k, l);
    const std::string dir = out_dir ? out_dir : s->output_dir;
    ddvi::ensure_directory(dir);
    ddvi::write_trajectory_csv(dir + "/trajectory_vi.csv", cmp.vi.trajectory,
                               c.trajectory_stride);
    ddvi::write_trajectory_csv(dir + "/trajectory_lqr.csv",
                               cmp.lqr.trajectory, c.trajectory_stride);
    ddvi::write_summary(dir + "/summary.csv", cmp);
    if (out) {
      out->vi = to_c(cmp.vi);
      out->lqr = to_c(cmp.lqr);
    }
    return DDVI_OK;
  });
}

}  // extern "C"
