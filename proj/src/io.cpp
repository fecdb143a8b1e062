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

#include "ddvi/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ddvi/errors.hpp"

namespace ddvi {

namespace {

void put(std::string& s, double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  s += buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace

const Matrix* GainSet::find(const std::string& name) const {
  for (const auto& [label, m] : blocks) {
    if (label == name) return &m;
  }
  return nullptr;
}

const Matrix& GainSet::at(const std::string& name) const {
  const Matrix* m = find(name);
  if (!m) throw ConfigError("gains: missing block '" + name + "'");
  return *m;
}

void GainSet::set(const std::string& name, Matrix m) {
  for (auto& [label, existing] : blocks) {
    if (label == name) {
      existing = std::move(m);
      return;
    }
  }
  blocks.emplace_back(name, std::move(m));
}

GainSet gains_from(const LearnedPolicy& policy) {
  GainSet g;
  g.set("K", policy.K);
  g.set("L", policy.L);
  g.set("P", policy.P.matrix());
  g.set("X", policy.X);
  g.set("U", policy.U);
  g.set("B_hat", policy.B_hat);
  g.set("D_hat", policy.D_hat);
  return g;
}

GainSet gains_from(const OracleGains& oracle) {
  GainSet g;
  g.set("K", oracle.are.K);
  g.set("L", oracle.L);
  g.set("P", oracle.are.P.matrix());
  g.set("X", oracle.regulator.X);
  g.set("U", oracle.regulator.U);
  return g;
}

std::string format_gains(const GainSet& gains) {
  std::string s;
  for (const auto& [label, m] : gains.blocks) {
    s += label + " " + std::to_string(m.rows()) + " " +
         std::to_string(m.cols()) + "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (j) s += ' ';
        put(s, m(i, j));
      }
      s += '\n';
    }
  }
  return s;
}

GainSet parse_gains(const std::string& text) {
  std::istringstream in(text);
  GainSet g;
  std::string label;
  long rows = 0, cols = 0;
  while (in >> label) {
    if (!(in >> rows >> cols) || rows < 0 || cols < 0) {
      throw ConfigError("gains: bad header for block '" + label + "'");
    }
    Matrix m(rows, cols);
    for (long i = 0; i < rows; ++i) {
      for (long j = 0; j < cols; ++j) {
        if (!(in >> m(i, j))) {
          throw ConfigError("gains: block '" + label + "' is truncated");
        }
      }
    }
    if (g.find(label)) throw ConfigError("gains: duplicate block " + label);
    g.set(label, std::move(m));
  }
  return g;
}

void write_gains(const std::string& path, const GainSet& gains) {
  write_text(path, format_gains(gains));
}

GainSet read_gains(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("gains file not found or unreadable: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_gains(ss.str());
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          long stride) {
  if (stride < 1) stride = 1;
  std::string s = kTrajectoryHeader;
  s += '\n';
  const Eigen::Index count = traj.size();
  auto row = [&](Eigen::Index i) {
    put(s, traj.t[i]);
    for (const Matrix* m : {&traj.x, &traj.u, &traj.e}) {
      for (Eigen::Index r = 0; r < m->rows(); ++r) {
        s += ',';
        put(s, (*m)(r, i));
      }
    }
    s += '\n';
  };
  for (Eigen::Index i = 0; i < count; i += stride) row(i);
  if (count > 0 && (count - 1) % stride != 0) row(count - 1);
  write_text(path, s);
}

void write_trace_csv(const std::string& path, const ViTrace& trace) {
  std::string s = "k,epsilon,metric,value_norm,r,reset\n";
  for (const ViTraceEntry& e : trace.entries) {
    s += std::to_string(e.k) + ',';
    put(s, e.epsilon);
    s += ',';
    put(s, e.metric);
    s += ',';
    put(s, e.value_norm);
    s += ',' + std::to_string(e.r) + ',' + (e.reset ? "1" : "0") + '\n';
  }
  write_text(path, s);
}

std::string format_summary(const Comparison& cmp) {
  std::string s =
      "branch,cost,terminal_error_km,settling_time_s,max_input,blowup_time_s\n";
  auto line = [&](const char* name, const BranchResult& b) {
    s += name;
    s += ',';
    put(s, b.metrics.cost);
    s += ',';
    put(s, b.metrics.terminal_error);
    s += ',';
    if (b.metrics.settling_time) {
      put(s, *b.metrics.settling_time);
    } else {
      s += "nan";
    }
    s += ',';
    put(s, b.metrics.max_input);
    s += ',';
    if (b.trajectory.blowup_time) {
      put(s, *b.trajectory.blowup_time);
    } else {
      s += "nan";
    }
    s += '\n';
  };
  line("vi", cmp.vi);
  line("lqr", cmp.lqr);
  return s;
}

void write_summary(const std::string& path, const Comparison& cmp) {
  write_text(path, format_summary(cmp));
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory: " + dir);
  }
}

}  // namespace ddvi
