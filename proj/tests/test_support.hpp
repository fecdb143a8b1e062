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

#ifndef DDVI_TESTS_TEST_SUPPORT_HPP_
#define DDVI_TESTS_TEST_SUPPORT_HPP_

#include <algorithm>
#include <cstdlib>
#include <string>

#include "ddvi/linops.hpp"
#include "ddvi/runner.hpp"
#include "ddvi/scenario.hpp"

namespace ddvi::testing {

inline std::string source_path(const std::string& rel) {
  return std::string(DDVI_SOURCE_DIR) + "/" + rel;
}

inline double rel_err(const Matrix& got, const Matrix& want) {
  return (got - want).norm() / want.norm();
}

/// Normalised CW plant with a direct acceleration input.
inline ScenarioConfig benchmark_config() {
  return parse_config_file(source_path("configs/normalized_cw.yaml"));
}

/// Learning on the benchmark takes a few seconds; share one run.
inline const LearnResult& benchmark_learned() {
  static const LearnResult result = learn(benchmark_config());
  return result;
}

inline const OracleGains& benchmark_oracle() {
  static const OracleGains oracle = [] {
    const ScenarioConfig c = benchmark_config();
    return compute_oracle(c.plant(), c);
  }();
  return oracle;
}

inline Matrix random_spd(Eigen::Index n, unsigned seed, double shift = 0.5) {
  std::srand(seed);
  const Matrix a = Matrix::Random(n, n);
  return a * a.transpose() + shift * Matrix::Identity(n, n);
}

// Random behaviour gain with entries in [-scale, scale]. Draws are rejected
// when they add more than one e-fold of growth over the learning interval;
// the scale halves after every 100 rejections.
inline Matrix bounded_random_gain(const ScenarioConfig& c, double scale,
                                  unsigned seed) {
  const PlantModel p = c.plant();
  const double limit =
      std::max(spectral_abscissa(p.A), 0.0) + 1.0 / c.learn_end();
  std::srand(seed);
  for (int attempt = 0; attempt < 5000; ++attempt) {
    if (attempt > 0 && attempt % 100 == 0) scale *= 0.5;
    const Matrix k = scale * Matrix::Random(p.m(), p.n());
    if (spectral_abscissa(p.A - p.B * k) <= limit) return k;
  }
  return Matrix::Zero(p.m(), p.n());
}

}  // namespace ddvi::testing

#endif  // DDVI_TESTS_TEST_SUPPORT_HPP_
