// Copyright 2026 The mapstab Authors.
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

#ifndef MAPSTAB_CONFIG_HPP_
#define MAPSTAB_CONFIG_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mapstab/geometry.hpp"

namespace mapstab {

// How the mean lateral deviation d is mapped to a localization score.
enum class LocMap {
  kLinear,       // clamp(1 - d / beta, 0, 1)
  kExponential,  // exp(-2 ln2 d / beta), 0.5 at d = beta / 2
};

inline std::string_view to_string(LocMap m) {
  return m == LocMap::kLinear ? "linear" : "exp";
}

inline LocMap parse_loc_map(std::string_view s) {
  if (s == "linear") return LocMap::kLinear;
  if (s == "exp") return LocMap::kExponential;
  throw std::invalid_argument("unknown loc_map '" + std::string(s) + "'");
}

struct EvalConfig {
  std::size_t max_interval = 2;  // M
  std::size_t n_samples = 100;   // N
  double tau = 0.3;
  double beta = 15.0;
  double omega = 0.7;
  PerceptionRange range{};
  double match_gate = 5.0;  // meters
  std::uint64_t seed = 0;
  LocMap loc_map = LocMap::kLinear;
  std::vector<double> ap_thresholds{0.5, 1.0, 1.5};

  void validate() const {
    if (max_interval < 1) throw std::invalid_argument("M must be >= 1");
    if (n_samples < 2) throw std::invalid_argument("N must be >= 2");
    if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must lie in [0, 1]");
    if (!(omega >= 0.0 && omega <= 1.0)) throw std::invalid_argument("omega must lie in [0, 1]");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be > 0");
    if (!(match_gate > 0.0)) throw std::invalid_argument("match_gate must be > 0");
    range.validate();
    for (std::size_t i = 0; i < ap_thresholds.size(); ++i) {
      if (!(ap_thresholds[i] > 0.0)) throw std::invalid_argument("AP thresholds must be positive");
      if (i > 0 && !(ap_thresholds[i] > ap_thresholds[i - 1])) {
        throw std::invalid_argument("AP thresholds must be ascending");
      }
    }
  }
};

}  // namespace mapstab

#endif  // MAPSTAB_CONFIG_HPP_
