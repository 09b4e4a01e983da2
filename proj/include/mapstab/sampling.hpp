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

#ifndef MAPSTAB_SAMPLING_HPP_
#define MAPSTAB_SAMPLING_HPP_

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapstab/matching.hpp"
#include "mapstab/random.hpp"

namespace mapstab {

// All frames of one scene, ordered by timestamp.
struct SequenceView {
  std::string scene_id;
  std::vector<FrameRecord> frames;

  std::size_t length() const { return frames.size(); }

  void validate() const {
    for (std::size_t i = 0; i < frames.size(); ++i) {
      if (frames[i].scene_id != scene_id) {
        throw std::invalid_argument("frame " + std::to_string(frames[i].frame_index) +
                                    " belongs to scene '" + frames[i].scene_id +
                                    "', expected '" + scene_id + "'");
      }
      if (i > 0 && !(frames[i].timestamp > frames[i - 1].timestamp)) {
        throw std::invalid_argument("scene '" + scene_id +
                                    "': timestamps not strictly increasing at frame " +
                                    std::to_string(frames[i].frame_index));
      }
      if (i > 0 && !(frames[i].frame_index > frames[i - 1].frame_index)) {
        throw std::invalid_argument("scene '" + scene_id +
                                    "': frame_index not strictly increasing at frame " +
                                    std::to_string(frames[i].frame_index));
      }
    }
  }
};

// Evaluation pair (anchor, anchor + offset); anchor is a 0-based frame
// position within the scene.
struct PairSample {
  std::size_t anchor = 0;
  std::size_t offset = 1;

  std::size_t target() const { return anchor + offset; }
  friend bool operator==(const PairSample&, const PairSample&) = default;
};

class SequenceTooShort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Draws one forward offset in [1, M] for each of the first L - M anchors.
// The stream is keyed by scene id, so scenes are independent of each other
// and of processing order.
inline std::vector<PairSample> sample_pairs(std::size_t length, const std::string& scene_id,
                                            std::size_t max_interval, std::uint64_t seed) {
  if (max_interval < 1) throw std::invalid_argument("M must be >= 1");
  if (length <= max_interval) {
    throw SequenceTooShort("sequence too short: scene '" + scene_id + "' has " +
                           std::to_string(length) + " frames, M = " +
                           std::to_string(max_interval));
  }
  RandomEngine rng = make_stream(seed, "sample_pairs/" + scene_id);
  std::vector<PairSample> out;
  out.reserve(length - max_interval);
  for (std::size_t t = 0; t + max_interval < length; ++t) {
    out.push_back({t, static_cast<std::size_t>(uniform_int(rng, 1, max_interval))});
  }
  return out;
}

inline std::vector<PairSample> sample_pairs(const SequenceView& seq, std::size_t max_interval,
                                            std::uint64_t seed) {
  return sample_pairs(seq.length(), seq.scene_id, max_interval, seed);
}

}  // namespace mapstab

#endif  // MAPSTAB_SAMPLING_HPP_
