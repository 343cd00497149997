#pragma once

#include <string>
#include <vector>

#include "gg/common.hpp"

namespace gg {

struct AudioSignal {
  std::vector<double> samples;  // in [-1, 1]
  int sample_rate = 0;

  double duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// 16-bit PCM mono WAV only; anything else is rejected with FormatError.
AudioSignal load_wav(const std::string& path);
void save_wav(const std::string& path, const AudioSignal& signal);

}  // namespace gg
