#pragma once

#include "gg/audio.hpp"
#include "gg/motion.hpp"

namespace gg {

// Synthetic aligned (audio, motion) pairs: a click train at beat_hz plus
// beat-locked sinusoidal arm/neck gestures whose velocity minima land on the
// clicks, with a slow drifting root translation.
struct ToyPairSpec {
  double seconds = 4.0;
  double fps = 30.0;
  int sample_rate = 16000;
  double beat_hz = 2.0;
  uint64_t seed = 1;
  double gesture_amplitude = 0.8;      // radians
  double translation_amplitude = 0.05;  // meters
};

struct ToyPair {
  AudioSignal audio;
  MotionSequence motion;
};

ToyPair make_toy_pair(const ToyPairSpec& spec);

// Pure click-train audio (for beat-detector tests and the noise diagnostic).
AudioSignal click_train(double seconds, double beat_hz, int sample_rate = 16000,
                        double amplitude = 0.7);

// Gaussian-noise motion: N(0,1) rot6d channels, N(0,0.1) translation.
MotionSequence noise_motion(int frames, double fps, uint64_t seed);

}  // namespace gg
