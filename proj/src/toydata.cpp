#include "gg/toydata.hpp"

#include <cmath>

#include "gg/rot6d.hpp"

namespace gg {
namespace {

constexpr double kTwoPi = 6.283185307179586;

void add_click(AudioSignal& sig, double at_seconds, double amplitude) {
  const int start = static_cast<int>(at_seconds * sig.sample_rate);
  const int len = sig.sample_rate / 125;  // 8 ms
  for (int i = 0; i < len; ++i) {
    const size_t idx = static_cast<size_t>(start) + i;
    if (idx >= sig.samples.size()) break;
    const double t = static_cast<double>(i) / sig.sample_rate;
    sig.samples[idx] +=
        amplitude * std::exp(-t * 600.0) * std::sin(kTwoPi * 1200.0 * t);
  }
}

}  // namespace

AudioSignal click_train(double seconds, double beat_hz, int sample_rate,
                        double amplitude) {
  require(seconds > 0 && beat_hz > 0, "click_train: bad parameters");
  AudioSignal sig;
  sig.sample_rate = sample_rate;
  sig.samples.assign(static_cast<size_t>(seconds * sample_rate), 0.0);
  for (double t = 0.25 / beat_hz; t < seconds - 0.02; t += 1.0 / beat_hz)
    add_click(sig, t, amplitude);
  return sig;
}

MotionSequence noise_motion(int frames, double fps, uint64_t seed) {
  require(frames >= 1, "noise_motion: need at least one frame");
  Rng rng(seed);
  Tensor data = Tensor::zeros({frames, kMotionDims});
  double* v = data.mutable_data();
  for (int t = 0; t < frames; ++t) {
    for (int d = 0; d < kRotDims; ++d)
      v[static_cast<size_t>(t) * kMotionDims + d] = normal(rng);
    for (int d = kRotDims; d < kMotionDims; ++d)
      v[static_cast<size_t>(t) * kMotionDims + d] = 0.1 * normal(rng);
  }
  return make_motion(std::move(data), fps);
}

ToyPair make_toy_pair(const ToyPairSpec& spec) {
  require(spec.seconds > 0 && spec.fps > 0 && spec.beat_hz > 0,
          "make_toy_pair: bad parameters");
  ToyPair pair;
  pair.audio = click_train(spec.seconds, spec.beat_hz, spec.sample_rate);

  const int frames = static_cast<int>(spec.seconds * spec.fps);
  require(frames >= 8, "make_toy_pair: sequence too short");
  Rng rng(spec.seed);

  // Oscillating joints: neck, shoulders, elbows, wrists. Per-joint axis and
  // a small seeded amplitude variation; cosine phase puts velocity minima on
  // the clicks.
  struct Osc {
    int joint;
    Vec3 axis;
    double amp;
  };
  std::vector<Osc> oscs = {
      {12, {0, 0, 1}, 0.3}, {16, {0, 0, 1}, 1.0}, {17, {0, 0, 1}, 1.0},
      {18, {1, 0, 0}, 0.8}, {19, {1, 0, 0}, 0.8}, {20, {0, 1, 0}, 0.5},
      {21, {0, 1, 0}, 0.5},
  };
  for (auto& o : oscs) o.amp *= spec.gesture_amplitude * uniform(rng, 0.8, 1.2);

  Tensor data = Tensor::zeros({frames, kMotionDims});
  double* v = data.mutable_data();
  const double r6_identity[6] = {1, 0, 0, 0, 1, 0};
  for (int t = 0; t < frames; ++t) {
    double* row = v + static_cast<size_t>(t) * kMotionDims;
    for (int j = 0; j < kNumJoints; ++j)
      for (int k = 0; k < 6; ++k) row[j * 6 + k] = r6_identity[k];
    const double secs = t / spec.fps;
    for (const auto& o : oscs) {
      const double angle =
          o.amp * std::cos(kTwoPi * spec.beat_hz * secs) * 0.5;
      const Mat3 rot = axis_angle_to_matrix(o.axis, angle);
      matrix_to_rot6d(rot, row + o.joint * 6);
    }
    row[kRotDims + 0] =
        spec.translation_amplitude * std::sin(kTwoPi * 0.25 * secs);
    row[kRotDims + 1] = 0.95;
    row[kRotDims + 2] =
        spec.translation_amplitude * std::cos(kTwoPi * 0.2 * secs);
  }
  pair.motion = make_motion(std::move(data), spec.fps);
  return pair;
}

}  // namespace gg
