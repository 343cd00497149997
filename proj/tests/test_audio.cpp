#include <doctest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>

#include "gg/io_util.hpp"
#include "gg/mel.hpp"

using namespace gg;

namespace {
const char* kTmpWav = "/tmp/gg_test_audio.wav";
}

TEST_SUITE_BEGIN("audio");

TEST_CASE("wav: one second of silence round-trips as 16000 zeros") {
  AudioSignal sig;
  sig.sample_rate = 16000;
  sig.samples.assign(16000, 0.0);
  save_wav(kTmpWav, sig);
  AudioSignal loaded = load_wav(kTmpWav);
  REQUIRE(loaded.samples.size() == 16000);
  CHECK(loaded.sample_rate == 16000);
  for (double s : loaded.samples) CHECK(s == 0.0);
  std::filesystem::remove(kTmpWav);
}

TEST_CASE("wav: full-scale square wave uses the PCM scale") {
  AudioSignal sig;
  sig.sample_rate = 8000;
  for (int i = 0; i < 64; ++i) sig.samples.push_back(i % 2 ? 1.0 : -1.0);
  save_wav(kTmpWav, sig);
  AudioSignal loaded = load_wav(kTmpWav);
  for (size_t i = 0; i < loaded.samples.size(); ++i) {
    if (i % 2)
      CHECK(loaded.samples[i] == doctest::Approx(32767.0 / 32768.0));
    else
      CHECK(loaded.samples[i] == doctest::Approx(-1.0));
  }
  std::filesystem::remove(kTmpWav);
}

TEST_CASE("wav: truncated header is a format error, no partial signal") {
  std::ofstream os(kTmpWav, std::ios::binary);
  os.write("RIFF\x10\x00\x00\x00WAV", 11);  // cut mid-tag
  os.close();
  CHECK_THROWS_AS(load_wav(kTmpWav), FormatError);
  std::filesystem::remove(kTmpWav);
}

TEST_CASE("wav: stereo and non-PCM are rejected") {
  auto write_header = [&](uint16_t format, uint16_t channels, uint16_t bits) {
    std::ofstream os(kTmpWav, std::ios::binary);
    os.write("RIFF", 4);
    le::put_u32(os, 36 + 4);
    os.write("WAVEfmt ", 8);
    le::put_u32(os, 16);
    le::put_u16(os, format);
    le::put_u16(os, channels);
    le::put_u32(os, 16000);
    le::put_u32(os, 32000);
    le::put_u16(os, 2);
    le::put_u16(os, bits);
    os.write("data", 4);
    le::put_u32(os, 4);
    le::put_u32(os, 0);
  };
  write_header(1, 2, 16);
  CHECK_THROWS_WITH_AS(load_wav(kTmpWav), doctest::Contains("multichannel"),
                       FormatError);
  write_header(3, 1, 16);
  CHECK_THROWS_WITH_AS(load_wav(kTmpWav), doctest::Contains("compressed"),
                       FormatError);
  write_header(1, 1, 8);
  CHECK_THROWS_AS(load_wav(kTmpWav), FormatError);
  std::filesystem::remove(kTmpWav);
}

TEST_CASE("mel: silence gives energy at the floor") {
  AudioSignal sig;
  sig.sample_rate = 16000;
  sig.samples.assign(8000, 0.0);
  MelEnergy mel = mel_energy(sig, 40);
  for (double v : mel.values) {
    CHECK(v >= 0.0);
    CHECK(v <= 2e-10);
  }
}

TEST_CASE("mel: frame count is floor((len-win)/hop)+1") {
  AudioSignal sig;
  sig.sample_rate = 16000;
  sig.samples.assign(16000, 0.0);
  MelEnergy mel = mel_energy(sig, 8);
  CHECK(mel.frames == (16000 - 400) / 160 + 1);  // 98
  CHECK(mel.bands == 8);
  CHECK(mel.frame_hop == doctest::Approx(0.01));
}

TEST_CASE("mel: signal shorter than one window is a contract error") {
  AudioSignal sig;
  sig.sample_rate = 16000;
  sig.samples.assign(200, 0.0);  // < 400
  CHECK_THROWS_AS(mel_energy(sig, 8), ContractError);
}

TEST_CASE("mel: 440 Hz tone concentrates in the analytically-expected band") {
  AudioSignal sig;
  sig.sample_rate = 16000;
  const int n = 16000;
  for (int i = 0; i < n; ++i)
    sig.samples.push_back(0.5 * std::sin(2.0 * M_PI * 440.0 * i / 16000.0));
  const int n_mels = 40;
  MelEnergy mel = mel_energy(sig, n_mels);

  // Independent expectation: band m peaks at mel center (m+1)/41 of the
  // 0..Nyquist mel range; pick the band whose center is nearest mel(440).
  auto hz_to_mel = [](double hz) {
    return 2595.0 * std::log10(1.0 + hz / 700.0);
  };
  const double mel_max = hz_to_mel(8000.0);
  const double target = hz_to_mel(440.0);
  int expected = 0;
  double best = 1e300;
  for (int m = 0; m < n_mels; ++m) {
    const double center = mel_max * (m + 1) / (n_mels + 1);
    if (std::abs(center - target) < best) {
      best = std::abs(center - target);
      expected = m;
    }
  }

  int first_argmax = -1;
  for (int t = 0; t < mel.frames; ++t) {
    int argmax = 0;
    for (int d = 1; d < mel.bands; ++d)
      if (mel.at(t, d) > mel.at(t, argmax)) argmax = d;
    if (t == 0) first_argmax = argmax;
    CHECK(argmax == first_argmax);  // constant over frames
  }
  CHECK(std::abs(first_argmax - expected) <= 1);
}

TEST_CASE("mel: fft power matches a direct DFT oracle") {
  Rng rng(17);
  const int win = 400, nfft = 512;
  std::vector<double> frame(win);
  for (auto& v : frame) v = normal(rng);

  // Oracle: Hann window then an O(n^2) DFT of the zero-padded frame,
  // pushed through independently-computed triangular mel weights.
  std::vector<double> dft_power(nfft / 2 + 1);
  for (int k = 0; k <= nfft / 2; ++k) {
    std::complex<double> acc = 0.0;
    for (int i = 0; i < win; ++i) {
      const double w = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / win);
      acc += w * frame[i] * std::polar(1.0, -2.0 * M_PI * k * i / nfft);
    }
    dft_power[k] = std::norm(acc);
  }

  AudioSignal sig;
  sig.sample_rate = 16000;
  sig.samples = frame;
  MelEnergy mel = mel_energy(sig, 40);

  auto hz_to_mel = [](double hz) {
    return 2595.0 * std::log10(1.0 + hz / 700.0);
  };
  auto mel_to_hz = [](double m) {
    return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0);
  };
  const double mel_max = hz_to_mel(8000.0);
  for (int m = 0; m < 40; ++m) {
    const double lo = mel_to_hz(mel_max * m / 41.0);
    const double mid = mel_to_hz(mel_max * (m + 1) / 41.0);
    const double hi = mel_to_hz(mel_max * (m + 2) / 41.0);
    double expect = 0.0;
    for (int b = 0; b <= nfft / 2; ++b) {
      const double f = b * 16000.0 / nfft;
      double wgt = 0.0;
      if (f > lo && f < mid)
        wgt = (f - lo) / (mid - lo);
      else if (f >= mid && f < hi)
        wgt = (hi - f) / (hi - mid);
      expect += wgt * dft_power[b];
    }
    CHECK(mel.at(0, m) ==
          doctest::Approx(expect + 1e-10).epsilon(1e-9));
  }
}

TEST_CASE("mel: doubling amplitude never decreases any band") {
  Rng rng(23);
  AudioSignal sig;
  sig.sample_rate = 16000;
  for (int i = 0; i < 4000; ++i) sig.samples.push_back(0.2 * normal(rng));
  AudioSignal loud = sig;
  for (auto& s : loud.samples) s *= 2.0;
  MelEnergy a = mel_energy(sig, 16), b = mel_energy(loud, 16);
  for (size_t i = 0; i < a.values.size(); ++i)
    CHECK(b.values[i] >= a.values[i]);
}

TEST_CASE("augment: zero-amplitude noise on pre-normalized input is identity") {
  MelEnergy mel;
  mel.frames = 4;
  mel.bands = 3;
  mel.frame_hop = 0.01;
  mel.values = {0.0, 0.3, 0.5, 0.2, 0.9, 1.0, 0.4, 0.6, 0.1, 0.8, 0.05, 0.7};
  AugmentParams p;  // amplitude 0
  MelEnergy out = augment_mel_with(mel, p);
  for (size_t i = 0; i < mel.values.size(); ++i)
    CHECK(out.values[i] == doctest::Approx(mel.values[i]).epsilon(1e-15));
}

TEST_CASE("augment: output always lands in [0,1]") {
  Rng rng(31);
  MelEnergy mel;
  mel.frames = 50;
  mel.bands = 8;
  mel.frame_hop = 0.01;
  for (int i = 0; i < 400; ++i) mel.values.push_back(std::abs(normal(rng)) * 5);
  for (int trial = 0; trial < 20; ++trial) {
    MelEnergy out = augment_mel(mel, rng);
    for (double v : out.values) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("augment: hand-traced threshold case") {
  // x = [0, 10], n = +3 everywhere: x_thresh = 0 + 0.1*(10-0) = 1.
  // band0 (0 <= 1): 0+3 = 3 -> 0.3 after normalization.
  // band1 (10 > 1): max(1, 13) = 13 -> clamp(1.3) = 1.0.
  MelEnergy mel;
  mel.frames = 1;
  mel.bands = 2;
  mel.frame_hop = 0.01;
  mel.values = {0.0, 10.0};
  AugmentParams p;
  p.amplitude = 3.0;
  p.phase = M_PI / 2.0;  // sin(phi) = 1 at t=0
  p.period = 300.0;
  MelEnergy out = augment_mel_with(mel, p);
  CHECK(out.values[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(out.values[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("augment/normalize01: constant input maps to zeros") {
  MelEnergy mel;
  mel.frames = 3;
  mel.bands = 2;
  mel.frame_hop = 0.01;
  mel.values.assign(6, 7.7);
  Rng rng(3);
  for (double v : augment_mel(mel, rng).values) CHECK(v == 0.0);
  for (double v : normalize01(mel).values) CHECK(v == 0.0);
}

TEST_SUITE_END();
