#include "gg/mel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace gg {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLogFloor = 1e-10;

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Iterative radix-2 Cooley-Tukey over a real frame zero-padded to nfft.
void fft_power(const std::vector<double>& frame, int nfft,
               std::vector<double>& power) {
  std::vector<std::complex<double>> buf(nfft);
  int log2n = 0;
  while ((1 << log2n) < nfft) ++log2n;
  for (int i = 0; i < nfft; ++i) {
    int rev = 0;
    for (int b = 0; b < log2n; ++b) rev |= ((i >> b) & 1) << (log2n - 1 - b);
    buf[rev] = std::complex<double>(
        i < static_cast<int>(frame.size()) ? frame[i] : 0.0, 0.0);
  }
  for (int stage = 1; stage <= log2n; ++stage) {
    const int m = 1 << stage;
    const std::complex<double> wm =
        std::polar(1.0, -2.0 * kPi / static_cast<double>(m));
    for (int k = 0; k < nfft; k += m) {
      std::complex<double> w = 1.0;
      for (int j = 0; j < m / 2; ++j) {
        const std::complex<double> t = w * buf[k + j + m / 2];
        const std::complex<double> u = buf[k + j];
        buf[k + j] = u + t;
        buf[k + j + m / 2] = u - t;
        w *= wm;
      }
    }
  }
  power.resize(nfft / 2 + 1);
  for (int i = 0; i <= nfft / 2; ++i) power[i] = std::norm(buf[i]);
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

// HTK-style triangular filters spanning 0 Hz..Nyquist, peak 1.
std::vector<std::vector<double>> mel_filterbank(int n_mels, int nfft,
                                                int sample_rate) {
  const int n_bins = nfft / 2 + 1;
  const double mel_max = hz_to_mel(sample_rate / 2.0);
  std::vector<double> centers(n_mels + 2);
  for (int i = 0; i < n_mels + 2; ++i)
    centers[i] = mel_to_hz(mel_max * i / (n_mels + 1));

  std::vector<std::vector<double>> bank(n_mels,
                                        std::vector<double>(n_bins, 0.0));
  for (int m = 0; m < n_mels; ++m) {
    const double lo = centers[m], mid = centers[m + 1], hi = centers[m + 2];
    for (int b = 0; b < n_bins; ++b) {
      const double f = static_cast<double>(b) * sample_rate / nfft;
      if (f > lo && f < mid)
        bank[m][b] = (f - lo) / (mid - lo);
      else if (f >= mid && f < hi)
        bank[m][b] = (hi - f) / (hi - mid);
    }
  }
  return bank;
}

struct MinMax {
  double lo, hi;
};

MinMax clip_minmax(const std::vector<double>& v, size_t begin, size_t stride,
                   size_t count) {
  MinMax mm{v[begin], v[begin]};
  for (size_t i = 0; i < count; ++i) {
    const double x = v[begin + i * stride];
    mm.lo = std::min(mm.lo, x);
    mm.hi = std::max(mm.hi, x);
  }
  return mm;
}

}  // namespace

MelEnergy mel_energy(const AudioSignal& signal, int n_mels, double win_ms,
                     double hop_ms) {
  require(signal.sample_rate > 0, "mel_energy: sample rate must be positive");
  require(n_mels >= 1, "mel_energy: n_mels must be >= 1");
  const int win = static_cast<int>(std::lround(signal.sample_rate * win_ms / 1000.0));
  const int hop = static_cast<int>(std::lround(signal.sample_rate * hop_ms / 1000.0));
  require(win > 0 && hop > 0, "mel_energy: window/hop too small");
  const int n = static_cast<int>(signal.samples.size());
  require(n >= win, "mel_energy: signal shorter than one window (" +
                        std::to_string(n) + " < " + std::to_string(win) + ")");

  const int frames = (n - win) / hop + 1;
  const int nfft = next_pow2(win);
  const auto bank = mel_filterbank(n_mels, nfft, signal.sample_rate);

  std::vector<double> hann(win);
  for (int i = 0; i < win; ++i)
    hann[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * i / win);

  MelEnergy out;
  out.frames = frames;
  out.bands = n_mels;
  out.frame_hop = hop_ms / 1000.0;
  out.values.resize(static_cast<size_t>(frames) * n_mels);

  std::vector<double> frame(win), power;
  for (int t = 0; t < frames; ++t) {
    for (int i = 0; i < win; ++i)
      frame[i] = signal.samples[static_cast<size_t>(t) * hop + i] * hann[i];
    fft_power(frame, nfft, power);
    for (int m = 0; m < n_mels; ++m) {
      double e = 0.0;
      const auto& filt = bank[m];
      for (size_t b = 0; b < filt.size(); ++b) e += filt[b] * power[b];
      // log-mel, then exponential transform and magnitude
      const double log_mel = std::log(e + kLogFloor);
      out.at(t, m) = std::abs(std::exp(log_mel));
    }
  }
  return out;
}

AugmentParams sample_augment_params(Rng& rng) {
  AugmentParams p;
  p.amplitude = uniform(rng, 0.0, 4.0);
  p.phase = uniform(rng, 0.0, 2.0 * kPi);
  p.period = uniform(rng, 150.0, 1200.0);
  return p;
}

MelEnergy augment_mel_with(const MelEnergy& mel, const AugmentParams& params,
                           bool per_band) {
  require(params.period > 0.0, "augment_mel: period must be positive");
  MelEnergy out = mel;
  const int T = mel.frames, D = mel.bands;

  std::vector<double> noise(T);
  for (int t = 0; t < T; ++t)
    noise[t] = params.amplitude *
               std::sin(2.0 * kPi * t / params.period + params.phase);

  const int groups = per_band ? D : 1;
  for (int d0 = 0; d0 < groups; ++d0) {
    const size_t begin = per_band ? d0 : 0;
    const size_t stride = per_band ? D : 1;
    const size_t count = per_band ? T : static_cast<size_t>(T) * D;
    const MinMax mm = clip_minmax(mel.values, begin, stride, count);
    const double range = mm.hi - mm.lo;
    const double thresh = mm.lo + params.threshold_frac * range;

    for (size_t i = 0; i < count; ++i) {
      const size_t idx = begin + i * stride;
      const double x = mel.values[idx];
      const int t = static_cast<int>(idx / D);
      const double noised = x + noise[t];
      const double shaped = (x > thresh) ? std::max(thresh, noised) : noised;
      out.values[idx] =
          range > 0.0 ? std::clamp((shaped - mm.lo) / range, 0.0, 1.0) : 0.0;
    }
  }
  return out;
}

MelEnergy augment_mel(const MelEnergy& mel, Rng& rng, bool per_band) {
  return augment_mel_with(mel, sample_augment_params(rng), per_band);
}

MelEnergy normalize01(const MelEnergy& mel, bool per_band) {
  MelEnergy out = mel;
  const int T = mel.frames, D = mel.bands;
  const int groups = per_band ? D : 1;
  for (int d0 = 0; d0 < groups; ++d0) {
    const size_t begin = per_band ? d0 : 0;
    const size_t stride = per_band ? D : 1;
    const size_t count = per_band ? T : static_cast<size_t>(T) * D;
    const MinMax mm = clip_minmax(mel.values, begin, stride, count);
    const double range = mm.hi - mm.lo;
    for (size_t i = 0; i < count; ++i) {
      const size_t idx = begin + i * stride;
      out.values[idx] =
          range > 0.0
              ? std::clamp((mel.values[idx] - mm.lo) / range, 0.0, 1.0)
              : 0.0;
    }
  }
  return out;
}

}  // namespace gg
