#include "gg/motion.hpp"

#include <cmath>
#include <fstream>

#include "gg/io_util.hpp"

namespace gg {

namespace {
constexpr double kStdFloor = 1e-6;
}

int MotionSequence::valid_frames() const {
  int n = 0;
  for (uint8_t m : mask) n += m ? 1 : 0;
  return n;
}

MotionSequence make_motion(Tensor frames, double fps) {
  require(frames.ndim() == 2 && frames.cols() == kMotionDims,
          "make_motion: frames must be [T," + std::to_string(kMotionDims) +
              "], got " + shape_str(frames.shape()));
  require(fps > 0, "make_motion: fps must be positive");
  MotionSequence m;
  m.frames = std::move(frames);
  m.fps = fps;
  m.mask.assign(m.frames.rows(), 1);
  return m;
}

void save_motion(const std::string& path, const MotionSequence& motion) {
  const int t = motion.num_frames();
  require(t > 0, "save_motion: empty sequence");
  require(static_cast<int>(motion.mask.size()) == t,
          "save_motion: mask length mismatch");
  atomic_write_file(path, [&](std::ostream& os) {
    os.write("MOTN", 4);
    le::put_u32(os, static_cast<uint32_t>(t));
    le::put_u32(os, static_cast<uint32_t>(kMotionDims));
    le::put_f32(os, static_cast<float>(motion.fps));
    for (size_t i = 0; i < motion.frames.size(); ++i)
      le::put_f64(os, motion.frames.data()[i]);
    os.write(reinterpret_cast<const char*>(motion.mask.data()), t);
  });
}

MotionSequence load_motion(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "'");
  char magic[4];
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != "MOTN")
    throw FormatError("'" + path + "' is not a MOTN motion file");
  const int t = static_cast<int>(le::get_u32(is));
  const int d = static_cast<int>(le::get_u32(is));
  if (t <= 0 || d != kMotionDims)
    throw FormatError("'" + path + "': malformed MOTN header (T=" +
                      std::to_string(t) + " D=" + std::to_string(d) + ")");
  const float fps = le::get_f32(is);
  if (!(fps > 0)) throw FormatError("'" + path + "': invalid fps");
  std::vector<double> data(static_cast<size_t>(t) * d);
  for (auto& v : data) v = le::get_f64(is);
  MotionSequence m;
  m.frames = Tensor::from_data({t, d}, std::move(data));
  m.fps = fps;
  m.mask.resize(t);
  is.read(reinterpret_cast<char*>(m.mask.data()), t);
  if (!is) throw FormatError("'" + path + "': truncated mask section");
  for (uint8_t& b : m.mask) b = b ? 1 : 0;
  return m;
}

NormStats compute_stats(const std::vector<MotionSequence>& corpus) {
  require(!corpus.empty(), "compute_stats: empty corpus");
  std::vector<double> sum(kMotionDims, 0.0), sumsq(kMotionDims, 0.0);
  long count = 0;
  for (const auto& seq : corpus) {
    const int t = seq.num_frames();
    for (int i = 0; i < t; ++i) {
      if (!seq.mask[i]) continue;
      const double* row = seq.frames.data() + static_cast<size_t>(i) * kMotionDims;
      for (int j = 0; j < kMotionDims; ++j) {
        sum[j] += row[j];
        sumsq[j] += row[j] * row[j];
      }
      ++count;
    }
  }
  require(count >= 2, "compute_stats: need at least 2 valid frames, got " +
                          std::to_string(count));
  std::vector<double> mean(kMotionDims), stddev(kMotionDims);
  for (int j = 0; j < kMotionDims; ++j) {
    mean[j] = sum[j] / count;
    const double var = std::max(0.0, sumsq[j] / count - mean[j] * mean[j]);
    stddev[j] = std::max(std::sqrt(var), kStdFloor);  // population std
  }
  NormStats stats;
  stats.mean = Tensor::from_data({kMotionDims}, std::move(mean));
  stats.std = Tensor::from_data({kMotionDims}, std::move(stddev));
  return stats;
}

Tensor normalize(const Tensor& frames, const NormStats& stats) {
  require(frames.ndim() == 2 && frames.cols() == kMotionDims,
          "normalize: bad frame shape " + shape_str(frames.shape()));
  Tensor out = Tensor::zeros(frames.shape());
  const double* mu = stats.mean.data();
  const double* sd = stats.std.data();
  for (int i = 0; i < frames.rows(); ++i) {
    const double* x = frames.data() + static_cast<size_t>(i) * kMotionDims;
    double* y = out.mutable_data() + static_cast<size_t>(i) * kMotionDims;
    for (int j = 0; j < kMotionDims; ++j) y[j] = (x[j] - mu[j]) / sd[j];
  }
  return out;
}

Tensor denormalize(const Tensor& frames, const NormStats& stats) {
  require(frames.ndim() == 2 && frames.cols() == kMotionDims,
          "denormalize: bad frame shape " + shape_str(frames.shape()));
  Tensor out = Tensor::zeros(frames.shape());
  const double* mu = stats.mean.data();
  const double* sd = stats.std.data();
  for (int i = 0; i < frames.rows(); ++i) {
    const double* x = frames.data() + static_cast<size_t>(i) * kMotionDims;
    double* y = out.mutable_data() + static_cast<size_t>(i) * kMotionDims;
    for (int j = 0; j < kMotionDims; ++j) y[j] = x[j] * sd[j] + mu[j];
  }
  return out;
}

Tensor q_sample(const Tensor& m0_norm, int t, const Tensor& noise,
                const NoiseSchedule& schedule) {
  require(t >= 0 && t < schedule.steps,
          "q_sample: step " + std::to_string(t) + " out of range [0," +
              std::to_string(schedule.steps) + ")");
  if (m0_norm.shape() != noise.shape())
    shape_error("q_sample", m0_norm.shape(), noise.shape());
  const double ab = schedule.alpha_bar[t];
  const double c0 = std::sqrt(ab), c1 = std::sqrt(1.0 - ab);
  Tensor out = Tensor::zeros(m0_norm.shape());
  for (size_t i = 0; i < out.size(); ++i)
    out.mutable_data()[i] = c0 * m0_norm.data()[i] + c1 * noise.data()[i];
  return out;
}

}  // namespace gg
