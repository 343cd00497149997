#include "gg/metrics.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "gg/ops.hpp"

namespace gg {

double jitter_metric(const JointPositions& positions, double fps) {
  const int t_count = positions.frames, j = positions.joints;
  require(t_count >= 4, "jitter_metric: need at least 4 frames, got " +
                            std::to_string(t_count));
  const double fps3 = fps * fps * fps;
  double acc = 0.0;
  for (int t = 0; t + 3 < t_count; ++t) {
    double frame_acc = 0.0;
    for (int jj = 0; jj < j; ++jj) {
      const double* p0 = positions.at(t, jj);
      const double* p1 = positions.at(t + 1, jj);
      const double* p2 = positions.at(t + 2, jj);
      const double* p3 = positions.at(t + 3, jj);
      double sq = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double d = p3[k] - 3.0 * p2[k] + 3.0 * p1[k] - p0[k];
        sq += d * d;
      }
      frame_acc += std::sqrt(sq) * fps3;
    }
    acc += frame_acc / j;
  }
  return acc / (t_count - 3);
}

namespace {

double foot_step_norm(const JointPositions& pos, const std::vector<int>& feet,
                      int t) {
  double sq = 0.0;
  for (int f : feet) {
    const double* a = pos.at(t, f);
    const double* b = pos.at(t + 1, f);
    for (int k = 0; k < 3; ++k) sq += (b[k] - a[k]) * (b[k] - a[k]);
  }
  return std::sqrt(sq);
}

}  // namespace

FootSlidingResult foot_sliding(const JointPositions& pred,
                               const JointPositions& gt,
                               const Skeleton& skeleton, double thr) {
  require(pred.frames == gt.frames,
          "foot_sliding: sequence length mismatch (" +
              std::to_string(pred.frames) + " vs " + std::to_string(gt.frames) +
              ")");
  require(!skeleton.foot_joints.empty(),
          "foot_sliding: skeleton has no foot joints");
  require(pred.frames >= 2, "foot_sliding: need at least 2 frames");

  double acc = 0.0;
  int contacts = 0;
  for (int t = 0; t + 1 < gt.frames; ++t) {
    if (foot_step_norm(gt, skeleton.foot_joints, t) < thr) {
      acc += foot_step_norm(pred, skeleton.foot_joints, t);
      ++contacts;
    }
  }
  if (contacts == 0) return {0.0, true};
  return {acc / contacts, false};
}

double intra_diversity(const JointPositions& positions) {
  const int n = positions.frames;
  require(n >= 2, "intra_diversity: need at least 2 frames");
  const size_t dims = static_cast<size_t>(positions.joints) * 3;
  double acc = 0.0;
  for (int l = 0; l < n; ++l) {
    const double* pl = positions.at(l, 0);
    for (int j = l + 1; j < n; ++j) {
      const double* pj = positions.at(j, 0);
      double l1 = 0.0;
      for (size_t k = 0; k < dims; ++k) l1 += std::abs(pl[k] - pj[k]);
      acc += 2.0 * l1;  // both ordered pairs (l,j) and (j,l)
    }
  }
  return acc / (2.0 * n * (n - 1));
}

double inter_diversity(const std::vector<MotionSequence>& samples) {
  const int n = static_cast<int>(samples.size());
  require(n >= 2, "inter_diversity: need at least 2 samples");
  const auto& shape = samples[0].frames.shape();
  for (const auto& s : samples)
    if (s.frames.shape() != shape)
      shape_error("inter_diversity", shape, s.frames.shape());
  const size_t numel = samples[0].frames.size();

  double acc = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      double l1 = 0.0;
      const double* pa = samples[a].frames.data();
      const double* pb = samples[b].frames.data();
      for (size_t k = 0; k < numel; ++k) l1 += std::abs(pa[k] - pb[k]);
      acc += l1 / static_cast<double>(numel);  // mean absolute difference
    }
  const double pairs_norm = static_cast<double>(n) * ((n + 1) / 2);
  return acc / pairs_norm;
}

MetricReport evaluate(const std::vector<MotionSequence>& pred_samples,
                      const MotionSequence& gt, const AudioSignal& audio,
                      const Skeleton& skeleton, const EvalConfig& config) {
  require(!pred_samples.empty(), "evaluate: need at least one prediction");
  const int t_gt = gt.num_frames();
  for (const auto& p : pred_samples)
    require(p.num_frames() == t_gt,
            "evaluate: prediction length " + std::to_string(p.num_frames()) +
                " vs ground truth " + std::to_string(t_gt) + " frames");

  MetricReport rep;
  rep.num_samples = static_cast<int>(pred_samples.size());

  const BeatSet audio_beats = detect_audio_beats(audio, config.audio_beats);
  rep.audio_beat_count = static_cast<int>(audio_beats.timestamps.size());

  const JointPositions gt_pos = forward_kinematics(gt, skeleton);

  // FGD pools generated windows across all samples against the gt windows.
  const Tensor real_feats =
      window_stat_features(gt, skeleton, config.fgd_window);
  std::vector<Tensor> gen_parts;
  for (const auto& p : pred_samples)
    gen_parts.push_back(window_stat_features(p, skeleton, config.fgd_window));
  Tensor gen_feats = concat_rows(gen_parts);
  rep.fgd.raw = fgd(real_feats, gen_feats);

  const double inv_n = 1.0 / rep.num_samples;
  for (const auto& p : pred_samples) {
    const JointPositions pos = forward_kinematics(p, skeleton);
    const JointPositions pos_local =
        forward_kinematics(p, skeleton, /*zero_translation=*/true);

    const BeatSet bc_beats =
        detect_motion_beats_bc(p, skeleton, config.joint_subset);
    const BeatSet smooth_beats = detect_motion_beats_smooth(
        p, skeleton, config.joint_subset, config.smooth);
    rep.bc_beat_count += bc_beats.timestamps.size() * inv_n;
    rep.smooth_beat_count += smooth_beats.timestamps.size() * inv_n;
    rep.bc.raw +=
        beat_consistency(bc_beats, audio_beats, config.bc_sigma) * inv_n;
    rep.smooth_bc.raw +=
        beat_consistency(smooth_beats, audio_beats, config.bc_sigma) * inv_n;
    rep.intra_diversity.raw += intra_diversity(pos_local) * inv_n;
    rep.jitter.raw += jitter_metric(pos, p.fps) * inv_n;
    const auto fs = foot_sliding(pos, gt_pos, skeleton, config.foot_thr);
    rep.foot_sliding.raw += fs.value * inv_n;
    rep.foot_no_contact = rep.foot_no_contact || fs.no_contact;
  }

  if (rep.num_samples >= 2) {
    rep.inter_diversity.raw = inter_diversity(pred_samples);
    rep.inter_available = true;
  }

  rep.fgd.scaled = rep.fgd.raw * 1e-1;
  rep.bc.scaled = rep.bc.raw * 1e-1;
  rep.smooth_bc.scaled = rep.smooth_bc.raw * 1e-1;
  rep.intra_diversity.scaled = rep.intra_diversity.raw;
  rep.jitter.scaled = rep.jitter.raw * 1e2;
  rep.foot_sliding.scaled = rep.foot_sliding.raw * 1e-2;
  rep.inter_diversity.scaled = rep.inter_diversity.raw * 1e-2;
  return rep;
}

namespace {

nlohmann::json metric_json(const MetricValue& v) {
  return {{"raw", v.raw}, {"scaled", v.scaled}};
}

}  // namespace

std::string report_to_json(const MetricReport& report) {
  nlohmann::json j;
  j["fgd"] = metric_json(report.fgd);
  j["bc"] = metric_json(report.bc);
  j["smooth_bc"] = metric_json(report.smooth_bc);
  j["intra_diversity"] = metric_json(report.intra_diversity);
  j["jitter"] = metric_json(report.jitter);
  j["foot_sliding"] = metric_json(report.foot_sliding);
  j["inter_diversity"] = metric_json(report.inter_diversity);
  j["flags"] = {{"foot_no_contact", report.foot_no_contact},
                {"inter_available", report.inter_available}};
  j["counts"] = {{"samples", report.num_samples},
                 {"audio_beats", report.audio_beat_count},
                 {"bc_beats", report.bc_beat_count},
                 {"smooth_beats", report.smooth_beat_count}};
  return j.dump(2);
}

std::string report_table(const MetricReport& report) {
  struct Row {
    const char* name;
    const char* scale;
    const MetricValue* value;
  };
  const Row rows[] = {
      {"FGD", "x1e-1", &report.fgd},
      {"BC", "x1e-1", &report.bc},
      {"Smooth-BC", "x1e-1", &report.smooth_bc},
      {"Intra-Diversity", "x1", &report.intra_diversity},
      {"Jitter", "x1e2", &report.jitter},
      {"Foot-Sliding", "x1e-2", &report.foot_sliding},
      {"Inter-Diversity", "x1e-2", &report.inter_diversity},
  };
  std::ostringstream os;
  os << std::left << std::setw(18) << "metric" << std::setw(9) << "scale"
     << std::right << std::setw(16) << "raw" << std::setw(16) << "scaled"
     << "\n";
  os << std::string(59, '-') << "\n";
  for (const Row& r : rows) {
    os << std::left << std::setw(18) << r.name << std::setw(9) << r.scale
       << std::right << std::setw(16) << std::setprecision(6) << r.value->raw
       << std::setw(16) << r.value->scaled << "\n";
  }
  if (report.foot_no_contact)
    os << "note: ground truth has no foot-contact frames; foot sliding is 0\n";
  if (!report.inter_available)
    os << "note: inter-diversity needs >= 2 samples; reported as 0\n";
  return os.str();
}

}  // namespace gg
