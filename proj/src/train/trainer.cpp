#include "gg/trainer.hpp"

namespace gg {

Trainer::Trainer(TrainSetup setup, std::vector<TrainPair> pairs,
                 Skeleton skeleton)
    : setup_(setup), pairs_(std::move(pairs)), skeleton_(std::move(skeleton)),
      rng_(setup.seed) {
  require(!pairs_.empty(), "Trainer: no training pairs");
  require(setup_.batch_size >= 1, "Trainer: batch_size must be >= 1");
  skeleton_.validate();

  model_ = std::make_unique<DualStreamModel>(setup_.model, setup_.audio, rng_);
  schedule_ =
      build_schedule(setup_.schedule_steps, setup_.beta_start, setup_.beta_end);

  std::vector<MotionSequence> corpus;
  corpus.reserve(pairs_.size());
  for (const auto& p : pairs_) corpus.push_back(p.motion);
  stats_ = compute_stats(corpus);
  for (const auto& p : pairs_)
    norm_frames_.push_back(normalize(p.motion.frames, stats_));

  AdamWConfig oc;
  oc.lr = setup_.lr;
  oc.weight_decay = setup_.weight_decay;
  opt_ = AdamW(oc);
}

LossValues Trainer::step() {
  Tape tape;
  Tape::Scope scope(tape);

  Tensor batch_total;
  LossValues vals{};
  const double inv_b = 1.0 / setup_.batch_size;

  for (int b = 0; b < setup_.batch_size; ++b) {
    const size_t idx = cursor_++ % pairs_.size();
    const TrainPair& pair = pairs_[idx];
    const int frames = pair.motion.num_frames();

    MelEnergy augmented = augment_mel(pair.mel, rng_);
    QuantizedTokens tokens =
        temporal_quantize(augmented, setup_.audio.quant_window,
                          setup_.audio.n_bins, QuantizeMode::kTrain, &rng_);
    Tensor features =
        model_->embed_audio(tokens, frames, pair.motion.fps);

    const int t = uniform_int(rng_, 0, schedule_.steps - 1);
    Tensor noise = Tensor::randn({frames, kMotionDims}, rng_);
    Tensor m_t = q_sample(norm_frames_[idx], t, noise, schedule_);

    Tensor pred_norm = model_->forward(features, m_t, t);
    Tensor pred = add_rowvec(mul_rowvec(pred_norm, stats_.std), stats_.mean);

    LossTerms terms = total_loss(pred, pair.motion.frames, skeleton_,
                                 pair.motion.mask, pair.motion.fps,
                                 setup_.weights);
    vals.total += terms.total.item() * inv_b;
    vals.rot6d += terms.rot6d.item() * inv_b;
    vals.trans += terms.trans.item() * inv_b;
    vals.jitter += terms.jitter.item() * inv_b;
    batch_total = b == 0 ? terms.total : add(batch_total, terms.total);
  }

  Tensor loss = scale(batch_total, inv_b);
  tape.backward(loss);
  opt_.step(model_->params());
  model_->params().zero_grads();
  return vals;
}

}  // namespace gg
