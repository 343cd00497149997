// gesturegen: audio-driven co-speech gesture generation pipeline.
// Subcommands: make-toy-data, quantize, train, sample, evaluate,
// noise-diagnostic. Exit codes: 0 ok, 1 contract/assert failure, 2 IO/format.

#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gg/checkpoint.hpp"
#include "gg/io_util.hpp"
#include "gg/metrics.hpp"
#include "gg/sampler.hpp"
#include "gg/toydata.hpp"
#include "gg/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void require_input_file(const std::string& path) {
  if (!fs::exists(path)) throw gg::IoError("input file not found: '" + path + "'");
}

gg::Skeleton skeleton_from_flag(const std::string& path) {
  return path.empty() ? gg::toy_skeleton() : gg::load_skeleton(path);
}

// ---------------------------------------------------------------- make-toy-data

struct ToyDataArgs {
  std::string out_dir = "toydata";
  int count = 4;
  double seconds = 4.0;
  double fps = 30.0;
  double base_beat_hz = 1.5;
  double beat_step = 0.5;
  uint64_t seed = 1;
};

int cmd_make_toy_data(const ToyDataArgs& args) {
  fs::create_directories(args.out_dir);
  json index;
  index["pairs"] = json::array();
  for (int i = 0; i < args.count; ++i) {
    gg::ToyPairSpec spec;
    spec.seconds = args.seconds;
    spec.fps = args.fps;
    spec.beat_hz = args.base_beat_hz + args.beat_step * i;
    spec.seed = args.seed + i;
    const gg::ToyPair pair = gg::make_toy_pair(spec);

    std::ostringstream stem;
    stem << "pair_" << std::setw(3) << std::setfill('0') << i;
    const std::string wav = (fs::path(args.out_dir) / (stem.str() + ".wav")).string();
    const std::string motn = (fs::path(args.out_dir) / (stem.str() + ".motn")).string();
    gg::save_wav(wav, pair.audio);
    gg::save_motion(motn, pair.motion);
    index["pairs"].push_back({{"wav", wav}, {"motion", motn},
                              {"beat_hz", spec.beat_hz}});
    std::cout << stem.str() << ": " << wav << " + " << motn << " (beat "
              << spec.beat_hz << " Hz)\n";
  }
  const std::string skel_path =
      (fs::path(args.out_dir) / "skeleton.json").string();
  gg::save_skeleton(skel_path, gg::toy_skeleton());
  index["skeleton"] = skel_path;
  gg::atomic_write_text((fs::path(args.out_dir) / "index.json").string(),
                        index.dump(2) + "\n");
  return 0;
}

// -------------------------------------------------------------------- quantize

struct QuantizeArgs {
  std::string wav_in, tokens_out, json_out;
  int window = 8;
  int n_bins = 8;
  int n_mels = 40;
  std::string mode = "infer";
  uint64_t seed = 1;
};

int cmd_quantize(const QuantizeArgs& args) {
  require_input_file(args.wav_in);
  const gg::AudioSignal signal = gg::load_wav(args.wav_in);
  const gg::MelEnergy mel = gg::mel_energy(signal, args.n_mels);

  gg::Rng rng(args.seed);
  gg::QuantizedTokens tokens;
  if (args.mode == "train") {
    tokens = gg::temporal_quantize(gg::augment_mel(mel, rng), args.window,
                                   args.n_bins, gg::QuantizeMode::kTrain, &rng);
  } else if (args.mode == "infer") {
    tokens = gg::temporal_quantize(gg::normalize01(mel), args.window,
                                   args.n_bins, gg::QuantizeMode::kInfer);
  } else {
    throw gg::ContractError("quantize: mode must be 'train' or 'infer'");
  }
  gg::save_tokens(args.tokens_out, tokens);
  if (!args.json_out.empty())
    gg::atomic_write_text(args.json_out, gg::tokens_debug_json(tokens) + "\n");
  std::cout << "wrote " << args.tokens_out << ": " << tokens.frames << "x"
            << tokens.bands << " tokens, " << tokens.n_bins
            << " bins, offset " << tokens.offset << "\n";
  return 0;
}

// ----------------------------------------------------------------------- train

struct TrainFileConfig {
  gg::TrainSetup setup;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string out_checkpoint = "model.ckpt";
  std::string out_loss_csv = "loss.csv";
  std::string skeleton_path;
  int steps = 1000;
  int log_every = 25;
};

TrainFileConfig parse_train_config(const std::string& path) {
  json j;
  try {
    j = json::parse(gg::read_text_file(path));
  } catch (const json::exception& e) {
    throw gg::FormatError("train config '" + path + "': " + e.what());
  }
  TrainFileConfig cfg;
  cfg.setup.seed = j.value("seed", 1);
  cfg.steps = j.value("steps", 1000);
  cfg.setup.batch_size = j.value("batch_size", 4);
  cfg.setup.lr = j.value("lr", 1e-4);
  cfg.setup.weight_decay = j.value("weight_decay", 0.0);
  cfg.log_every = j.value("log_every", 25);
  if (j.contains("loss_weights")) {
    const auto& w = j["loss_weights"];
    cfg.setup.weights.rot6d = w.value("rot6d", 1.0);
    cfg.setup.weights.trans = w.value("trans", 1.0);
    cfg.setup.weights.jitter = w.value("jitter", 1e-9);
  }
  if (j.contains("schedule")) {
    const auto& s = j["schedule"];
    cfg.setup.schedule_steps = s.value("steps", 1000);
    cfg.setup.beta_start = s.value("beta_start", 1e-4);
    cfg.setup.beta_end = s.value("beta_end", 2e-2);
  }
  {
    json wrapped;
    wrapped["model"] = j.value("model", json::object());
    wrapped["audio"] = j.value("audio", json::object());
    std::tie(cfg.setup.model, cfg.setup.audio) =
        gg::model_config_from_json(wrapped.dump());
  }
  cfg.setup.model.timesteps = cfg.setup.schedule_steps;
  if (!j.contains("data") || !j["data"].contains("pairs"))
    throw gg::FormatError("train config: missing data.pairs");
  for (const auto& p : j["data"]["pairs"])
    cfg.pairs.emplace_back(p.at("wav").get<std::string>(),
                           p.at("motion").get<std::string>());
  if (j.contains("out")) {
    cfg.out_checkpoint = j["out"].value("checkpoint", cfg.out_checkpoint);
    cfg.out_loss_csv = j["out"].value("loss_csv", cfg.out_loss_csv);
  }
  cfg.skeleton_path = j.value("skeleton", std::string());
  return cfg;
}

std::vector<gg::TrainPair> load_pairs(const TrainFileConfig& cfg) {
  std::vector<gg::TrainPair> pairs;
  for (const auto& [wav_path, motn_path] : cfg.pairs) {
    require_input_file(wav_path);
    require_input_file(motn_path);
    gg::TrainPair pair;
    pair.mel = gg::mel_energy(gg::load_wav(wav_path), cfg.setup.audio.n_mels,
                              cfg.setup.audio.win_ms, cfg.setup.audio.hop_ms);
    pair.motion = gg::load_motion(motn_path);
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

void save_trained(const std::string& path, gg::Trainer& trainer) {
  gg::Checkpoint ckpt;
  gg::checkpoint_from_params(ckpt, trainer.model().params());
  ckpt.put("stats.mean", trainer.stats().mean);
  ckpt.put("stats.std", trainer.stats().std);
  json meta = json::parse(gg::model_config_to_json(
      trainer.model().config(), trainer.model().audio_config()));
  meta["schedule"] = {{"steps", trainer.schedule().steps},
                      {"beta_start", trainer.setup().beta_start},
                      {"beta_end", trainer.setup().beta_end}};
  meta["motion_fps"] = trainer.motion_fps();
  ckpt.meta_json = meta.dump();
  gg::checkpoint_from_optimizer(ckpt, trainer.optimizer());
  gg::save_checkpoint(path, ckpt);
}

int run_one_training(TrainFileConfig cfg, const std::string& resume,
                     const std::string& tag) {
  auto pairs = load_pairs(cfg);
  gg::Trainer trainer(cfg.setup, std::move(pairs),
                      skeleton_from_flag(cfg.skeleton_path));
  if (!resume.empty()) {
    require_input_file(resume);
    const gg::Checkpoint ckpt = gg::load_checkpoint(resume);
    gg::params_from_checkpoint(ckpt, trainer.model().params());
    gg::optimizer_from_checkpoint(ckpt, trainer.optimizer());
  }

  std::ostringstream csv;
  csv << "step,total,rot6d,trans,jitter\n";
  for (int s = 1; s <= cfg.steps; ++s) {
    const gg::LossValues v = trainer.step();
    csv << s << "," << v.total << "," << v.rot6d << "," << v.trans << ","
        << v.jitter << "\n";
    if (s % cfg.log_every == 0 || s == cfg.steps)
      std::cout << (tag.empty() ? "" : "[" + tag + "] ") << "step " << s << "/"
                << cfg.steps << " total " << v.total << " rot6d " << v.rot6d
                << " trans " << v.trans << " jitter " << v.jitter << "\n";
  }
  gg::atomic_write_text(cfg.out_loss_csv, csv.str());
  save_trained(cfg.out_checkpoint, trainer);
  std::cout << "wrote " << cfg.out_checkpoint << " and " << cfg.out_loss_csv
            << "\n";
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& resume,
              const std::string& sweep_jitter) {
  require_input_file(config_path);
  TrainFileConfig cfg = parse_train_config(config_path);
  if (sweep_jitter.empty()) return run_one_training(cfg, resume, "");

  // Jitter-weight sweep: one full run per lambda, outputs tagged per value.
  std::stringstream ss(sweep_jitter);
  std::string item;
  while (std::getline(ss, item, ',')) {
    TrainFileConfig run = cfg;
    run.setup.weights.jitter = std::stod(item);
    const std::string tag = "jitter=" + item;
    auto decorate = [&](const std::string& p) {
      fs::path fp(p);
      return (fp.parent_path() / (fp.stem().string() + ".jitter_" + item +
                                  fp.extension().string()))
          .string();
    };
    run.out_checkpoint = decorate(cfg.out_checkpoint);
    run.out_loss_csv = decorate(cfg.out_loss_csv);
    const int rc = run_one_training(run, resume, tag);
    if (rc != 0) return rc;
  }
  return 0;
}

// ---------------------------------------------------------------------- sample

struct SampleArgs {
  std::string checkpoint, wav, out_prefix = "sample";
  std::string seeds = "1";
  std::string offset_mode = "train";
  int infer_steps = 50;
  int segment_length = 320;
  int segment_overlap = 80;
  double fps = 0.0;  // 0 -> from checkpoint meta
};

struct LoadedModel {
  std::unique_ptr<gg::DualStreamModel> model;
  gg::NormStats stats;
  gg::NoiseSchedule schedule;
  double motion_fps = 30.0;
};

LoadedModel load_model(const std::string& path) {
  require_input_file(path);
  const gg::Checkpoint ckpt = gg::load_checkpoint(path);
  auto [mcfg, acfg] = gg::model_config_from_json(ckpt.meta_json);
  const json meta = json::parse(ckpt.meta_json);

  LoadedModel lm;
  gg::Rng init_rng(0);
  lm.model = std::make_unique<gg::DualStreamModel>(mcfg, acfg, init_rng);
  gg::params_from_checkpoint(ckpt, lm.model->params());
  lm.stats.mean = ckpt.get("stats.mean");
  lm.stats.std = ckpt.get("stats.std");
  const json sched = meta.value("schedule", json::object());
  lm.schedule = gg::build_schedule(sched.value("steps", mcfg.timesteps),
                                   sched.value("beta_start", 1e-4),
                                   sched.value("beta_end", 2e-2));
  lm.motion_fps = meta.value("motion_fps", 30.0);
  return lm;
}

int cmd_sample(const SampleArgs& args) {
  require_input_file(args.wav);
  LoadedModel lm = load_model(args.checkpoint);
  const gg::AudioConfig& acfg = lm.model->audio_config();
  const double fps = args.fps > 0 ? args.fps : lm.motion_fps;

  const gg::AudioSignal signal = gg::load_wav(args.wav);
  const gg::MelEnergy mel =
      gg::mel_energy(signal, acfg.n_mels, acfg.win_ms, acfg.hop_ms);
  const int frames = static_cast<int>(signal.duration() * fps);
  gg::require(frames >= 8, "sample: audio too short (" +
                               std::to_string(frames) + " motion frames)");

  std::stringstream ss(args.seeds);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const uint64_t seed = std::stoull(item);
    gg::Rng rng(seed);

    gg::QuantizedTokens tokens;
    if (args.offset_mode == "train") {
      tokens = gg::temporal_quantize(gg::normalize01(mel), acfg.quant_window,
                                     acfg.n_bins, gg::QuantizeMode::kTrain,
                                     &rng);
    } else if (args.offset_mode == "infer") {
      tokens = gg::temporal_quantize(gg::normalize01(mel), acfg.quant_window,
                                     acfg.n_bins, gg::QuantizeMode::kInfer);
    } else {
      throw gg::ContractError("sample: offset-mode must be train or infer");
    }

    gg::Tensor features = lm.model->embed_audio(tokens, frames, fps);
    gg::SegmentPlan plan{args.segment_length, args.segment_overlap};
    gg::Tensor norm = gg::generate_long(*lm.model, features, lm.schedule,
                                        args.infer_steps, plan, rng);
    gg::MotionSequence motion =
        gg::make_motion(gg::denormalize(norm, lm.stats), fps);
    const std::string out = args.out_prefix + ".seed" + item + ".motn";
    gg::save_motion(out, motion);
    std::cout << "wrote " << out << " (" << motion.num_frames()
              << " frames)\n";
  }
  return 0;
}

// -------------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::vector<std::string> preds;
  std::string gt, wav, out_json, skeleton;
  int fgd_window = 30;
  double sigma = 0.1;
  int smooth_window = 5;
  double foot_thr = 1e-2;
};

int cmd_evaluate(const EvaluateArgs& args) {
  for (const auto& p : args.preds) require_input_file(p);
  require_input_file(args.gt);
  require_input_file(args.wav);

  std::vector<gg::MotionSequence> preds;
  for (const auto& p : args.preds) preds.push_back(gg::load_motion(p));
  const gg::MotionSequence gt = gg::load_motion(args.gt);
  const gg::AudioSignal audio = gg::load_wav(args.wav);
  const gg::Skeleton skeleton = skeleton_from_flag(args.skeleton);

  gg::EvalConfig cfg;
  cfg.bc_sigma = args.sigma;
  cfg.fgd_window = args.fgd_window;
  cfg.smooth.window = args.smooth_window;
  cfg.foot_thr = args.foot_thr;

  const gg::MetricReport report =
      gg::evaluate(preds, gt, audio, skeleton, cfg);
  std::cout << gg::report_table(report);
  if (!args.out_json.empty())
    gg::atomic_write_text(args.out_json, gg::report_to_json(report) + "\n");
  return 0;
}

// ------------------------------------------------------------- noise-diagnostic

struct NoiseDiagArgs {
  std::string wav, out_json;
  uint64_t seed = 1;
  double fps = 30.0;
  double bc_floor = 0.5;
  double smooth_ceiling = 0.02;
};

int cmd_noise_diagnostic(const NoiseDiagArgs& args) {
  require_input_file(args.wav);
  const gg::AudioSignal audio = gg::load_wav(args.wav);
  const gg::BeatSet audio_beats = gg::detect_audio_beats(audio);

  const int frames = static_cast<int>(audio.duration() * args.fps);
  gg::require(frames >= 16, "noise-diagnostic: audio too short");
  const gg::MotionSequence noise = gg::noise_motion(frames, args.fps, args.seed);
  const gg::Skeleton skeleton = gg::toy_skeleton();

  const gg::BeatSet bc_beats = gg::detect_motion_beats_bc(noise, skeleton);
  const gg::BeatSet smooth_beats =
      gg::detect_motion_beats_smooth(noise, skeleton);
  const double bc = gg::beat_consistency(bc_beats, audio_beats);
  const double smooth = gg::beat_consistency(smooth_beats, audio_beats);
  const bool pass = bc >= args.bc_floor && smooth <= args.smooth_ceiling;

  json j;
  j["bc"] = {{"raw", bc}, {"scaled", bc * 1e-1}, {"beats", bc_beats.timestamps.size()}};
  j["smooth_bc"] = {{"raw", smooth},
                    {"scaled", smooth * 1e-1},
                    {"beats", smooth_beats.timestamps.size()}};
  j["audio_beats"] = audio_beats.timestamps.size();
  j["separation"] = smooth > 0 ? bc / smooth : -1.0;  // -1 = infinite
  j["thresholds"] = {{"bc_floor", args.bc_floor},
                     {"smooth_ceiling", args.smooth_ceiling}};
  j["pass"] = pass;
  const std::string text = j.dump(2);
  std::cout << text << "\n";
  if (!args.out_json.empty()) gg::atomic_write_text(args.out_json, text + "\n");

  if (!pass) {
    std::cerr << "noise-diagnostic: separation FAILED (bc=" << bc
              << " smooth=" << smooth << ")\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"audio-driven co-speech gesture generation"};
  app.require_subcommand(1);

  ToyDataArgs toy;
  auto* toy_cmd = app.add_subcommand("make-toy-data",
                                     "synthesize aligned audio/motion pairs");
  toy_cmd->add_option("--out-dir", toy.out_dir);
  toy_cmd->add_option("--count", toy.count);
  toy_cmd->add_option("--seconds", toy.seconds);
  toy_cmd->add_option("--fps", toy.fps);
  toy_cmd->add_option("--beat-hz", toy.base_beat_hz);
  toy_cmd->add_option("--beat-step", toy.beat_step);
  toy_cmd->add_option("--seed", toy.seed);

  QuantizeArgs quant;
  auto* quant_cmd =
      app.add_subcommand("quantize", "wav -> quantized mel token file");
  quant_cmd->add_option("--in", quant.wav_in)->required();
  quant_cmd->add_option("--out", quant.tokens_out)->required();
  quant_cmd->add_option("--json", quant.json_out);
  quant_cmd->add_option("--window", quant.window);
  quant_cmd->add_option("--bins", quant.n_bins);
  quant_cmd->add_option("--mels", quant.n_mels);
  quant_cmd->add_option("--mode", quant.mode);
  quant_cmd->add_option("--seed", quant.seed);

  std::string train_config, train_resume, train_sweep;
  auto* train_cmd = app.add_subcommand("train", "train from a JSON config");
  train_cmd->add_option("--config", train_config)->required();
  train_cmd->add_option("--resume", train_resume);
  train_cmd->add_option("--sweep-jitter", train_sweep,
                        "comma-separated jitter-loss weights");

  SampleArgs sample;
  auto* sample_cmd =
      app.add_subcommand("sample", "DDIM-sample motion from audio");
  sample_cmd->add_option("--checkpoint", sample.checkpoint)->required();
  sample_cmd->add_option("--wav", sample.wav)->required();
  sample_cmd->add_option("--out", sample.out_prefix);
  sample_cmd->add_option("--seeds", sample.seeds);
  sample_cmd->add_option("--steps", sample.infer_steps);
  sample_cmd->add_option("--offset-mode", sample.offset_mode);
  sample_cmd->add_option("--segment-length", sample.segment_length);
  sample_cmd->add_option("--segment-overlap", sample.segment_overlap);
  sample_cmd->add_option("--fps", sample.fps);

  EvaluateArgs eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "metric report");
  eval_cmd->add_option("--pred", eval.preds)->required();
  eval_cmd->add_option("--gt", eval.gt)->required();
  eval_cmd->add_option("--wav", eval.wav)->required();
  eval_cmd->add_option("--out-json", eval.out_json);
  eval_cmd->add_option("--skeleton", eval.skeleton);
  eval_cmd->add_option("--fgd-window", eval.fgd_window);
  eval_cmd->add_option("--sigma", eval.sigma);
  eval_cmd->add_option("--smooth-window", eval.smooth_window);
  eval_cmd->add_option("--foot-thr", eval.foot_thr);

  NoiseDiagArgs diag;
  auto* diag_cmd = app.add_subcommand(
      "noise-diagnostic", "BC vs Smooth-BC separation on noise motion");
  diag_cmd->add_option("--wav", diag.wav)->required();
  diag_cmd->add_option("--out-json", diag.out_json);
  diag_cmd->add_option("--seed", diag.seed);
  diag_cmd->add_option("--fps", diag.fps);
  diag_cmd->add_option("--bc-floor", diag.bc_floor);
  diag_cmd->add_option("--smooth-ceiling", diag.smooth_ceiling);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (toy_cmd->parsed()) return cmd_make_toy_data(toy);
    if (quant_cmd->parsed()) return cmd_quantize(quant);
    if (train_cmd->parsed())
      return cmd_train(train_config, train_resume, train_sweep);
    if (sample_cmd->parsed()) return cmd_sample(sample);
    if (eval_cmd->parsed()) return cmd_evaluate(eval);
    if (diag_cmd->parsed()) return cmd_noise_diagnostic(diag);
  } catch (const gg::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const gg::ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const gg::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
